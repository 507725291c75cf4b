//! Host layer: loading images, driving the core, and reporting.
//!
//! This is the only place that deals in files, limits and report formats.
//! Everything it executes goes through [`crate::exec::cycle`].

mod corpus;
mod format;
mod report;

use thiserror::Error;

pub use corpus::{directed_corpus, run_case, run_corpus, CaseResult, CorpusCase, CorpusSummary, Expectation};
pub use format::{parse_hex_words, read_image_bytes, InputFormat};
pub use report::{ExitReason, RunReport, StepViolation};

use crate::bitops::{addr_mod, Word};
use crate::exec::cycle;
use crate::isa::DecodeResult;
use crate::machine::MachineState;
use crate::speccheck::{check_illegal_step, check_step};

/// Default cap on image size, in bytes.
pub const DEFAULT_IMAGE_LIMIT: usize = 1 << 24;

/// Step budget used by [`fuzz_one`].
pub const FUZZ_FUEL: u64 = 1000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("image is {len} bytes, limit is {limit}")]
    ImageTooLarge { len: usize, limit: usize },
    #[error("line {line}: expected a 0x-prefixed 32-bit word, found {text:?}")]
    HexParse { line: usize, text: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A flat program image. Bytes are placed at `base`, `base + 1`, ...
/// wrapping modulo 2^32.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgramImage {
    pub base: Word,
    pub bytes: Vec<u8>,
    pub entry: Word,
}

impl ProgramImage {
    /// Image at base 0 with entry 0.
    pub fn flat(bytes: impl Into<Vec<u8>>) -> Self {
        ProgramImage { base: Word::ZERO, bytes: bytes.into(), entry: Word::ZERO }
    }

    /// Image made of little-endian instruction words.
    pub fn from_words(base: Word, words: &[u32]) -> Self {
        ProgramImage { base, bytes: words.iter().flat_map(|w| w.to_le_bytes()).collect(), entry: base }
    }
}

pub fn load_image(img: &ProgramImage) -> Result<MachineState, HarnessError> {
    load_image_with_limit(img, DEFAULT_IMAGE_LIMIT)
}

/// Builds a fresh state: zero registers, pc at the entry point, memory
/// holding the image, no CSRs, not halted, empty trace.
pub fn load_image_with_limit(img: &ProgramImage, limit: usize) -> Result<MachineState, HarnessError> {
    if img.bytes.len() > limit {
        return Err(HarnessError::ImageTooLarge { len: img.bytes.len(), limit });
    }
    let mut s = MachineState::at(img.entry);
    s.mem =
        img.bytes.iter().enumerate().map(|(k, &b)| (addr_mod(img.base.to_int() + k as i128), b)).collect();
    Ok(s)
}

/// Drives an already-loaded state for up to `fuel` iterations.
pub fn run_state(start: MachineState, fuel: u64, check_specs: bool) -> RunReport {
    let mut s = start;
    let mut steps = 0u64;
    let mut checks = 0u64;
    let mut violations = Vec::new();
    while steps < fuel && !s.halt {
        let (decoded, out) = cycle(&s);
        if check_specs {
            let verdict = match decoded {
                DecodeResult::Valid(i) => check_step(&s, &i, &out.next),
                DecodeResult::Illegal(_) => check_illegal_step(&s, &out.next),
            };
            checks += 1;
            violations.extend(verdict.into_violations().into_iter().map(|v| StepViolation::new(steps, v)));
        }
        s = out.next;
        steps += 1;
    }
    RunReport::new(&s, steps, checks, violations)
}

pub fn run_program(img: &ProgramImage, fuel: u64, check_specs: bool) -> Result<RunReport, HarnessError> {
    Ok(run_state(load_image(img)?, fuel, check_specs))
}

/// Fuzzer entry point: arbitrary bytes as an image at address 0, 1000 steps
/// of fuel, all specifications checked. Inputs beyond the image limit are
/// truncated, so this returns a report for every input.
pub fn fuzz_one(input: &[u8]) -> RunReport {
    let bytes = &input[..input.len().min(DEFAULT_IMAGE_LIMIT)];
    let img = ProgramImage::flat(bytes);
    match load_image(&img) {
        Ok(s) => run_state(s, FUZZ_FUEL, true),
        Err(_) => unreachable!("input truncated to the image limit"),
    }
}
