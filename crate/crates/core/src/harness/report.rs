use std::fmt;

use serde::Serialize;

use crate::bitops::Word;
use crate::machine::{HostEvent, HostEventKind, MachineState};
use crate::speccheck::Violation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExitReason {
    Halted,
    FuelExhausted,
}

/// A specification violation observed at iteration `step` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepViolation {
    pub step: u64,
    pub component: String,
    pub expected: String,
    pub observed: String,
}

impl StepViolation {
    pub fn new(step: u64, v: Violation) -> Self {
        StepViolation { step, component: v.component, expected: v.expected, observed: v.observed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub exit_reason: ExitReason,
    pub steps: u64,
    pub pc: Word,
    pub regs: Vec<Word>,
    pub halt: bool,
    pub trace: Vec<HostEvent>,
    /// Number of iterations whose specifications were checked.
    pub checks: u64,
    pub violations: Vec<StepViolation>,
}

#[derive(Serialize)]
struct TraceJson {
    kind: HostEventKind,
    pc: String,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    exit_reason: ExitReason,
    steps: u64,
    pc: String,
    regs: Vec<String>,
    halt: bool,
    trace: Vec<TraceJson>,
    checks: u64,
    violations: &'a [StepViolation],
}

fn hex(w: Word) -> String {
    format!("{:#x}", w.get())
}

impl RunReport {
    pub fn new(s: &MachineState, steps: u64, checks: u64, violations: Vec<StepViolation>) -> Self {
        RunReport {
            exit_reason: if s.halt { ExitReason::Halted } else { ExitReason::FuelExhausted },
            steps,
            pc: s.pc,
            regs: s.regs.clone(),
            halt: s.halt,
            trace: s.trace.clone(),
            checks,
            violations,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// The JSON report. Hex values are lowercase and `0x`-prefixed.
    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            exit_reason: self.exit_reason,
            steps: self.steps,
            pc: hex(self.pc),
            regs: self.regs.iter().copied().map(hex).collect(),
            halt: self.halt,
            trace: self.trace.iter().map(|e| TraceJson { kind: e.kind, pc: hex(e.pc) }).collect(),
            checks: self.checks,
            violations: &self.violations,
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "exit: {:?} after {} steps", self.exit_reason, self.steps)?;
        writeln!(f, "pc:   {:#010x}  halt: {}", self.pc.get(), self.halt)?;
        for (k, row) in self.regs.chunks(4).enumerate() {
            let cells: Vec<String> =
                row.iter().enumerate().map(|(j, w)| format!("x{:<2} {:#010x}", 4 * k + j, w.get())).collect();
            writeln!(f, "  {}", cells.join("  "))?;
        }
        for e in &self.trace {
            writeln!(f, "event: {:?} at {:#x}", e.kind, e.pc.get())?;
        }
        write!(f, "spec checks: {}, violations: {}", self.checks, self.violations.len())?;
        for v in &self.violations {
            write!(
                f,
                "\n  step {}: {} expected {} observed {}",
                v.step, v.component, v.expected, v.observed
            )?;
        }
        Ok(())
    }
}
