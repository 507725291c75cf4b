//! Executable instruction specifications.
//!
//! Three independent checks run against every `(pre, instr, post)` triple:
//!
//! - [`postcondition_oracle`] recomputes the fields an instruction computes
//!   from the pre-state alone, without calling any handler in [`crate::exec`].
//! - [`check_frame`] asserts that nothing outside the instruction's declared
//!   [`FrameFootprint`] changed.
//! - [`check_global`] asserts the step invariants that hold for every
//!   instruction: 32 registers, `x0 = 0`, pc in range, the CSR and memory
//!   frames, and halt absorption.
//!
//! Disagreement is reported as a [`SpecVerdict`], never as a panic.

mod footprint;
mod mutate;
mod oracle;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

pub use footprint::{footprint_of, illegal_footprint};
pub use mutate::{mutations_outside, Mutation};
pub use oracle::{illegal_oracle, postcondition_oracle};

use crate::bitops::Word;
use crate::isa::{is_csr, is_memory_write, Instr};
use crate::machine::{csr_read, mem_byte, CsrFile, MachineState, Memory, RegIdx, NUM_REGS};

/// A named piece of machine state, or a named specification clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Reg(u8),
    RegLen,
    Pc,
    Mem(Word),
    Csr(u16),
    Halt,
    Mode,
    Trace,
    /// The whole memory map (global memory frame).
    MemMap,
    /// The whole CSR file (global CSR frame).
    CsrMap,
    HaltAbsorption,
    Clause(&'static str),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Reg(i) => write!(f, "x{i}"),
            Component::RegLen => f.write_str("regs.len"),
            Component::Pc => f.write_str("pc"),
            Component::Mem(a) => write!(f, "mem[{a:#x}]"),
            Component::Csr(a) => write!(f, "csr[{a:#x}]"),
            Component::Halt => f.write_str("halt"),
            Component::Mode => f.write_str("mode"),
            Component::Trace => f.write_str("trace"),
            Component::MemMap => f.write_str("mem"),
            Component::CsrMap => f.write_str("csrs"),
            Component::HaltAbsorption => f.write_str("halt_absorption"),
            Component::Clause(name) => f.write_str(name),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub component: String,
    pub expected: String,
    pub observed: String,
}

/// Outcome of one check. Passes exactly when there are no violations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecVerdict {
    violations: Vec<Violation>,
}

impl SpecVerdict {
    pub fn pass() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn into_violations(self) -> Vec<Violation> {
        self.violations
    }

    pub fn flags(&self, component: &str) -> bool {
        self.violations.iter().any(|v| v.component == component)
    }

    pub fn merge(mut self, other: SpecVerdict) -> SpecVerdict {
        self.violations.extend(other.violations);
        self
    }

    pub(crate) fn record(
        &mut self,
        component: Component,
        expected: impl fmt::Display,
        observed: impl fmt::Display,
    ) {
        self.violations.push(Violation {
            component: component.to_string(),
            expected: expected.to_string(),
            observed: observed.to_string(),
        });
    }

    pub(crate) fn expect_eq<T: PartialEq + fmt::Debug>(
        &mut self,
        component: Component,
        expected: T,
        observed: T,
    ) {
        if expected != observed {
            self.record(component, format!("{expected:?}"), format!("{observed:?}"));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemFootprint {
    None,
    Bytes(BTreeSet<Word>),
}

impl MemFootprint {
    pub fn contains(&self, addr: Word) -> bool {
        match self {
            MemFootprint::None => false,
            MemFootprint::Bytes(set) => set.contains(&addr),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CsrFootprint {
    None,
    Addrs(BTreeSet<u16>),
}

impl CsrFootprint {
    pub fn contains(&self, addr: u16) -> bool {
        match self {
            CsrFootprint::None => false,
            CsrFootprint::Addrs(set) => set.contains(&addr),
        }
    }
}

/// The state components an instruction may modify. Everything else must be
/// bit-identical between pre- and post-state. `x0` is never writable and the
/// privilege mode is always frozen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameFootprint {
    writable_regs: BTreeSet<RegIdx>,
    pub may_change_pc: bool,
    pub writable_mem: MemFootprint,
    pub may_change_csrs: CsrFootprint,
    pub may_change_halt: bool,
    pub may_append_trace: bool,
}

impl FrameFootprint {
    /// Nothing may change.
    pub fn frozen() -> Self {
        FrameFootprint {
            writable_regs: BTreeSet::new(),
            may_change_pc: false,
            writable_mem: MemFootprint::None,
            may_change_csrs: CsrFootprint::None,
            may_change_halt: false,
            may_append_trace: false,
        }
    }

    /// Adds `rd` to the writable registers unless it is `x0`.
    pub fn with_reg(mut self, rd: RegIdx) -> Self {
        if !rd.is_zero() {
            self.writable_regs.insert(rd);
        }
        self
    }

    pub fn with_pc(mut self) -> Self {
        self.may_change_pc = true;
        self
    }

    pub fn writable_regs(&self) -> &BTreeSet<RegIdx> {
        &self.writable_regs
    }

    pub fn reg_writable(&self, i: usize) -> bool {
        self.writable_regs.iter().any(|r| r.index() == i)
    }
}

fn diff_bytes(pre: &Memory, post: &Memory) -> BTreeSet<Word> {
    if pre.ptr_eq(post) {
        return BTreeSet::new();
    }
    pre.keys().chain(post.keys()).copied().filter(|&a| mem_byte(pre, a) != mem_byte(post, a)).collect()
}

fn diff_csrs(pre: &CsrFile, post: &CsrFile) -> BTreeSet<u16> {
    if pre.ptr_eq(post) {
        return BTreeSet::new();
    }
    pre.keys().chain(post.keys()).copied().filter(|&a| csr_read(pre, a) != csr_read(post, a)).collect()
}

/// Checks that every component outside `fp` is unchanged. Memory and CSRs
/// are compared observationally: an absent entry equals an explicit zero.
pub fn check_frame(pre: &MachineState, post: &MachineState, fp: &FrameFootprint) -> SpecVerdict {
    let mut v = SpecVerdict::pass();

    if post.regs.len() != pre.regs.len() {
        v.record(Component::RegLen, pre.regs.len(), post.regs.len());
    }
    for (k, (a, b)) in pre.regs.iter().zip(&post.regs).enumerate() {
        if a != b && !fp.reg_writable(k) {
            v.record(Component::Reg(k as u8), a, b);
        }
    }

    if !fp.may_change_pc && pre.pc != post.pc {
        v.record(Component::Pc, pre.pc, post.pc);
    }

    for addr in diff_bytes(&pre.mem, &post.mem) {
        if !fp.writable_mem.contains(addr) {
            v.record(
                Component::Mem(addr),
                format_args!("{:#x}", mem_byte(&pre.mem, addr)),
                format_args!("{:#x}", mem_byte(&post.mem, addr)),
            );
        }
    }

    for addr in diff_csrs(&pre.csrs, &post.csrs) {
        if !fp.may_change_csrs.contains(addr) {
            v.record(Component::Csr(addr), csr_read(&pre.csrs, addr), csr_read(&post.csrs, addr));
        }
    }

    if !fp.may_change_halt && pre.halt != post.halt {
        v.record(Component::Halt, pre.halt, post.halt);
    }
    if pre.mode != post.mode {
        v.record(Component::Mode, format_args!("{:?}", pre.mode), format_args!("{:?}", post.mode));
    }

    let trace_ok =
        if fp.may_append_trace { post.trace.starts_with(&pre.trace) } else { post.trace == pre.trace };
    if !trace_ok {
        v.record(
            Component::Trace,
            format_args!("{:?}{}", pre.trace, if fp.may_append_trace { " ++ _" } else { "" }),
            format_args!("{:?}", post.trace),
        );
    }
    v
}

fn check_structural(pre: &MachineState, post: &MachineState, v: &mut SpecVerdict) {
    if pre.regs.len() == NUM_REGS && post.regs.len() != NUM_REGS {
        v.record(Component::RegLen, NUM_REGS, post.regs.len());
    }
    if pre.regs.first() == Some(&Word::ZERO) && post.regs.first() != Some(&Word::ZERO) {
        v.record(Component::Reg(0), Word::ZERO, format_args!("{:?}", post.regs.first()));
    }
    if post.pc.get() as u64 >= 1 << 32 {
        v.record(Component::Pc, "pc < 2^32", post.pc);
    }
}

/// The step invariants that hold for every instruction.
pub fn check_global(pre: &MachineState, i: &Instr, post: &MachineState) -> SpecVerdict {
    let mut v = SpecVerdict::pass();
    check_structural(pre, post, &mut v);
    if !is_csr(i) && !pre.halt && post.csrs != pre.csrs {
        v.record(Component::CsrMap, "unchanged", "modified");
    }
    if !is_memory_write(i) && post.mem != pre.mem {
        v.record(Component::MemMap, "unchanged", "modified");
    }
    if pre.halt && post != pre {
        v.record(Component::HaltAbsorption, "post = pre", "post differs");
    }
    v
}

/// Global invariants for an iteration that fetched an undecodable word.
pub fn check_global_illegal(pre: &MachineState, post: &MachineState) -> SpecVerdict {
    let mut v = SpecVerdict::pass();
    check_structural(pre, post, &mut v);
    if post.csrs != pre.csrs {
        v.record(Component::CsrMap, "unchanged", "modified");
    }
    if post.mem != pre.mem {
        v.record(Component::MemMap, "unchanged", "modified");
    }
    if pre.halt && post != pre {
        v.record(Component::HaltAbsorption, "post = pre", "post differs");
    }
    v
}

/// All three checks for one executed instruction.
pub fn check_step(pre: &MachineState, i: &Instr, post: &MachineState) -> SpecVerdict {
    postcondition_oracle(i, pre, post)
        .merge(check_frame(pre, post, &footprint_of(i, pre)))
        .merge(check_global(pre, i, post))
}

/// All three checks for an iteration that hit an undecodable word.
pub fn check_illegal_step(pre: &MachineState, post: &MachineState) -> SpecVerdict {
    illegal_oracle(pre, post)
        .merge(check_frame(pre, post, &illegal_footprint()))
        .merge(check_global_illegal(pre, post))
}
