use std::collections::BTreeSet;

use super::{CsrFootprint, FrameFootprint, MemFootprint};
use crate::bitops::{addr_mod, sext_from};
use crate::isa::{CsrImm, CsrReg, Instr, SType};
use crate::machine::{read_reg, MachineState};

fn store_bytes(pre: &MachineState, s: SType, width: u32) -> MemFootprint {
    let base = read_reg(&pre.regs, s.rs1).to_int() + sext_from(12, s.imm12 as i128);
    MemFootprint::Bytes((0..width).map(|j| addr_mod(base + j as i128)).collect())
}

fn csr_reg(c: CsrReg, always_writes: bool) -> CsrFootprint {
    if always_writes || !c.rs1.is_zero() {
        CsrFootprint::Addrs(BTreeSet::from([c.csr]))
    } else {
        CsrFootprint::None
    }
}

fn csr_imm(c: CsrImm, always_writes: bool) -> CsrFootprint {
    if always_writes || c.zimm != 0 {
        CsrFootprint::Addrs(BTreeSet::from([c.csr]))
    } else {
        CsrFootprint::None
    }
}

/// The components `i` may modify when executed from `pre`. Store and CSR
/// footprints are exact: they name the concrete bytes and CSR address the
/// instruction can touch from this pre-state.
pub fn footprint_of(i: &Instr, pre: &MachineState) -> FrameFootprint {
    use Instr::*;
    let base = FrameFootprint::frozen();
    match *i {
        Ecall | Ebreak => FrameFootprint { may_change_halt: true, may_append_trace: true, ..base },
        Sb(s) => FrameFootprint { writable_mem: store_bytes(pre, s, 1), ..base.with_pc() },
        Sh(s) => FrameFootprint { writable_mem: store_bytes(pre, s, 2), ..base.with_pc() },
        Sw(s) => FrameFootprint { writable_mem: store_bytes(pre, s, 4), ..base.with_pc() },
        Csrrw(c) => FrameFootprint { may_change_csrs: csr_reg(c, true), ..base.with_pc().with_reg(c.rd) },
        Csrrs(c) | Csrrc(c) => {
            FrameFootprint { may_change_csrs: csr_reg(c, false), ..base.with_pc().with_reg(c.rd) }
        }
        Csrrwi(c) => FrameFootprint { may_change_csrs: csr_imm(c, true), ..base.with_pc().with_reg(c.rd) },
        Csrrsi(c) | Csrrci(c) => {
            FrameFootprint { may_change_csrs: csr_imm(c, false), ..base.with_pc().with_reg(c.rd) }
        }
        _ => match i.rd() {
            Some(rd) => base.with_pc().with_reg(rd),
            // branches and fences
            None => base.with_pc(),
        },
    }
}

/// Footprint of an iteration that fetched an undecodable word.
pub fn illegal_footprint() -> FrameFootprint {
    FrameFootprint { may_change_halt: true, may_append_trace: true, ..FrameFootprint::frozen() }
}
