//! Computes clauses, recomputed from the pre-state.
//!
//! Nothing here calls into `exec`. Expected values come from the
//! instruction formulas evaluated over wide integers with the `bitops`
//! helpers, plus raw byte reads for memory.

use super::{Component, SpecVerdict};
use crate::bitops::{jalr_target, low_bits, sext_from, Word};
use crate::isa::Instr;
use crate::machine::{csr_read, mem_byte, HostEvent, HostEventKind, MachineState, RegIdx};

#[derive(Default)]
struct Expect {
    rd: Option<(RegIdx, i128)>,
    pc: i128,
    mem: Vec<(i128, i128)>,
    csr: Option<(u16, i128)>,
    event: Option<HostEventKind>,
}

fn x(pre: &MachineState, r: RegIdx) -> i128 {
    pre.regs.get(r.index()).map_or(0, |w| w.get() as i128)
}

fn byte_at(pre: &MachineState, addr: i128) -> i128 {
    mem_byte(&pre.mem, Word::new(low_bits(32, addr) as u32)) as i128
}

fn load_le(pre: &MachineState, addr: i128, bytes: u32) -> i128 {
    (0..bytes).map(|j| byte_at(pre, addr + j as i128) * 256i128.pow(j)).sum()
}

fn pow2(k: i128) -> i128 {
    1i128 << low_bits(5, k)
}

fn bitwise(a: i128, b: i128, f: fn(u32, u32) -> u32) -> i128 {
    f(low_bits(32, a) as u32, low_bits(32, b) as u32) as i128
}

fn signed(v: i128) -> i128 {
    sext_from(32, v)
}

fn expect(i: &Instr, pre: &MachineState) -> Expect {
    use Instr::*;
    let pc = pre.pc.get() as i128;
    let next = pc + 4;
    let write = |rd: RegIdx, v: i128| Expect { rd: Some((rd, v)), pc: next, ..Default::default() };
    let branch = |b: crate::isa::BType, cond: fn(i128, i128) -> bool| {
        let taken = cond(x(pre, b.rs1), x(pre, b.rs2));
        Expect { pc: if taken { pc + sext_from(13, b.imm13 as i128) } else { next }, ..Default::default() }
    };
    let ea = |rs1: RegIdx, imm12: u32| x(pre, rs1) + sext_from(12, imm12 as i128);
    let store = |s: crate::isa::SType, bytes: u32| {
        let base = ea(s.rs1, s.imm12);
        let v = x(pre, s.rs2);
        Expect {
            pc: next,
            mem: (0..bytes).map(|j| (base + j as i128, (v / 256i128.pow(j)) % 256)).collect(),
            ..Default::default()
        }
    };
    let csr = |rd: RegIdx, csr: u16, new: Option<i128>| {
        let old = csr_read(&pre.csrs, csr).get() as i128;
        Expect { rd: Some((rd, old)), pc: next, csr: Some((csr, new.unwrap_or(old))), ..Default::default() }
    };
    let old_csr = |c: u16| csr_read(&pre.csrs, c).get() as i128;

    match *i {
        Lui(u) => write(u.rd, u.imm20 as i128 * 4096),
        Auipc(u) => write(u.rd, pc + u.imm20 as i128 * 4096),
        Jal(j) => {
            Expect { rd: Some((j.rd, next)), pc: pc + sext_from(21, j.imm21 as i128), ..Default::default() }
        }
        Jalr(j) => Expect {
            rd: Some((j.rd, next)),
            pc: jalr_target(ea(j.rs1, j.imm12)).get() as i128,
            ..Default::default()
        },
        Beq(b) => branch(b, |a, c| a == c),
        Bne(b) => branch(b, |a, c| a != c),
        Blt(b) => branch(b, |a, c| signed(a) < signed(c)),
        Bge(b) => branch(b, |a, c| signed(a) >= signed(c)),
        Bltu(b) => branch(b, |a, c| a < c),
        Bgeu(b) => branch(b, |a, c| a >= c),
        Lb(l) => write(l.rd, sext_from(8, load_le(pre, ea(l.rs1, l.imm12), 1))),
        Lh(l) => write(l.rd, sext_from(16, load_le(pre, ea(l.rs1, l.imm12), 2))),
        Lw(l) => write(l.rd, load_le(pre, ea(l.rs1, l.imm12), 4)),
        Lbu(l) => write(l.rd, load_le(pre, ea(l.rs1, l.imm12), 1)),
        Lhu(l) => write(l.rd, load_le(pre, ea(l.rs1, l.imm12), 2)),
        Sb(s) => store(s, 1),
        Sh(s) => store(s, 2),
        Sw(s) => store(s, 4),
        Addi(a) => write(a.rd, x(pre, a.rs1) + sext_from(12, a.imm12 as i128)),
        Slti(a) => write(a.rd, (signed(x(pre, a.rs1)) < sext_from(12, a.imm12 as i128)) as i128),
        Sltiu(a) => write(a.rd, (x(pre, a.rs1) < low_bits(32, sext_from(12, a.imm12 as i128))) as i128),
        Xori(a) => write(a.rd, bitwise(x(pre, a.rs1), sext_from(12, a.imm12 as i128), |p, q| p ^ q)),
        Ori(a) => write(a.rd, bitwise(x(pre, a.rs1), sext_from(12, a.imm12 as i128), |p, q| p | q)),
        Andi(a) => write(a.rd, bitwise(x(pre, a.rs1), sext_from(12, a.imm12 as i128), |p, q| p & q)),
        Slli(s) => write(s.rd, x(pre, s.rs1) * pow2(s.shamt as i128)),
        Srli(s) => write(s.rd, x(pre, s.rs1) / pow2(s.shamt as i128)),
        Srai(s) => write(s.rd, signed(x(pre, s.rs1)) >> low_bits(5, s.shamt as i128)),
        Add(r) => write(r.rd, x(pre, r.rs1) + x(pre, r.rs2)),
        Sub(r) => write(r.rd, x(pre, r.rs1) - x(pre, r.rs2)),
        Sll(r) => write(r.rd, x(pre, r.rs1) * pow2(x(pre, r.rs2))),
        Slt(r) => write(r.rd, (signed(x(pre, r.rs1)) < signed(x(pre, r.rs2))) as i128),
        Sltu(r) => write(r.rd, (x(pre, r.rs1) < x(pre, r.rs2)) as i128),
        Xor(r) => write(r.rd, bitwise(x(pre, r.rs1), x(pre, r.rs2), |p, q| p ^ q)),
        Srl(r) => write(r.rd, x(pre, r.rs1) / pow2(x(pre, r.rs2))),
        Sra(r) => write(r.rd, signed(x(pre, r.rs1)) >> low_bits(5, x(pre, r.rs2))),
        Or(r) => write(r.rd, bitwise(x(pre, r.rs1), x(pre, r.rs2), |p, q| p | q)),
        And(r) => write(r.rd, bitwise(x(pre, r.rs1), x(pre, r.rs2), |p, q| p & q)),
        Fence(_) | FenceI(_) => Expect { pc: next, ..Default::default() },
        Ecall => Expect { pc, event: Some(HostEventKind::ECall), ..Default::default() },
        Ebreak => Expect { pc, event: Some(HostEventKind::EBreak), ..Default::default() },
        Csrrw(c) => csr(c.rd, c.csr, Some(x(pre, c.rs1))),
        Csrrs(c) => {
            csr(c.rd, c.csr, (!c.rs1.is_zero()).then(|| bitwise(old_csr(c.csr), x(pre, c.rs1), |p, q| p | q)))
        }
        Csrrc(c) => csr(
            c.rd,
            c.csr,
            (!c.rs1.is_zero()).then(|| bitwise(old_csr(c.csr), x(pre, c.rs1), |p, q| p & !q)),
        ),
        Csrrwi(c) => csr(c.rd, c.csr, Some(c.zimm as i128)),
        Csrrsi(c) => {
            csr(c.rd, c.csr, (c.zimm != 0).then(|| bitwise(old_csr(c.csr), c.zimm as i128, |p, q| p | q)))
        }
        Csrrci(c) => {
            csr(c.rd, c.csr, (c.zimm != 0).then(|| bitwise(old_csr(c.csr), c.zimm as i128, |p, q| p & !q)))
        }
    }
}

fn check_absorption(pre: &MachineState, post: &MachineState) -> SpecVerdict {
    let mut v = SpecVerdict::pass();
    if post != pre {
        v.record(Component::HaltAbsorption, "post = pre", "post differs");
    }
    v
}

fn check_event(pre: &MachineState, post: &MachineState, kind: HostEventKind, v: &mut SpecVerdict) {
    v.expect_eq(Component::Halt, true, post.halt);
    let mut trace = pre.trace.clone();
    trace.push(HostEvent { kind, pc: pre.pc });
    v.expect_eq(Component::Trace, trace, post.trace.clone());
}

/// Checks every field `i` computes against an independent recomputation
/// from `pre`. JALR reports its three named clauses: `jalr_link`,
/// `jalr_pc` and `jalr_lsb_zero`.
pub fn postcondition_oracle(i: &Instr, pre: &MachineState, post: &MachineState) -> SpecVerdict {
    if pre.halt {
        return check_absorption(pre, post);
    }
    let e = expect(i, pre);
    let mut v = SpecVerdict::pass();
    let observed_pc = post.pc.get() as i128;
    let expected_pc = low_bits(32, e.pc);

    if let Instr::Jalr(j) = i {
        if !j.rd.is_zero() {
            let link = post.regs.get(j.rd.index()).map(|w| w.get() as i128);
            if link != Some(low_bits(32, pre.pc.get() as i128 + 4)) {
                v.record(
                    Component::Clause("jalr_link"),
                    format_args!("{} = {:#x}", j.rd, low_bits(32, pre.pc.get() as i128 + 4)),
                    format_args!("{link:x?}"),
                );
            }
        }
        if observed_pc != expected_pc {
            v.record(
                Component::Clause("jalr_pc"),
                format_args!("{expected_pc:#x}"),
                format_args!("{observed_pc:#x}"),
            );
        }
        if observed_pc % 2 != 0 {
            v.record(Component::Clause("jalr_lsb_zero"), "pc mod 2 = 0", post.pc);
        }
        return v;
    }

    if let Some((rd, value)) = e.rd {
        if !rd.is_zero() {
            let expected = Word::new(low_bits(32, value) as u32);
            match post.regs.get(rd.index()) {
                Some(&w) if w == expected => {}
                observed => v.record(Component::Reg(rd.get()), expected, format_args!("{observed:?}")),
            }
        }
    }
    if observed_pc != expected_pc {
        v.record(Component::Pc, format_args!("{expected_pc:#x}"), post.pc);
    }
    for &(addr, byte) in &e.mem {
        let a = Word::new(low_bits(32, addr) as u32);
        let observed = mem_byte(&post.mem, a) as i128;
        if observed != byte {
            v.record(Component::Mem(a), format_args!("{byte:#x}"), format_args!("{observed:#x}"));
        }
    }
    if let Some((addr, value)) = e.csr {
        let expected = Word::new(low_bits(32, value) as u32);
        v.expect_eq(Component::Csr(addr), expected, csr_read(&post.csrs, addr));
    }
    if let Some(kind) = e.event {
        check_event(pre, post, kind, &mut v);
    }
    v
}

/// Postcondition for an iteration that fetched an undecodable word: the
/// machine halts at the same pc and records the event.
pub fn illegal_oracle(pre: &MachineState, post: &MachineState) -> SpecVerdict {
    if pre.halt {
        return check_absorption(pre, post);
    }
    let mut v = SpecVerdict::pass();
    v.expect_eq(Component::Pc, pre.pc, post.pc);
    check_event(pre, post, HostEventKind::IllegalInstruction, &mut v);
    v
}
