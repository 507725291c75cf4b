//! Pure instruction handlers and the fetch-decode-execute driver.
//!
//! Handlers that do not set the pc themselves leave it alone; [`step`] wraps
//! them in [`pc_advance4`]. Jumps and branches compute their own pc. ECALL
//! and EBREAK halt without advancing, so the pc names the call site.

use crate::bitops::{addr_mod, jalr_target, low_bits, low_xlen, sext_from, to_signed32, Word};
use crate::isa::{decode, DecodeResult, Instr};
use crate::machine::{
    csr_read, csr_write, mem_load, mem_store, read_reg, st_regs_pc, write_reg, HostEvent, HostEventKind,
    MachineState, RegIdx, Width,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AluOp {
    Add,
    Sub,
    Sll,
    Slt,
    Sltu,
    Xor,
    Srl,
    Sra,
    Or,
    And,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchKind {
    Eq,
    Ne,
    Lt,
    Ge,
    Ltu,
    Geu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoadKind {
    Byte,
    Half,
    Word,
    ByteUnsigned,
    HalfUnsigned,
}

impl LoadKind {
    pub fn width(self) -> Width {
        match self {
            LoadKind::Byte | LoadKind::ByteUnsigned => Width::Byte,
            LoadKind::Half | LoadKind::HalfUnsigned => Width::Half,
            LoadKind::Word => Width::Word,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Ecall,
    Ebreak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CsrOp {
    ReadWrite,
    ReadSet,
    ReadClear,
}

/// Source operand of a CSR instruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CsrSource {
    Reg(RegIdx),
    /// 5-bit zero-extended immediate.
    Imm(u32),
}

/// Result of one fetch-decode-execute iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub next: MachineState,
}

/// Sets pc to `pc + 4` modulo `2^32`; nothing else changes.
pub fn pc_advance4(s: MachineState) -> MachineState {
    MachineState { pc: low_xlen(s.pc.to_int() + 4), ..s }
}

fn with_rd(s: &MachineState, rd: RegIdx, v: Word) -> MachineState {
    st_regs_pc(s, write_reg(&s.regs, rd, v), s.pc)
}

fn reg_int(s: &MachineState, r: RegIdx) -> i128 {
    read_reg(&s.regs, r).to_int()
}

pub fn exec_jalr(s: &MachineState, rd: RegIdx, rs1: RegIdx, off: Word) -> MachineState {
    let link = low_xlen(s.pc.to_int() + 4);
    let summed = read_reg(&s.regs, rs1).to_int() + sext_from(12, off.to_int());
    st_regs_pc(s, write_reg(&s.regs, rd, link), jalr_target(summed))
}

/// `rd <- f(a, b)` folded to 32 bits. Operands are already resolved by the
/// caller: register reads and immediate sign extension happen before this.
pub fn exec_alu(s: &MachineState, op: AluOp, rd: RegIdx, a: i128, b: i128) -> MachineState {
    let shamt = (b.rem_euclid(32)) as u32;
    let value = match op {
        AluOp::Add => a + b,
        AluOp::Sub => a - b,
        AluOp::Sll => low_bits(32, a) << shamt,
        AluOp::Slt => (to_signed32(addr_mod(a)) < to_signed32(addr_mod(b))) as i128,
        AluOp::Sltu => (low_bits(32, a) < low_bits(32, b)) as i128,
        AluOp::Xor => a ^ b,
        AluOp::Or => a | b,
        AluOp::And => a & b,
        AluOp::Srl => low_bits(32, a).div_euclid(1i128 << shamt),
        AluOp::Sra => to_signed32(addr_mod(a)).div_euclid(1i128 << shamt),
    };
    with_rd(s, rd, low_xlen(value))
}

pub fn exec_lui(s: &MachineState, rd: RegIdx, imm20: u32) -> MachineState {
    with_rd(s, rd, low_xlen((imm20 as i128) << 12))
}

pub fn exec_auipc(s: &MachineState, rd: RegIdx, imm20: u32) -> MachineState {
    with_rd(s, rd, low_xlen(s.pc.to_int() + ((imm20 as i128) << 12)))
}

pub fn exec_jal(s: &MachineState, rd: RegIdx, imm21: u32) -> MachineState {
    let link = low_xlen(s.pc.to_int() + 4);
    let target = low_xlen(s.pc.to_int() + sext_from(21, imm21 as i128));
    st_regs_pc(s, write_reg(&s.regs, rd, link), target)
}

pub fn exec_branch(s: &MachineState, kind: BranchKind, rs1: RegIdx, rs2: RegIdx, imm13: u32) -> MachineState {
    let a = read_reg(&s.regs, rs1);
    let b = read_reg(&s.regs, rs2);
    let taken = match kind {
        BranchKind::Eq => a == b,
        BranchKind::Ne => a != b,
        BranchKind::Lt => to_signed32(a) < to_signed32(b),
        BranchKind::Ge => to_signed32(a) >= to_signed32(b),
        BranchKind::Ltu => a < b,
        BranchKind::Geu => a >= b,
    };
    let offset = if taken { sext_from(13, imm13 as i128) } else { 4 };
    st_regs_pc(s, s.regs.clone(), low_xlen(s.pc.to_int() + offset))
}

fn effective_address(s: &MachineState, rs1: RegIdx, imm12: u32) -> Word {
    addr_mod(reg_int(s, rs1) + sext_from(12, imm12 as i128))
}

pub fn exec_load(s: &MachineState, kind: LoadKind, rd: RegIdx, rs1: RegIdx, imm12: u32) -> MachineState {
    let raw = mem_load(&s.mem, effective_address(s, rs1, imm12), kind.width()).to_int();
    let value = match kind {
        LoadKind::Byte => sext_from(8, raw),
        LoadKind::Half => sext_from(16, raw),
        LoadKind::Word | LoadKind::ByteUnsigned | LoadKind::HalfUnsigned => raw,
    };
    with_rd(s, rd, low_xlen(value))
}

pub fn exec_store(s: &MachineState, width: Width, rs1: RegIdx, rs2: RegIdx, imm12: u32) -> MachineState {
    let addr = effective_address(s, rs1, imm12);
    MachineState { mem: mem_store(&s.mem, addr, width, read_reg(&s.regs, rs2)), ..s.clone() }
}

/// Halts and records a host event at the current pc.
pub fn exec_system(s: &MachineState, kind: SystemKind) -> MachineState {
    let kind = match kind {
        SystemKind::Ecall => HostEventKind::ECall,
        SystemKind::Ebreak => HostEventKind::EBreak,
    };
    host_halt(s, kind)
}

fn host_halt(s: &MachineState, kind: HostEventKind) -> MachineState {
    let mut trace = s.trace.clone();
    trace.push(HostEvent { kind, pc: s.pc });
    MachineState { halt: true, trace, ..s.clone() }
}

/// Fences have no observable effect in a single-hart model.
pub fn exec_fence(s: &MachineState) -> MachineState {
    s.clone()
}

pub fn exec_fence_i(s: &MachineState) -> MachineState {
    s.clone()
}

pub fn exec_csr(s: &MachineState, op: CsrOp, rd: RegIdx, src: CsrSource, csr: u16) -> MachineState {
    let old = csr_read(&s.csrs, csr);
    let (mask, src_is_zero) = match src {
        CsrSource::Reg(r) => (read_reg(&s.regs, r), r.is_zero()),
        CsrSource::Imm(z) => (Word::new(z & 0x1F), z & 0x1F == 0),
    };
    let new = match op {
        CsrOp::ReadWrite => Some(mask),
        // set/clear with x0 or a zero immediate perform no write
        CsrOp::ReadSet if src_is_zero => None,
        CsrOp::ReadClear if src_is_zero => None,
        CsrOp::ReadSet => Some(Word::new(old.get() | mask.get())),
        CsrOp::ReadClear => Some(Word::new(old.get() & !mask.get())),
    };
    let csrs = match new {
        Some(v) => csr_write(&s.csrs, csr, v),
        None => s.csrs.clone(),
    };
    MachineState { regs: write_reg(&s.regs, rd, old), csrs, ..s.clone() }
}

fn alu_rr(s: &MachineState, op: AluOp, r: crate::isa::RType) -> MachineState {
    exec_alu(s, op, r.rd, reg_int(s, r.rs1), reg_int(s, r.rs2))
}

fn alu_ri(s: &MachineState, op: AluOp, i: crate::isa::IType) -> MachineState {
    exec_alu(s, op, i.rd, reg_int(s, i.rs1), sext_from(12, i.imm12 as i128))
}

fn alu_shift(s: &MachineState, op: AluOp, sh: crate::isa::ShiftImm) -> MachineState {
    exec_alu(s, op, sh.rd, reg_int(s, sh.rs1), sh.shamt as i128)
}

/// Executes one decoded instruction. A halted state is a fixed point.
pub fn step(s: &MachineState, i: &Instr) -> MachineState {
    use Instr::*;
    if s.halt {
        return s.clone();
    }
    match *i {
        Lui(u) => pc_advance4(exec_lui(s, u.rd, u.imm20)),
        Auipc(u) => pc_advance4(exec_auipc(s, u.rd, u.imm20)),
        Jal(j) => exec_jal(s, j.rd, j.imm21),
        Jalr(x) => exec_jalr(s, x.rd, x.rs1, Word::new(x.imm12)),
        Beq(b) => exec_branch(s, BranchKind::Eq, b.rs1, b.rs2, b.imm13),
        Bne(b) => exec_branch(s, BranchKind::Ne, b.rs1, b.rs2, b.imm13),
        Blt(b) => exec_branch(s, BranchKind::Lt, b.rs1, b.rs2, b.imm13),
        Bge(b) => exec_branch(s, BranchKind::Ge, b.rs1, b.rs2, b.imm13),
        Bltu(b) => exec_branch(s, BranchKind::Ltu, b.rs1, b.rs2, b.imm13),
        Bgeu(b) => exec_branch(s, BranchKind::Geu, b.rs1, b.rs2, b.imm13),
        Lb(x) => pc_advance4(exec_load(s, LoadKind::Byte, x.rd, x.rs1, x.imm12)),
        Lh(x) => pc_advance4(exec_load(s, LoadKind::Half, x.rd, x.rs1, x.imm12)),
        Lw(x) => pc_advance4(exec_load(s, LoadKind::Word, x.rd, x.rs1, x.imm12)),
        Lbu(x) => pc_advance4(exec_load(s, LoadKind::ByteUnsigned, x.rd, x.rs1, x.imm12)),
        Lhu(x) => pc_advance4(exec_load(s, LoadKind::HalfUnsigned, x.rd, x.rs1, x.imm12)),
        Sb(x) => pc_advance4(exec_store(s, Width::Byte, x.rs1, x.rs2, x.imm12)),
        Sh(x) => pc_advance4(exec_store(s, Width::Half, x.rs1, x.rs2, x.imm12)),
        Sw(x) => pc_advance4(exec_store(s, Width::Word, x.rs1, x.rs2, x.imm12)),
        Addi(x) => pc_advance4(alu_ri(s, AluOp::Add, x)),
        Slti(x) => pc_advance4(alu_ri(s, AluOp::Slt, x)),
        Sltiu(x) => pc_advance4(alu_ri(s, AluOp::Sltu, x)),
        Xori(x) => pc_advance4(alu_ri(s, AluOp::Xor, x)),
        Ori(x) => pc_advance4(alu_ri(s, AluOp::Or, x)),
        Andi(x) => pc_advance4(alu_ri(s, AluOp::And, x)),
        Slli(x) => pc_advance4(alu_shift(s, AluOp::Sll, x)),
        Srli(x) => pc_advance4(alu_shift(s, AluOp::Srl, x)),
        Srai(x) => pc_advance4(alu_shift(s, AluOp::Sra, x)),
        Add(r) => pc_advance4(alu_rr(s, AluOp::Add, r)),
        Sub(r) => pc_advance4(alu_rr(s, AluOp::Sub, r)),
        Sll(r) => pc_advance4(alu_rr(s, AluOp::Sll, r)),
        Slt(r) => pc_advance4(alu_rr(s, AluOp::Slt, r)),
        Sltu(r) => pc_advance4(alu_rr(s, AluOp::Sltu, r)),
        Xor(r) => pc_advance4(alu_rr(s, AluOp::Xor, r)),
        Srl(r) => pc_advance4(alu_rr(s, AluOp::Srl, r)),
        Sra(r) => pc_advance4(alu_rr(s, AluOp::Sra, r)),
        Or(r) => pc_advance4(alu_rr(s, AluOp::Or, r)),
        And(r) => pc_advance4(alu_rr(s, AluOp::And, r)),
        Fence(_) => pc_advance4(exec_fence(s)),
        FenceI(_) => pc_advance4(exec_fence_i(s)),
        Ecall => exec_system(s, SystemKind::Ecall),
        Ebreak => exec_system(s, SystemKind::Ebreak),
        Csrrw(c) => pc_advance4(exec_csr(s, CsrOp::ReadWrite, c.rd, CsrSource::Reg(c.rs1), c.csr)),
        Csrrs(c) => pc_advance4(exec_csr(s, CsrOp::ReadSet, c.rd, CsrSource::Reg(c.rs1), c.csr)),
        Csrrc(c) => pc_advance4(exec_csr(s, CsrOp::ReadClear, c.rd, CsrSource::Reg(c.rs1), c.csr)),
        Csrrwi(c) => pc_advance4(exec_csr(s, CsrOp::ReadWrite, c.rd, CsrSource::Imm(c.zimm), c.csr)),
        Csrrsi(c) => pc_advance4(exec_csr(s, CsrOp::ReadSet, c.rd, CsrSource::Imm(c.zimm), c.csr)),
        Csrrci(c) => pc_advance4(exec_csr(s, CsrOp::ReadClear, c.rd, CsrSource::Imm(c.zimm), c.csr)),
    }
}

/// Reads the 4-byte little-endian word at pc.
pub fn fetch(s: &MachineState) -> u32 {
    mem_load(&s.mem, s.pc, Width::Word).get()
}

/// Halts on an undecodable word, recording the faulting pc.
pub fn illegal_instruction(s: &MachineState) -> MachineState {
    host_halt(s, HostEventKind::IllegalInstruction)
}

/// One fetch-decode-execute iteration. Returns the decode result along with
/// the successor so callers can inspect what ran. A halted state is returned
/// unchanged.
pub fn cycle(s: &MachineState) -> (DecodeResult, StepOutcome) {
    let decoded = decode(fetch(s));
    let next = match decoded {
        _ if s.halt => s.clone(),
        DecodeResult::Valid(i) => step(s, &i),
        DecodeResult::Illegal(_) => illegal_instruction(s),
    };
    (decoded, StepOutcome { next })
}

/// Runs at most `fuel` iterations, stopping early once halted.
pub fn run(s: &MachineState, fuel: u64) -> MachineState {
    let mut cur = s.clone();
    for _ in 0..fuel {
        if cur.halt {
            break;
        }
        cur = cycle(&cur).1.next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::{encode, IType, RType};
    use crate::machine::{mem_store, Memory};

    fn r(i: u8) -> RegIdx {
        RegIdx::new(i).unwrap()
    }

    fn state_with(pc: u32, regs: &[(u8, u32)]) -> MachineState {
        let mut s = MachineState::at(Word::new(pc));
        for &(i, v) in regs {
            s.regs = write_reg(&s.regs, r(i), Word::new(v));
        }
        s
    }

    #[test]
    fn jalr_example() {
        let s = state_with(0x1000, &[(5, 0x2003)]);
        let t = exec_jalr(&s, r(1), r(5), Word::new(4));
        assert_eq!(t.pc, Word::new(0x2006));
        assert_eq!(t.reg(r(1)), Word::new(0x1004));
        let mut expected = s.clone();
        expected.pc = t.pc;
        expected.regs[1] = Word::new(0x1004);
        assert_eq!(t, expected);

        let sink = exec_jalr(&s, r(0), r(5), Word::new(4));
        assert_eq!(sink.regs, s.regs);
    }

    #[test]
    fn jalr_negative_offset_wraps() {
        let s = state_with(0x10, &[(2, 1)]);
        // off = -4, 1 - 4 = -3 -> 0xFFFFFFFD -> cleared bit 0
        let t = exec_jalr(&s, r(1), r(2), Word::new(0xFFC));
        assert_eq!(t.pc, Word::new(0xFFFF_FFFC));
    }

    #[test]
    fn pc_advance_wraps() {
        assert_eq!(pc_advance4(MachineState::at(Word::ZERO)).pc, Word::new(4));
        let s = MachineState::at(Word::new(0xFFFF_FFFC));
        let t = pc_advance4(s.clone());
        assert_eq!(t.pc, Word::ZERO);
        assert_eq!(MachineState { pc: s.pc, ..t }, s);
    }

    #[test]
    fn alu_examples() {
        let s = MachineState::default();
        let rd = r(3);
        let run = |op, a: u32, b: u32| exec_alu(&s, op, rd, a as i128, b as i128).reg(rd).get();
        assert_eq!(run(AluOp::Add, 0xFFFF_FFFF, 1), 0);
        assert_eq!(run(AluOp::Sra, 0x8000_0000, 31), 0xFFFF_FFFF);
        assert_eq!(run(AluOp::Sltu, 1, 0xFFFF_FFFF), 1);
        assert_eq!(run(AluOp::Slt, 0xFFFF_FFFF, 0), 1);
        assert_eq!(run(AluOp::Sub, 0, 1), 0xFFFF_FFFF);
        assert_eq!(run(AluOp::Sll, 0x8000_0001, 33), 2);
        assert_eq!(run(AluOp::Srl, 0x8000_0000, 31), 1);
        assert_eq!(exec_alu(&s, AluOp::Add, r(0), 5, 5), s);
    }

    #[test]
    fn upper_immediates() {
        let s = state_with(0x1000, &[]);
        assert_eq!(exec_lui(&s, r(3), 0x12345).reg(r(3)), Word::new(0x1234_5000));
        assert_eq!(exec_lui(&s, r(0), 0x12345).regs, s.regs);
        assert_eq!(exec_auipc(&s, r(3), 1).reg(r(3)), Word::new(0x2000));
    }

    #[test]
    fn jal_examples() {
        let s = state_with(0x1000, &[]);
        let t = exec_jal(&s, r(1), 8);
        assert_eq!((t.pc, t.reg(r(1))), (Word::new(0x1008), Word::new(0x1004)));
        // -4 as a 21-bit pattern
        let back = exec_jal(&s, r(1), (1 << 21) - 4);
        assert_eq!(back.pc, Word::new(0xFFC));
        let sink = exec_jal(&s, r(0), 8);
        assert_eq!((sink.pc, sink.regs.clone()), (Word::new(0x1008), s.regs));
    }

    #[test]
    fn branch_examples() {
        let eq = state_with(0x100, &[(1, 5), (2, 5)]);
        assert_eq!(exec_branch(&eq, BranchKind::Eq, r(1), r(2), 0x10).pc, Word::new(0x110));
        let ne = state_with(0x100, &[(1, 5), (2, 6)]);
        assert_eq!(exec_branch(&ne, BranchKind::Eq, r(1), r(2), 0x10).pc, Word::new(0x104));

        let neg = state_with(0x100, &[(1, 0xFFFF_FFFF)]);
        assert_eq!(exec_branch(&neg, BranchKind::Lt, r(1), r(2), 0x10).pc, Word::new(0x110));
        assert_eq!(exec_branch(&neg, BranchKind::Ltu, r(1), r(2), 0x10).pc, Word::new(0x104));
        assert_eq!(exec_branch(&neg, BranchKind::Geu, r(1), r(2), 0x10).pc, Word::new(0x110));
        assert_eq!(exec_branch(&neg, BranchKind::Ge, r(1), r(2), 0x10).pc, Word::new(0x104));
    }

    #[test]
    fn loads_and_stores() {
        let mut s = state_with(0, &[(1, 0x200)]);
        s.mem.insert(Word::new(0x200), 0x80);
        assert_eq!(exec_load(&s, LoadKind::Byte, r(2), r(1), 0).reg(r(2)), Word::new(0xFFFF_FF80));
        assert_eq!(exec_load(&s, LoadKind::ByteUnsigned, r(2), r(1), 0).reg(r(2)), Word::new(0x80));

        let s = state_with(0, &[(1, 0x300), (2, 0xCAFE_BABE)]);
        let stored = exec_store(&s, Width::Word, r(1), r(2), 0xFFC);
        assert_eq!(stored.regs, s.regs);
        let loaded = exec_load(&stored, LoadKind::Word, r(3), r(1), 0xFFC);
        assert_eq!(loaded.reg(r(3)), Word::new(0xCAFE_BABE));
        assert_eq!(loaded.mem, stored.mem);
    }

    #[test]
    fn system_halts_and_records() {
        let s = state_with(0x40, &[(4, 1)]);
        let t = exec_system(&s, SystemKind::Ecall);
        assert!(t.halt);
        assert_eq!(t.trace, vec![HostEvent { kind: HostEventKind::ECall, pc: Word::new(0x40) }]);
        assert_eq!((t.pc, &t.regs, &t.mem, &t.csrs), (s.pc, &s.regs, &s.mem, &s.csrs));
    }

    #[test]
    fn csr_examples() {
        let s = state_with(0, &[(5, 0x42)]);
        let t = exec_csr(&s, CsrOp::ReadWrite, r(1), CsrSource::Reg(r(5)), 0x305);
        assert_eq!(t.reg(r(1)), Word::ZERO);
        assert_eq!(csr_read(&t.csrs, 0x305), Word::new(0x42));

        let t2 = exec_csr(&t, CsrOp::ReadSet, r(2), CsrSource::Reg(r(0)), 0x305);
        assert_eq!(t2.csrs, t.csrs);
        assert_eq!(t2.reg(r(2)), Word::new(0x42));

        let full = state_with(0, &[(6, 0xFFFF_FFFF)]);
        let full = MachineState { csrs: csr_write(&full.csrs, 0x300, Word::new(0x1234)), ..full };
        let cleared = exec_csr(&full, CsrOp::ReadClear, r(0), CsrSource::Reg(r(6)), 0x300);
        assert_eq!(csr_read(&cleared.csrs, 0x300), Word::ZERO);

        let imm = exec_csr(&full, CsrOp::ReadSet, r(7), CsrSource::Imm(0b101), 0x300);
        assert_eq!(csr_read(&imm.csrs, 0x300), Word::new(0x1235));
        assert_eq!(imm.reg(r(7)), Word::new(0x1234));
    }

    #[test]
    fn step_examples() {
        let mut halted = state_with(8, &[(1, 1)]);
        halted.halt = true;
        let add = Instr::Add(RType { rd: r(1), rs1: r(1), rs2: r(1) });
        assert_eq!(step(&halted, &add), halted);

        let s = state_with(8, &[(1, 1)]);
        let nop = Instr::Addi(IType { rd: r(0), rs1: r(0), imm12: 0 });
        assert_eq!(step(&s, &nop), MachineState { pc: Word::new(12), ..s.clone() });

        let jalr = Instr::Jalr(IType { rd: r(1), rs1: r(5), imm12: 4 });
        let s = state_with(0x1000, &[(5, 0x2003)]);
        assert_eq!(step(&s, &jalr), exec_jalr(&s, r(1), r(5), Word::new(4)));

        assert_eq!(step(&s, &Instr::Ecall).pc, s.pc);
    }

    #[test]
    fn run_examples() {
        let s = MachineState::default();
        assert_eq!(run(&s, 0), s);

        let ecall = MachineState {
            mem: mem_store(&Memory::new(), Word::ZERO, Width::Word, Word::new(encode(&Instr::Ecall))),
            ..MachineState::default()
        };
        let t = run(&ecall, 10);
        assert!(t.halt);
        assert_eq!(t.trace, vec![HostEvent { kind: HostEventKind::ECall, pc: Word::ZERO }]);

        let t = run(&s, 10);
        assert!(t.halt);
        assert_eq!(t.trace, vec![HostEvent { kind: HostEventKind::IllegalInstruction, pc: Word::ZERO }]);
    }
}
