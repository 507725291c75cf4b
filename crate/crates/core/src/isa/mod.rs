//! Decoded RV32I instructions.
//!
//! The roster is the 47-instruction base: the 40 core RV32I instructions,
//! FENCE.I, and the six Zicsr instructions. Immediates are stored as raw
//! unsigned bit patterns of their encoded width; sign extension happens at
//! execution time.

mod decode;
mod encode;

use std::fmt;

pub use decode::{decode, DecodeResult};
pub use encode::encode;

use crate::machine::RegIdx;

/// R-format operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RType {
    pub rd: RegIdx,
    pub rs1: RegIdx,
    pub rs2: RegIdx,
}

/// I-format operands with a 12-bit immediate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IType {
    pub rd: RegIdx,
    pub rs1: RegIdx,
    pub imm12: u32,
}

/// Shift-by-immediate operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShiftImm {
    pub rd: RegIdx,
    pub rs1: RegIdx,
    pub shamt: u32,
}

/// S-format operands with a 12-bit immediate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SType {
    pub rs1: RegIdx,
    pub rs2: RegIdx,
    pub imm12: u32,
}

/// B-format operands; `imm13` has bit 0 clear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BType {
    pub rs1: RegIdx,
    pub rs2: RegIdx,
    pub imm13: u32,
}

/// U-format operands; `imm20` is the upper-immediate field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UType {
    pub rd: RegIdx,
    pub imm20: u32,
}

/// J-format operands; `imm21` has bit 0 clear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct JType {
    pub rd: RegIdx,
    pub imm21: u32,
}

/// FENCE fields. Retained for round-tripping, ignored by execution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FenceFields {
    pub fm: u32,
    pub pred: u32,
    pub succ: u32,
    pub rd: RegIdx,
    pub rs1: RegIdx,
}

/// Register-sourced CSR operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CsrReg {
    pub rd: RegIdx,
    pub rs1: RegIdx,
    pub csr: u16,
}

/// Immediate-sourced CSR operands; `zimm` is a 5-bit zero-extended value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CsrImm {
    pub rd: RegIdx,
    pub zimm: u32,
    pub csr: u16,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instr {
    Lui(UType),
    Auipc(UType),
    Jal(JType),
    Jalr(IType),
    Beq(BType),
    Bne(BType),
    Blt(BType),
    Bge(BType),
    Bltu(BType),
    Bgeu(BType),
    Lb(IType),
    Lh(IType),
    Lw(IType),
    Lbu(IType),
    Lhu(IType),
    Sb(SType),
    Sh(SType),
    Sw(SType),
    Addi(IType),
    Slti(IType),
    Sltiu(IType),
    Xori(IType),
    Ori(IType),
    Andi(IType),
    Slli(ShiftImm),
    Srli(ShiftImm),
    Srai(ShiftImm),
    Add(RType),
    Sub(RType),
    Sll(RType),
    Slt(RType),
    Sltu(RType),
    Xor(RType),
    Srl(RType),
    Sra(RType),
    Or(RType),
    And(RType),
    Fence(FenceFields),
    FenceI(IType),
    Ecall,
    Ebreak,
    Csrrw(CsrReg),
    Csrrs(CsrReg),
    Csrrc(CsrReg),
    Csrrwi(CsrImm),
    Csrrsi(CsrImm),
    Csrrci(CsrImm),
}

/// Instruction names, one per `Instr` variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mnemonic {
    Lui,
    Auipc,
    Jal,
    Jalr,
    Beq,
    Bne,
    Blt,
    Bge,
    Bltu,
    Bgeu,
    Lb,
    Lh,
    Lw,
    Lbu,
    Lhu,
    Sb,
    Sh,
    Sw,
    Addi,
    Slti,
    Sltiu,
    Xori,
    Ori,
    Andi,
    Slli,
    Srli,
    Srai,
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
    Fence,
    FenceI,
    Ecall,
    Ebreak,
    Csrrw,
    Csrrs,
    Csrrc,
    Csrrwi,
    Csrrsi,
    Csrrci,
}

impl Mnemonic {
    pub const ALL: [Mnemonic; 47] = {
        use Mnemonic::*;
        [
            Lui, Auipc, Jal, Jalr, Beq, Bne, Blt, Bge, Bltu, Bgeu, Lb, Lh, Lw, Lbu, Lhu, Sb, Sh, Sw, Addi,
            Slti, Sltiu, Xori, Ori, Andi, Slli, Srli, Srai, Add, Sub, Sll, Slt, Sltu, Xor, Srl, Sra, Or, And,
            Fence, FenceI, Ecall, Ebreak, Csrrw, Csrrs, Csrrc, Csrrwi, Csrrsi, Csrrci,
        ]
    };

    pub fn name(self) -> &'static str {
        use Mnemonic::*;
        match self {
            Lui => "lui",
            Auipc => "auipc",
            Jal => "jal",
            Jalr => "jalr",
            Beq => "beq",
            Bne => "bne",
            Blt => "blt",
            Bge => "bge",
            Bltu => "bltu",
            Bgeu => "bgeu",
            Lb => "lb",
            Lh => "lh",
            Lw => "lw",
            Lbu => "lbu",
            Lhu => "lhu",
            Sb => "sb",
            Sh => "sh",
            Sw => "sw",
            Addi => "addi",
            Slti => "slti",
            Sltiu => "sltiu",
            Xori => "xori",
            Ori => "ori",
            Andi => "andi",
            Slli => "slli",
            Srli => "srli",
            Srai => "srai",
            Add => "add",
            Sub => "sub",
            Sll => "sll",
            Slt => "slt",
            Sltu => "sltu",
            Xor => "xor",
            Srl => "srl",
            Sra => "sra",
            Or => "or",
            And => "and",
            Fence => "fence",
            FenceI => "fence.i",
            Ecall => "ecall",
            Ebreak => "ebreak",
            Csrrw => "csrrw",
            Csrrs => "csrrs",
            Csrrc => "csrrc",
            Csrrwi => "csrrwi",
            Csrrsi => "csrrsi",
            Csrrci => "csrrci",
        }
    }
}

impl fmt::Display for Mnemonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Splits a 64-bit entropy value into operand fields.
struct Entropy(u64);

impl Entropy {
    fn take(&mut self, bits: u32) -> u32 {
        let v = (self.0 & ((1u64 << bits) - 1)) as u32;
        self.0 >>= bits;
        v
    }

    fn reg(&mut self) -> RegIdx {
        RegIdx::from_field(self.take(5))
    }
}

impl Instr {
    pub fn mnemonic(&self) -> Mnemonic {
        use Instr::*;
        match self {
            Lui(_) => Mnemonic::Lui,
            Auipc(_) => Mnemonic::Auipc,
            Jal(_) => Mnemonic::Jal,
            Jalr(_) => Mnemonic::Jalr,
            Beq(_) => Mnemonic::Beq,
            Bne(_) => Mnemonic::Bne,
            Blt(_) => Mnemonic::Blt,
            Bge(_) => Mnemonic::Bge,
            Bltu(_) => Mnemonic::Bltu,
            Bgeu(_) => Mnemonic::Bgeu,
            Lb(_) => Mnemonic::Lb,
            Lh(_) => Mnemonic::Lh,
            Lw(_) => Mnemonic::Lw,
            Lbu(_) => Mnemonic::Lbu,
            Lhu(_) => Mnemonic::Lhu,
            Sb(_) => Mnemonic::Sb,
            Sh(_) => Mnemonic::Sh,
            Sw(_) => Mnemonic::Sw,
            Addi(_) => Mnemonic::Addi,
            Slti(_) => Mnemonic::Slti,
            Sltiu(_) => Mnemonic::Sltiu,
            Xori(_) => Mnemonic::Xori,
            Ori(_) => Mnemonic::Ori,
            Andi(_) => Mnemonic::Andi,
            Slli(_) => Mnemonic::Slli,
            Srli(_) => Mnemonic::Srli,
            Srai(_) => Mnemonic::Srai,
            Add(_) => Mnemonic::Add,
            Sub(_) => Mnemonic::Sub,
            Sll(_) => Mnemonic::Sll,
            Slt(_) => Mnemonic::Slt,
            Sltu(_) => Mnemonic::Sltu,
            Xor(_) => Mnemonic::Xor,
            Srl(_) => Mnemonic::Srl,
            Sra(_) => Mnemonic::Sra,
            Or(_) => Mnemonic::Or,
            And(_) => Mnemonic::And,
            Fence(_) => Mnemonic::Fence,
            FenceI(_) => Mnemonic::FenceI,
            Ecall => Mnemonic::Ecall,
            Ebreak => Mnemonic::Ebreak,
            Csrrw(_) => Mnemonic::Csrrw,
            Csrrs(_) => Mnemonic::Csrrs,
            Csrrc(_) => Mnemonic::Csrrc,
            Csrrwi(_) => Mnemonic::Csrrwi,
            Csrrsi(_) => Mnemonic::Csrrsi,
            Csrrci(_) => Mnemonic::Csrrci,
        }
    }

    /// Builds an instruction of kind `m` whose operand fields are sliced
    /// from `entropy`. Every result satisfies [`Instr::is_well_formed`];
    /// used by generators and fuzzers that need coverage of every variant.
    pub fn synthesize(m: Mnemonic, entropy: u64) -> Instr {
        use Mnemonic as M;
        let mut e = Entropy(entropy);
        let r = |e: &mut Entropy| RType { rd: e.reg(), rs1: e.reg(), rs2: e.reg() };
        let i = |e: &mut Entropy| IType { rd: e.reg(), rs1: e.reg(), imm12: e.take(12) };
        let sh = |e: &mut Entropy| ShiftImm { rd: e.reg(), rs1: e.reg(), shamt: e.take(5) };
        let s = |e: &mut Entropy| SType { rs1: e.reg(), rs2: e.reg(), imm12: e.take(12) };
        let b = |e: &mut Entropy| BType { rs1: e.reg(), rs2: e.reg(), imm13: e.take(12) << 1 };
        let u = |e: &mut Entropy| UType { rd: e.reg(), imm20: e.take(20) };
        let cr = |e: &mut Entropy| CsrReg { rd: e.reg(), rs1: e.reg(), csr: e.take(12) as u16 };
        let ci = |e: &mut Entropy| CsrImm { rd: e.reg(), zimm: e.take(5), csr: e.take(12) as u16 };
        match m {
            M::Lui => Instr::Lui(u(&mut e)),
            M::Auipc => Instr::Auipc(u(&mut e)),
            M::Jal => Instr::Jal(JType { rd: e.reg(), imm21: e.take(20) << 1 }),
            M::Jalr => Instr::Jalr(i(&mut e)),
            M::Beq => Instr::Beq(b(&mut e)),
            M::Bne => Instr::Bne(b(&mut e)),
            M::Blt => Instr::Blt(b(&mut e)),
            M::Bge => Instr::Bge(b(&mut e)),
            M::Bltu => Instr::Bltu(b(&mut e)),
            M::Bgeu => Instr::Bgeu(b(&mut e)),
            M::Lb => Instr::Lb(i(&mut e)),
            M::Lh => Instr::Lh(i(&mut e)),
            M::Lw => Instr::Lw(i(&mut e)),
            M::Lbu => Instr::Lbu(i(&mut e)),
            M::Lhu => Instr::Lhu(i(&mut e)),
            M::Sb => Instr::Sb(s(&mut e)),
            M::Sh => Instr::Sh(s(&mut e)),
            M::Sw => Instr::Sw(s(&mut e)),
            M::Addi => Instr::Addi(i(&mut e)),
            M::Slti => Instr::Slti(i(&mut e)),
            M::Sltiu => Instr::Sltiu(i(&mut e)),
            M::Xori => Instr::Xori(i(&mut e)),
            M::Ori => Instr::Ori(i(&mut e)),
            M::Andi => Instr::Andi(i(&mut e)),
            M::Slli => Instr::Slli(sh(&mut e)),
            M::Srli => Instr::Srli(sh(&mut e)),
            M::Srai => Instr::Srai(sh(&mut e)),
            M::Add => Instr::Add(r(&mut e)),
            M::Sub => Instr::Sub(r(&mut e)),
            M::Sll => Instr::Sll(r(&mut e)),
            M::Slt => Instr::Slt(r(&mut e)),
            M::Sltu => Instr::Sltu(r(&mut e)),
            M::Xor => Instr::Xor(r(&mut e)),
            M::Srl => Instr::Srl(r(&mut e)),
            M::Sra => Instr::Sra(r(&mut e)),
            M::Or => Instr::Or(r(&mut e)),
            M::And => Instr::And(r(&mut e)),
            M::Fence => Instr::Fence(FenceFields {
                fm: e.take(4),
                pred: e.take(4),
                succ: e.take(4),
                rd: e.reg(),
                rs1: e.reg(),
            }),
            M::FenceI => Instr::FenceI(i(&mut e)),
            M::Ecall => Instr::Ecall,
            M::Ebreak => Instr::Ebreak,
            M::Csrrw => Instr::Csrrw(cr(&mut e)),
            M::Csrrs => Instr::Csrrs(cr(&mut e)),
            M::Csrrc => Instr::Csrrc(cr(&mut e)),
            M::Csrrwi => Instr::Csrrwi(ci(&mut e)),
            M::Csrrsi => Instr::Csrrsi(ci(&mut e)),
            M::Csrrci => Instr::Csrrci(ci(&mut e)),
        }
    }

    /// Field-range invariants. Register fields are in range by type.
    pub fn is_well_formed(&self) -> bool {
        use Instr::*;
        match *self {
            Lui(u) | Auipc(u) => u.imm20 < 1 << 20,
            Jal(j) => j.imm21 < 1 << 21 && j.imm21 & 1 == 0,
            Jalr(i) | Lb(i) | Lh(i) | Lw(i) | Lbu(i) | Lhu(i) | Addi(i) | Slti(i) | Sltiu(i) | Xori(i)
            | Ori(i) | Andi(i) | FenceI(i) => i.imm12 < 1 << 12,
            Beq(b) | Bne(b) | Blt(b) | Bge(b) | Bltu(b) | Bgeu(b) => b.imm13 < 1 << 13 && b.imm13 & 1 == 0,
            Sb(s) | Sh(s) | Sw(s) => s.imm12 < 1 << 12,
            Slli(s) | Srli(s) | Srai(s) => s.shamt < 32,
            Add(_) | Sub(_) | Sll(_) | Slt(_) | Sltu(_) | Xor(_) | Srl(_) | Sra(_) | Or(_) | And(_)
            | Ecall | Ebreak => true,
            Fence(f) => f.fm < 16 && f.pred < 16 && f.succ < 16,
            Csrrw(c) | Csrrs(c) | Csrrc(c) => c.csr < 4096,
            Csrrwi(c) | Csrrsi(c) | Csrrci(c) => c.zimm < 32 && c.csr < 4096,
        }
    }

    /// The destination register, if the instruction has one.
    pub fn rd(&self) -> Option<RegIdx> {
        use Instr::*;
        match *self {
            Lui(u) | Auipc(u) => Some(u.rd),
            Jal(j) => Some(j.rd),
            Jalr(i) | Lb(i) | Lh(i) | Lw(i) | Lbu(i) | Lhu(i) | Addi(i) | Slti(i) | Sltiu(i) | Xori(i)
            | Ori(i) | Andi(i) => Some(i.rd),
            Slli(s) | Srli(s) | Srai(s) => Some(s.rd),
            Add(r) | Sub(r) | Sll(r) | Slt(r) | Sltu(r) | Xor(r) | Srl(r) | Sra(r) | Or(r) | And(r) => {
                Some(r.rd)
            }
            Csrrw(c) | Csrrs(c) | Csrrc(c) => Some(c.rd),
            Csrrwi(c) | Csrrsi(c) | Csrrci(c) => Some(c.rd),
            // FENCE/FENCE.I carry an rd field but never write it.
            Fence(_) | FenceI(_) | Beq(_) | Bne(_) | Blt(_) | Bge(_) | Bltu(_) | Bgeu(_) | Sb(_) | Sh(_)
            | Sw(_) | Ecall | Ebreak => None,
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Instr::*;
        let m = self.mnemonic();
        match *self {
            Lui(u) | Auipc(u) => write!(f, "{m} {}, {:#x}", u.rd, u.imm20),
            Jal(j) => write!(f, "{m} {}, {:#x}", j.rd, j.imm21),
            Jalr(i) | Lb(i) | Lh(i) | Lw(i) | Lbu(i) | Lhu(i) => {
                write!(f, "{m} {}, {:#x}({})", i.rd, i.imm12, i.rs1)
            }
            Addi(i) | Slti(i) | Sltiu(i) | Xori(i) | Ori(i) | Andi(i) | FenceI(i) => {
                write!(f, "{m} {}, {}, {:#x}", i.rd, i.rs1, i.imm12)
            }
            Beq(b) | Bne(b) | Blt(b) | Bge(b) | Bltu(b) | Bgeu(b) => {
                write!(f, "{m} {}, {}, {:#x}", b.rs1, b.rs2, b.imm13)
            }
            Sb(s) | Sh(s) | Sw(s) => write!(f, "{m} {}, {:#x}({})", s.rs2, s.imm12, s.rs1),
            Slli(s) | Srli(s) | Srai(s) => write!(f, "{m} {}, {}, {}", s.rd, s.rs1, s.shamt),
            Add(r) | Sub(r) | Sll(r) | Slt(r) | Sltu(r) | Xor(r) | Srl(r) | Sra(r) | Or(r) | And(r) => {
                write!(f, "{m} {}, {}, {}", r.rd, r.rs1, r.rs2)
            }
            Fence(x) => write!(f, "{m} {:#x}, {:#x}", x.pred, x.succ),
            Ecall | Ebreak => write!(f, "{m}"),
            Csrrw(c) | Csrrs(c) | Csrrc(c) => write!(f, "{m} {}, {:#x}, {}", c.rd, c.csr, c.rs1),
            Csrrwi(c) | Csrrsi(c) | Csrrci(c) => {
                write!(f, "{m} {}, {:#x}, {}", c.rd, c.csr, c.zimm)
            }
        }
    }
}

/// True exactly for the six CSR instructions.
pub fn is_csr(i: &Instr) -> bool {
    matches!(
        i,
        Instr::Csrrw(_)
            | Instr::Csrrs(_)
            | Instr::Csrrc(_)
            | Instr::Csrrwi(_)
            | Instr::Csrrsi(_)
            | Instr::Csrrci(_)
    )
}

/// True exactly for the stores.
pub fn is_memory_write(i: &Instr) -> bool {
    matches!(i, Instr::Sb(_) | Instr::Sh(_) | Instr::Sw(_))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roster_has_47_distinct_entries() {
        let mut names: Vec<_> = Mnemonic::ALL.iter().map(|m| m.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 47);
    }

    #[test]
    fn synthesize_matches_requested_mnemonic() {
        for (k, m) in Mnemonic::ALL.into_iter().enumerate() {
            for seed in [0, u64::MAX, 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k as u64 + 1)] {
                let i = Instr::synthesize(m, seed);
                assert_eq!(i.mnemonic(), m);
                assert!(i.is_well_formed(), "{i:?}");
            }
        }
    }

    #[test]
    fn classification() {
        let csr = Instr::synthesize(Mnemonic::Csrrw, 7);
        assert!(is_csr(&csr));
        assert!(!is_csr(&Instr::synthesize(Mnemonic::Add, 7)));
        assert!(!is_csr(&Instr::Ecall));

        assert!(is_memory_write(&Instr::synthesize(Mnemonic::Sw, 1)));
        assert!(!is_memory_write(&Instr::synthesize(Mnemonic::Lw, 1)));
        assert!(!is_memory_write(&Instr::synthesize(Mnemonic::Jalr, 1)));

        let csr_count = Mnemonic::ALL.iter().filter(|&&m| is_csr(&Instr::synthesize(m, 0))).count();
        assert_eq!(csr_count, 6);
        let store_count =
            Mnemonic::ALL.iter().filter(|&&m| is_memory_write(&Instr::synthesize(m, 0))).count();
        assert_eq!(store_count, 3);
    }
}
