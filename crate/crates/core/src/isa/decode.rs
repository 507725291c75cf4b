use super::*;

/// Outcome of decoding one 32-bit word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodeResult {
    Valid(Instr),
    /// No RV32I encoding matches; carries the raw word.
    Illegal(u32),
}

impl DecodeResult {
    pub fn instr(self) -> Option<Instr> {
        match self {
            DecodeResult::Valid(i) => Some(i),
            DecodeResult::Illegal(_) => None,
        }
    }
}

pub(crate) const OP_LUI: u32 = 0b011_0111;
pub(crate) const OP_AUIPC: u32 = 0b001_0111;
pub(crate) const OP_JAL: u32 = 0b110_1111;
pub(crate) const OP_JALR: u32 = 0b110_0111;
pub(crate) const OP_BRANCH: u32 = 0b110_0011;
pub(crate) const OP_LOAD: u32 = 0b000_0011;
pub(crate) const OP_STORE: u32 = 0b010_0011;
pub(crate) const OP_IMM: u32 = 0b001_0011;
pub(crate) const OP_REG: u32 = 0b011_0011;
pub(crate) const OP_MISC_MEM: u32 = 0b000_1111;
pub(crate) const OP_SYSTEM: u32 = 0b111_0011;

const ECALL_WORD: u32 = 0x0000_0073;
const EBREAK_WORD: u32 = 0x0010_0073;

fn bits(w: u32, hi: u32, lo: u32) -> u32 {
    (w >> lo) & ((1 << (hi - lo + 1)) - 1)
}

fn rd(w: u32) -> RegIdx {
    RegIdx::from_field(w >> 7)
}

fn rs1(w: u32) -> RegIdx {
    RegIdx::from_field(w >> 15)
}

fn rs2(w: u32) -> RegIdx {
    RegIdx::from_field(w >> 20)
}

fn i_type(w: u32) -> IType {
    IType { rd: rd(w), rs1: rs1(w), imm12: bits(w, 31, 20) }
}

fn s_type(w: u32) -> SType {
    SType { rs1: rs1(w), rs2: rs2(w), imm12: bits(w, 31, 25) << 5 | bits(w, 11, 7) }
}

fn b_type(w: u32) -> BType {
    let imm13 = bits(w, 31, 31) << 12 | bits(w, 7, 7) << 11 | bits(w, 30, 25) << 5 | bits(w, 11, 8) << 1;
    BType { rs1: rs1(w), rs2: rs2(w), imm13 }
}

fn u_type(w: u32) -> UType {
    UType { rd: rd(w), imm20: bits(w, 31, 12) }
}

fn j_type(w: u32) -> JType {
    let imm21 = bits(w, 31, 31) << 20 | bits(w, 19, 12) << 12 | bits(w, 20, 20) << 11 | bits(w, 30, 21) << 1;
    JType { rd: rd(w), imm21 }
}

fn r_type(w: u32) -> RType {
    RType { rd: rd(w), rs1: rs1(w), rs2: rs2(w) }
}

/// Decodes one instruction word. Total: any word without a matching
/// encoding yields [`DecodeResult::Illegal`].
pub fn decode(w: u32) -> DecodeResult {
    match decode_valid(w) {
        Some(i) => DecodeResult::Valid(i),
        None => DecodeResult::Illegal(w),
    }
}

fn decode_valid(w: u32) -> Option<Instr> {
    let funct3 = bits(w, 14, 12);
    let funct7 = bits(w, 31, 25);
    let instr = match bits(w, 6, 0) {
        OP_LUI => Instr::Lui(u_type(w)),
        OP_AUIPC => Instr::Auipc(u_type(w)),
        OP_JAL => Instr::Jal(j_type(w)),
        OP_JALR if funct3 == 0 => Instr::Jalr(i_type(w)),
        OP_BRANCH => {
            let b = b_type(w);
            match funct3 {
                0b000 => Instr::Beq(b),
                0b001 => Instr::Bne(b),
                0b100 => Instr::Blt(b),
                0b101 => Instr::Bge(b),
                0b110 => Instr::Bltu(b),
                0b111 => Instr::Bgeu(b),
                _ => return None,
            }
        }
        OP_LOAD => {
            let i = i_type(w);
            match funct3 {
                0b000 => Instr::Lb(i),
                0b001 => Instr::Lh(i),
                0b010 => Instr::Lw(i),
                0b100 => Instr::Lbu(i),
                0b101 => Instr::Lhu(i),
                _ => return None,
            }
        }
        OP_STORE => {
            let s = s_type(w);
            match funct3 {
                0b000 => Instr::Sb(s),
                0b001 => Instr::Sh(s),
                0b010 => Instr::Sw(s),
                _ => return None,
            }
        }
        OP_IMM => {
            let i = i_type(w);
            let sh = ShiftImm { rd: i.rd, rs1: i.rs1, shamt: bits(w, 24, 20) };
            match (funct3, funct7) {
                (0b000, _) => Instr::Addi(i),
                (0b010, _) => Instr::Slti(i),
                (0b011, _) => Instr::Sltiu(i),
                (0b100, _) => Instr::Xori(i),
                (0b110, _) => Instr::Ori(i),
                (0b111, _) => Instr::Andi(i),
                (0b001, 0b000_0000) => Instr::Slli(sh),
                (0b101, 0b000_0000) => Instr::Srli(sh),
                (0b101, 0b010_0000) => Instr::Srai(sh),
                _ => return None,
            }
        }
        OP_REG => {
            let r = r_type(w);
            match (funct7, funct3) {
                (0b000_0000, 0b000) => Instr::Add(r),
                (0b010_0000, 0b000) => Instr::Sub(r),
                (0b000_0000, 0b001) => Instr::Sll(r),
                (0b000_0000, 0b010) => Instr::Slt(r),
                (0b000_0000, 0b011) => Instr::Sltu(r),
                (0b000_0000, 0b100) => Instr::Xor(r),
                (0b000_0000, 0b101) => Instr::Srl(r),
                (0b010_0000, 0b101) => Instr::Sra(r),
                (0b000_0000, 0b110) => Instr::Or(r),
                (0b000_0000, 0b111) => Instr::And(r),
                _ => return None,
            }
        }
        OP_MISC_MEM => match funct3 {
            0b000 => Instr::Fence(FenceFields {
                fm: bits(w, 31, 28),
                pred: bits(w, 27, 24),
                succ: bits(w, 23, 20),
                rd: rd(w),
                rs1: rs1(w),
            }),
            0b001 => Instr::FenceI(i_type(w)),
            _ => return None,
        },
        OP_SYSTEM => {
            let csr = bits(w, 31, 20) as u16;
            let reg = CsrReg { rd: rd(w), rs1: rs1(w), csr };
            let imm = CsrImm { rd: rd(w), zimm: bits(w, 19, 15), csr };
            match funct3 {
                0b000 => match w {
                    ECALL_WORD => Instr::Ecall,
                    EBREAK_WORD => Instr::Ebreak,
                    _ => return None,
                },
                0b001 => Instr::Csrrw(reg),
                0b010 => Instr::Csrrs(reg),
                0b011 => Instr::Csrrc(reg),
                0b101 => Instr::Csrrwi(imm),
                0b110 => Instr::Csrrsi(imm),
                0b111 => Instr::Csrrci(imm),
                _ => return None,
            }
        }
        _ => return None,
    };
    Some(instr)
}
