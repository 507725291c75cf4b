use super::decode::{
    OP_AUIPC, OP_BRANCH, OP_IMM, OP_JAL, OP_JALR, OP_LOAD, OP_LUI, OP_MISC_MEM, OP_REG, OP_STORE, OP_SYSTEM,
};
use super::*;

fn reg(r: RegIdx) -> u32 {
    r.get() as u32
}

fn r_word(op: u32, funct3: u32, funct7: u32, r: RType) -> u32 {
    funct7 << 25 | reg(r.rs2) << 20 | reg(r.rs1) << 15 | funct3 << 12 | reg(r.rd) << 7 | op
}

fn i_word(op: u32, funct3: u32, i: IType) -> u32 {
    (i.imm12 & 0xFFF) << 20 | reg(i.rs1) << 15 | funct3 << 12 | reg(i.rd) << 7 | op
}

fn shift_word(funct3: u32, funct7: u32, s: ShiftImm) -> u32 {
    funct7 << 25 | (s.shamt & 0x1F) << 20 | reg(s.rs1) << 15 | funct3 << 12 | reg(s.rd) << 7 | OP_IMM
}

fn s_word(funct3: u32, s: SType) -> u32 {
    let imm = s.imm12 & 0xFFF;
    (imm >> 5) << 25 | reg(s.rs2) << 20 | reg(s.rs1) << 15 | funct3 << 12 | (imm & 0x1F) << 7 | OP_STORE
}

fn b_word(funct3: u32, b: BType) -> u32 {
    let imm = b.imm13 & 0x1FFE;
    (imm >> 12 & 1) << 31
        | (imm >> 5 & 0x3F) << 25
        | reg(b.rs2) << 20
        | reg(b.rs1) << 15
        | funct3 << 12
        | (imm >> 1 & 0xF) << 8
        | (imm >> 11 & 1) << 7
        | OP_BRANCH
}

fn u_word(op: u32, u: UType) -> u32 {
    (u.imm20 & 0xF_FFFF) << 12 | reg(u.rd) << 7 | op
}

fn j_word(j: JType) -> u32 {
    let imm = j.imm21 & 0x1F_FFFE;
    (imm >> 20 & 1) << 31
        | (imm >> 1 & 0x3FF) << 21
        | (imm >> 11 & 1) << 20
        | (imm >> 12 & 0xFF) << 12
        | reg(j.rd) << 7
        | OP_JAL
}

fn csr_word(funct3: u32, csr: u16, src: u32, rd: RegIdx) -> u32 {
    (csr as u32 & 0xFFF) << 20 | (src & 0x1F) << 15 | funct3 << 12 | reg(rd) << 7 | OP_SYSTEM
}

/// Canonical encoding of a well-formed instruction.
pub fn encode(i: &Instr) -> u32 {
    use Instr::*;
    match *i {
        Lui(u) => u_word(OP_LUI, u),
        Auipc(u) => u_word(OP_AUIPC, u),
        Jal(j) => j_word(j),
        Jalr(x) => i_word(OP_JALR, 0b000, x),
        Beq(b) => b_word(0b000, b),
        Bne(b) => b_word(0b001, b),
        Blt(b) => b_word(0b100, b),
        Bge(b) => b_word(0b101, b),
        Bltu(b) => b_word(0b110, b),
        Bgeu(b) => b_word(0b111, b),
        Lb(x) => i_word(OP_LOAD, 0b000, x),
        Lh(x) => i_word(OP_LOAD, 0b001, x),
        Lw(x) => i_word(OP_LOAD, 0b010, x),
        Lbu(x) => i_word(OP_LOAD, 0b100, x),
        Lhu(x) => i_word(OP_LOAD, 0b101, x),
        Sb(s) => s_word(0b000, s),
        Sh(s) => s_word(0b001, s),
        Sw(s) => s_word(0b010, s),
        Addi(x) => i_word(OP_IMM, 0b000, x),
        Slti(x) => i_word(OP_IMM, 0b010, x),
        Sltiu(x) => i_word(OP_IMM, 0b011, x),
        Xori(x) => i_word(OP_IMM, 0b100, x),
        Ori(x) => i_word(OP_IMM, 0b110, x),
        Andi(x) => i_word(OP_IMM, 0b111, x),
        Slli(s) => shift_word(0b001, 0b000_0000, s),
        Srli(s) => shift_word(0b101, 0b000_0000, s),
        Srai(s) => shift_word(0b101, 0b010_0000, s),
        Add(r) => r_word(OP_REG, 0b000, 0b000_0000, r),
        Sub(r) => r_word(OP_REG, 0b000, 0b010_0000, r),
        Sll(r) => r_word(OP_REG, 0b001, 0b000_0000, r),
        Slt(r) => r_word(OP_REG, 0b010, 0b000_0000, r),
        Sltu(r) => r_word(OP_REG, 0b011, 0b000_0000, r),
        Xor(r) => r_word(OP_REG, 0b100, 0b000_0000, r),
        Srl(r) => r_word(OP_REG, 0b101, 0b000_0000, r),
        Sra(r) => r_word(OP_REG, 0b101, 0b010_0000, r),
        Or(r) => r_word(OP_REG, 0b110, 0b000_0000, r),
        And(r) => r_word(OP_REG, 0b111, 0b000_0000, r),
        Fence(f) => {
            (f.fm & 0xF) << 28
                | (f.pred & 0xF) << 24
                | (f.succ & 0xF) << 20
                | reg(f.rs1) << 15
                | reg(f.rd) << 7
                | OP_MISC_MEM
        }
        FenceI(x) => i_word(OP_MISC_MEM, 0b001, x),
        Ecall => OP_SYSTEM,
        Ebreak => 1 << 20 | OP_SYSTEM,
        Csrrw(c) => csr_word(0b001, c.csr, reg(c.rs1), c.rd),
        Csrrs(c) => csr_word(0b010, c.csr, reg(c.rs1), c.rd),
        Csrrc(c) => csr_word(0b011, c.csr, reg(c.rs1), c.rd),
        Csrrwi(c) => csr_word(0b101, c.csr, c.zimm, c.rd),
        Csrrsi(c) => csr_word(0b110, c.csr, c.zimm, c.rd),
        Csrrci(c) => csr_word(0b111, c.csr, c.zimm, c.rd),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_encodings() {
        let r = |i| RegIdx::new(i).unwrap();
        assert_eq!(encode(&Instr::Jalr(IType { rd: r(1), rs1: r(5), imm12: 4 })), 0x0042_80E7);
        assert_eq!(encode(&Instr::Addi(IType { rd: r(0), rs1: r(0), imm12: 0 })), 0x0000_0013);
        assert_eq!(encode(&Instr::Ecall), 0x0000_0073);
        assert_eq!(encode(&Instr::Ebreak), 0x0010_0073);
    }

    fn mnemonic() -> impl Strategy<Value = Mnemonic> {
        prop::sample::select(Mnemonic::ALL.to_vec())
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(m in mnemonic(), entropy in any::<u64>()) {
            let i = Instr::synthesize(m, entropy);
            prop_assert_eq!(decode(encode(&i)), DecodeResult::Valid(i));
        }

        #[test]
        fn encode_canonicalizes_decoded_words(w in any::<u32>()) {
            if let DecodeResult::Valid(i) = decode(w) {
                prop_assert!(i.is_well_formed());
                let canon = encode(&i);
                prop_assert_eq!(decode(canon), DecodeResult::Valid(i));
                // every accepted field is retained, so the encoding is exact
                prop_assert_eq!(canon, w);
            }
        }
    }
}
