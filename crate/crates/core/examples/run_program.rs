// Assemble a small loop from instruction values, load it, and run it with
// every step checked against its specification.

use rv32i::harness::{run_program, ProgramImage};
use rv32i::isa::{BType, IType, RType};
use rv32i::{encode, Instr, RegIdx, Word};

fn x(i: u8) -> RegIdx {
    RegIdx::new(i).unwrap()
}

fn main() {
    // x10 = 1 + 2 + ... + 10
    let program = [
        Instr::Addi(IType { rd: x(5), rs1: x(0), imm12: 10 }),
        Instr::Addi(IType { rd: x(10), rs1: x(0), imm12: 0 }),
        Instr::Add(RType { rd: x(10), rs1: x(10), rs2: x(5) }),
        Instr::Addi(IType { rd: x(5), rs1: x(5), imm12: 0xFFF }),
        Instr::Bne(BType { rs1: x(5), rs2: x(0), imm13: 0x1FF8 }),
        Instr::Ecall,
    ];
    let words: Vec<u32> = program.iter().map(encode).collect();
    let img = ProgramImage::from_words(Word::new(0x8000), &words);

    let report = run_program(&img, 10_000, true).expect("image fits");
    println!("{report}");
    assert_eq!(report.regs[10], Word::new(55));
    assert!(report.is_clean());
}
