// CSR read-modify-write. Set and clear with a zero source read without
// writing, so the CSR file keeps no new entry.

use rv32i::isa::{CsrImm, CsrReg};
use rv32i::machine::{csr_read, write_reg};
use rv32i::{step, Instr, MachineState, RegIdx, Word};

const MSCRATCH: u16 = 0x340;

fn main() {
    let x = |i| RegIdx::new(i).unwrap();
    let mut s = MachineState::default();
    s.regs = write_reg(&s.regs, x(2), Word::new(0xF0));

    let program = [
        Instr::Csrrw(CsrReg { rd: x(1), rs1: x(2), csr: MSCRATCH }),
        Instr::Csrrsi(CsrImm { rd: x(3), zimm: 0x0F, csr: MSCRATCH }),
        Instr::Csrrc(CsrReg { rd: x(4), rs1: x(2), csr: MSCRATCH }),
        Instr::Csrrs(CsrReg { rd: x(5), rs1: x(0), csr: 0x7C0 }),
    ];
    for i in &program {
        s = step(&s, i);
        println!("{:<24} mscratch = {:#06x}", i.to_string(), csr_read(&s.csrs, MSCRATCH).get());
    }
    println!("x1..x5 = {:?}", &s.regs[1..6]);
    assert_eq!(csr_read(&s.csrs, MSCRATCH), Word::new(0x0F));
    assert!(!s.csrs.contains_key(&0x7C0));
}
