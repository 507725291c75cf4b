// The JALR specification: link value, target value, and a cleared low bit.
// A correct step passes; a hand-made faulty post-state is reported by
// clause name.

use rv32i::isa::IType;
use rv32i::machine::write_reg;
use rv32i::speccheck::check_step;
use rv32i::{step, Instr, MachineState, RegIdx, Word};

fn main() {
    let mut pre = MachineState::at(Word::new(0x1000));
    pre.regs = write_reg(&pre.regs, RegIdx::new(5).unwrap(), Word::new(0x2003));
    let jalr = Instr::Jalr(IType { rd: RegIdx::new(1).unwrap(), rs1: RegIdx::new(5).unwrap(), imm12: 4 });

    let post = step(&pre, &jalr);
    println!("{jalr} at {:#x}: pc -> {:#x}, x1 = {:#x}", pre.pc.get(), post.pc.get(), post.regs[1].get());
    let verdict = check_step(&pre, &jalr, &post);
    println!("verdict: {}", if verdict.passed() { "pass" } else { "fail" });
    assert!(verdict.passed());

    // forget to clear bit 0
    let mut faulty = post.clone();
    faulty.pc = Word::new(0x2007);
    for v in check_step(&pre, &jalr, &faulty).violations() {
        println!("  {}: expected {}, observed {}", v.component, v.expected, v.observed);
    }
}
