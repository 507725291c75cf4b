// Footprints and frame checking. Every perturbation of a post-state that
// lies outside the instruction's footprint is caught and named.

use rv32i::isa::SType;
use rv32i::machine::write_reg;
use rv32i::speccheck::{check_frame, footprint_of, mutations_outside};
use rv32i::{step, Instr, MachineState, RegIdx, Word};

fn main() {
    let x = |i| RegIdx::new(i).unwrap();
    let mut pre = MachineState::at(Word::new(0x400));
    pre.regs = write_reg(&pre.regs, x(1), Word::new(0xFFFF_FFFE));
    pre.regs = write_reg(&pre.regs, x(2), Word::new(0xCAFE_F00D));
    let sw = Instr::Sw(SType { rs1: x(1), rs2: x(2), imm12: 0 });

    let post = step(&pre, &sw);
    let fp = footprint_of(&sw, &pre);
    println!("{sw}: may write pc {}, bytes {:?}", fp.may_change_pc, fp.writable_mem);
    assert!(check_frame(&pre, &post, &fp).passed());

    let mutations = mutations_outside(&pre, &post, &fp);
    let mut caught = 0;
    for m in &mutations {
        let verdict = check_frame(&pre, &m.state, &fp);
        if verdict.flags(&m.component) {
            caught += 1;
        } else {
            println!("missed {}", m.component);
        }
    }
    println!("{caught} of {} perturbations flagged by name", mutations.len());
    assert_eq!(caught, mutations.len());
}
