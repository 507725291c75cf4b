//! Random machine states and instructions shared by the integration suites.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};

use rv32i::machine::{HostEvent, HostEventKind};
use rv32i::{encode, Instr, MachineState, Mnemonic, Word};

const KINDS: [HostEventKind; 3] =
    [HostEventKind::ECall, HostEventKind::EBreak, HostEventKind::IllegalInstruction];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fields that make a random state interesting for `i`: bytes at the
/// effective address of a load or store, and an entry for a CSR operand.
fn seed_operands(s: &mut MachineState, i: &Instr, salt: u32) {
    let w = encode(i);
    let opcode = w & 0x7F;
    let rs1 = ((w >> 15) & 31) as usize;
    let imm = match opcode {
        0x03 => ((w as i32) >> 20) as u32,
        0x23 => ((((w as i32) >> 25) << 5) as u32) | ((w >> 7) & 31),
        _ => 0,
    };
    if opcode == 0x03 || opcode == 0x23 {
        let ea = s.regs[rs1].get().wrapping_add(imm);
        for k in 0..4u32 {
            if salt >> k & 1 == 1 {
                s.mem.insert(Word::new(ea.wrapping_add(k)), (salt >> (8 + 4 * k)) as u8);
            }
        }
    }
    if opcode == 0x73 && (w >> 12) & 7 != 0 && salt & 0x10 != 0 {
        s.csrs.insert((w >> 20) as u16, Word::new(salt.rotate_left(7)));
    }
}

fn build_state(
    regs: [u32; 32],
    pc: u32,
    mem: Vec<(u32, u8)>,
    csrs: Vec<(u16, u32)>,
    halt: bool,
    trace: Vec<(u8, u32)>,
) -> MachineState {
    let mut s = MachineState::at(Word::new(pc));
    for (k, v) in regs.into_iter().enumerate().skip(1) {
        s.regs[k] = Word::new(v);
    }
    for (a, b) in mem {
        s.mem.insert(Word::new(a), b);
    }
    for (a, v) in csrs {
        s.csrs.insert(a, Word::new(v));
    }
    s.halt = halt;
    s.trace = trace
        .into_iter()
        .map(|(k, pc)| HostEvent { kind: KINDS[k as usize % 3], pc: Word::new(pc) })
        .collect();
    s
}

/// A well-formed state; halted with probability `p_halt`.
pub fn arb_state(p_halt: f64) -> impl Strategy<Value = MachineState> {
    (
        prop::array::uniform32(prop_oneof![Just(0u32), Just(u32::MAX), Just(0x8000_0000u32), any::<u32>()]),
        any::<u32>(),
        prop::collection::vec((any::<u32>(), any::<u8>()), 0..6),
        prop::collection::vec((0u16..4096, any::<u32>()), 0..4),
        prop::bool::weighted(p_halt),
        prop::collection::vec((0u8..3, any::<u32>()), 0..3),
    )
        .prop_map(|(regs, pc, mem, csrs, halt, trace)| build_state(regs, pc, mem, csrs, halt, trace))
}

pub fn arb_instr() -> impl Strategy<Value = Instr> {
    (0usize..47, any::<u64>()).prop_map(|(k, e)| Instr::synthesize(Mnemonic::ALL[k], e))
}

pub fn arb_instr_of(m: Mnemonic) -> impl Strategy<Value = Instr> {
    any::<u64>().prop_map(move |e| Instr::synthesize(m, e))
}

/// A state paired with an instruction, with memory and CSRs seeded where
/// the instruction will look.
pub fn arb_pair(p_halt: f64) -> impl Strategy<Value = (MachineState, Instr)> {
    (arb_state(p_halt), arb_instr(), any::<u32>()).prop_map(|(mut s, i, salt)| {
        seed_operands(&mut s, &i, salt);
        (s, i)
    })
}

/// The same distribution as [`arb_pair`] for a fixed variant, driven by a
/// plain RNG.
pub fn random_pair(r: &mut ChaCha8Rng, m: Mnemonic) -> (MachineState, Instr) {
    let special = [0u32, u32::MAX, 0x8000_0000];
    let mut regs = [0u32; 32];
    for v in regs.iter_mut() {
        let pick = r.random_range(0..4usize);
        *v = if pick < 3 { special[pick] } else { r.random() };
    }
    let mem = (0..r.random_range(0..6)).map(|_| (r.random(), r.random())).collect();
    let csrs = (0..r.random_range(0..4)).map(|_| (r.random_range(0..4096u16), r.random())).collect();
    let trace = (0..r.random_range(0..3)).map(|_| (r.random_range(0..3u8), r.random())).collect();
    let halt = r.random_bool(0.1);
    let mut s = build_state(regs, r.random(), mem, csrs, halt, trace);
    let i = Instr::synthesize(m, r.random());
    seed_operands(&mut s, &i, r.random());
    (s, i)
}
