use super::{Component, FrameFootprint};
use crate::bitops::Word;
use crate::machine::{csr_read, mem_byte, HostEvent, HostEventKind, MachineState, NUM_REGS};

/// A post-state with exactly one component perturbed.
#[derive(Clone, Debug)]
pub struct Mutation {
    /// Name of the perturbed component, as the checkers report it.
    pub component: String,
    pub state: MachineState,
}

fn mutated(component: Component, state: MachineState) -> Mutation {
    Mutation { component: component.to_string(), state }
}

/// Every single-component perturbation of `post` that lies outside `fp`.
///
/// Covers each frozen register, register-file length, the pc (when frozen),
/// one existing and one fresh memory byte, one CSR, the halt flag (when
/// frozen) and the trace. The privilege mode has a single value and cannot
/// be perturbed.
pub fn mutations_outside(pre: &MachineState, post: &MachineState, fp: &FrameFootprint) -> Vec<Mutation> {
    let mut out = Vec::new();

    for k in 0..NUM_REGS.min(post.regs.len()) {
        if !fp.reg_writable(k) {
            let mut s = post.clone();
            s.regs[k] = Word::new(s.regs[k].get() ^ 0x8000_0001);
            out.push(mutated(Component::Reg(k as u8), s));
        }
    }

    let mut longer = post.clone();
    longer.regs.push(Word::ZERO);
    out.push(mutated(Component::RegLen, longer));

    if !fp.may_change_pc {
        let mut s = post.clone();
        s.pc = Word::new(s.pc.get() ^ 4);
        out.push(mutated(Component::Pc, s));
    }

    let existing = post.mem.keys().copied().find(|&a| !fp.writable_mem.contains(a));
    let fresh = (0..64u32)
        .map(|k| Word::new(pre.pc.get().wrapping_add(0x1_0000 + 4 * k)))
        .find(|&a| !fp.writable_mem.contains(a) && !post.mem.contains_key(&a));
    for addr in existing.into_iter().chain(fresh) {
        let mut s = post.clone();
        s.mem.insert(addr, mem_byte(&post.mem, addr) ^ 0x5A);
        out.push(mutated(Component::Mem(addr), s));
    }

    if let Some(addr) = [0x340u16, 0x341].into_iter().find(|&a| !fp.may_change_csrs.contains(a)) {
        let mut s = post.clone();
        s.csrs.insert(addr, Word::new(csr_read(&post.csrs, addr).get() ^ 1));
        out.push(mutated(Component::Csr(addr), s));
    }

    if !fp.may_change_halt {
        let mut s = post.clone();
        s.halt = !s.halt;
        out.push(mutated(Component::Halt, s));
    }

    if !fp.may_append_trace {
        let mut s = post.clone();
        s.trace.push(HostEvent { kind: HostEventKind::EBreak, pc: post.pc });
        out.push(mutated(Component::Trace, s));
    } else if !pre.trace.is_empty() {
        // appending is allowed, so rewrite history instead
        let mut s = post.clone();
        s.trace[0].pc = Word::new(s.trace[0].pc.get() ^ 4);
        out.push(mutated(Component::Trace, s));
    }

    out
}
