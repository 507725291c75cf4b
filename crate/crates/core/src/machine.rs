//! Architectural state and its pure accessors.
//!
//! Every updater returns a new value; nothing here mutates its arguments.
//! Memory and the CSR file are persistent maps, so copying a state is cheap
//! and unchanged substructure is shared between the pre- and post-state.

use std::fmt;

use im::OrdMap;
use serde::{Deserialize, Serialize};

use crate::bitops::{addr_mod, low_bits, Word};

/// Number of integer registers.
pub const NUM_REGS: usize = 32;

/// Number of addressable CSRs.
pub const NUM_CSRS: u16 = 4096;

/// Integer register index in `0..32`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RegIdx(u8);

impl RegIdx {
    pub const ZERO: RegIdx = RegIdx(0);

    pub const fn new(index: u8) -> Option<RegIdx> {
        if (index as usize) < NUM_REGS {
            Some(RegIdx(index))
        } else {
            None
        }
    }

    /// Takes the low five bits of an encoding field.
    pub const fn from_field(bits: u32) -> RegIdx {
        RegIdx((bits & 0x1F) as u8)
    }

    pub const fn get(self) -> u8 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for RegIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for RegIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HostEventKind {
    ECall,
    EBreak,
    IllegalInstruction,
}

/// One entry of the host-event trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HostEvent {
    pub kind: HostEventKind,
    pub pc: Word,
}

/// Privilege mode. RV32I never leaves machine mode here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PrivMode {
    #[default]
    Machine,
}

pub type Memory = OrdMap<Word, u8>;
pub type CsrFile = OrdMap<u16, Word>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineState {
    pub regs: Vec<Word>,
    pub pc: Word,
    pub mem: Memory,
    pub csrs: CsrFile,
    pub halt: bool,
    pub mode: PrivMode,
    pub trace: Vec<HostEvent>,
}

impl Default for MachineState {
    fn default() -> Self {
        MachineState {
            regs: vec![Word::ZERO; NUM_REGS],
            pc: Word::ZERO,
            mem: Memory::new(),
            csrs: CsrFile::new(),
            halt: false,
            mode: PrivMode::Machine,
            trace: Vec::new(),
        }
    }
}

impl MachineState {
    /// A fresh, all-zero state with the given pc.
    pub fn at(pc: Word) -> Self {
        MachineState { pc, ..Default::default() }
    }

    pub fn reg(&self, i: RegIdx) -> Word {
        read_reg(&self.regs, i)
    }

    /// Checks the structural invariants: 32 registers and a zero `x0`.
    /// Word and byte ranges hold by construction.
    pub fn is_well_formed(&self) -> bool {
        self.regs.len() == NUM_REGS && self.regs[0] == Word::ZERO && self.csrs.keys().all(|&a| a < NUM_CSRS)
    }
}

pub fn fresh_regs() -> Vec<Word> {
    vec![Word::ZERO; NUM_REGS]
}

pub fn read_reg(regs: &[Word], i: RegIdx) -> Word {
    regs[i.index()]
}

/// Writes `v` into slot `i`. Writing `x0` is a no-op.
pub fn write_reg(regs: &[Word], i: RegIdx, v: Word) -> Vec<Word> {
    let mut out = regs.to_vec();
    if !i.is_zero() {
        out[i.index()] = v;
    }
    out
}

/// Joint update of the register file and pc; every other field is kept.
pub fn st_regs_pc(s: &MachineState, regs: Vec<Word>, pc: Word) -> MachineState {
    MachineState {
        regs,
        pc,
        mem: s.mem.clone(),
        csrs: s.csrs.clone(),
        halt: s.halt,
        mode: s.mode,
        trace: s.trace.clone(),
    }
}

/// Access width of a load or store, in bytes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Width {
    Byte = 1,
    Half = 2,
    Word = 4,
}

impl Width {
    pub const fn bytes(self) -> u32 {
        self as u32
    }

    pub const fn bits(self) -> u32 {
        8 * self as u32
    }
}

pub fn mem_byte(mem: &Memory, addr: Word) -> u8 {
    mem.get(&addr).copied().unwrap_or(0)
}

/// Little-endian read of `width` bytes at `addr`. Addresses wrap, absent
/// bytes read as zero, and there is no alignment requirement.
pub fn mem_load(mem: &Memory, addr: Word, width: Width) -> Word {
    let value = (0..width.bytes()).rev().fold(0u32, |acc, j| {
        let byte = mem_byte(mem, addr_mod(addr.to_int() + j as i128));
        (acc << 8) | byte as u32
    });
    Word::new(value)
}

/// Little-endian write of the low `width` bytes of `v` at `addr`.
pub fn mem_store(mem: &Memory, addr: Word, width: Width, v: Word) -> Memory {
    let value = low_bits(width.bits(), v.to_int()) as u32;
    let mut out = mem.clone();
    for j in 0..width.bytes() {
        let byte = (value >> (8 * j)) as u8;
        out.insert(addr_mod(addr.to_int() + j as i128), byte);
    }
    out
}

pub fn csr_read(csrs: &CsrFile, a: u16) -> Word {
    debug_assert!(a < NUM_CSRS);
    csrs.get(&a).copied().unwrap_or(Word::ZERO)
}

pub fn csr_write(csrs: &CsrFile, a: u16, v: Word) -> CsrFile {
    debug_assert!(a < NUM_CSRS);
    csrs.update(a, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(i: u8) -> RegIdx {
        RegIdx::new(i).unwrap()
    }

    #[test]
    fn reg_index_range() {
        assert!(RegIdx::new(31).is_some());
        assert!(RegIdx::new(32).is_none());
        assert_eq!(RegIdx::from_field(0xFFFF_FFE1), r(1));
    }

    #[test]
    fn register_file_laws() {
        let regs = fresh_regs();
        assert_eq!(read_reg(&regs, RegIdx::ZERO), Word::ZERO);
        assert_eq!(write_reg(&regs, RegIdx::ZERO, Word::new(0xDEAD)), regs);

        let five = write_reg(&regs, r(5), Word::new(7));
        assert_eq!(read_reg(&five, r(5)), Word::new(7));
        assert_eq!(five.len(), NUM_REGS);
        for i in (0..32).filter(|&i| i != 5) {
            assert_eq!(read_reg(&five, r(i)), Word::ZERO);
        }
        assert_eq!(read_reg(&write_reg(&five, r(3), Word::new(9)), r(3)), Word::new(9));
    }

    #[test]
    fn st_regs_pc_frames_other_fields() {
        let mut s = MachineState::at(Word::new(0x40));
        s.mem.insert(Word::new(8), 1);
        s.csrs.insert(0x305, Word::new(3));
        s.trace.push(HostEvent { kind: HostEventKind::EBreak, pc: Word::new(4) });
        assert_eq!(st_regs_pc(&s, s.regs.clone(), s.pc), s);

        let regs = write_reg(&s.regs, r(2), Word::new(11));
        let t = st_regs_pc(&s, regs.clone(), Word::new(0x80));
        assert_eq!(t.pc, Word::new(0x80));
        assert_eq!(t.regs, regs);
        assert_eq!(t.mem, s.mem);
        assert_eq!(t.csrs, s.csrs);
        assert_eq!(t.halt, s.halt);
        assert_eq!(t.mode, s.mode);
        assert_eq!(t.trace, s.trace);
    }

    #[test]
    fn mem_load_examples() {
        assert_eq!(mem_load(&Memory::new(), Word::new(0x100), Width::Word), Word::ZERO);

        let mem: Memory = [(0x100u32, 0x78u8), (0x101, 0x56), (0x102, 0x34), (0x103, 0x12)]
            .into_iter()
            .map(|(a, b)| (Word::new(a), b))
            .collect();
        assert_eq!(mem_load(&mem, Word::new(0x100), Width::Word), Word::new(0x1234_5678));

        let wrap: Memory = [(Word::MAX, 0xAAu8), (Word::ZERO, 0xBB)].into_iter().collect();
        assert_eq!(mem_load(&wrap, Word::MAX, Width::Half), Word::new(0xBBAA));
    }

    #[test]
    fn mem_store_truncates_to_width() {
        let mem = mem_store(&Memory::new(), Word::new(0x200), Width::Half, Word::new(0x1234_5678));
        assert_eq!(mem_load(&mem, Word::new(0x200), Width::Half), Word::new(0x5678));
        assert_eq!(mem.len(), 2);
    }

    #[test]
    fn csr_laws() {
        let c = CsrFile::new();
        assert_eq!(csr_read(&c, 0x305), Word::ZERO);
        let c1 = csr_write(&c, 0x305, Word::new(5));
        assert_eq!(csr_read(&c1, 0x305), Word::new(5));
        assert_eq!(csr_read(&c1, 0x300), Word::ZERO);
        let c2 = csr_write(&c1, 0x305, Word::new(6));
        assert_eq!(csr_read(&c2, 0x305), Word::new(6));
        assert_eq!(csr_read(&csr_write(&c2, 0x305, csr_read(&c2, 0x305)), 0x305), Word::new(6));
        // the argument is untouched
        assert!(c.is_empty());
    }

    fn width() -> impl Strategy<Value = Width> {
        prop_oneof![Just(Width::Byte), Just(Width::Half), Just(Width::Word)]
    }

    proptest! {
        #[test]
        fn write_reg_changes_exactly_one_slot(i in 0u8..32, v in any::<u32>()) {
            let regs: Vec<Word> = (0..32u32).map(|k| Word::new(if k == 0 { 0 } else { k * 3 })).collect();
            let out = write_reg(&regs, r(i), Word::new(v));
            prop_assert_eq!(out.len(), 32);
            for k in 0..32usize {
                if i != 0 && k == i as usize {
                    prop_assert_eq!(out[k], Word::new(v));
                } else {
                    prop_assert_eq!(out[k], regs[k]);
                }
            }
        }

        #[test]
        fn mem_matches_bytewise_oracle(
            addr in any::<u32>(),
            v in any::<u32>(),
            w in width(),
            other in any::<u32>(),
        ) {
            let mem = mem_store(&Memory::new(), Word::new(addr), w, Word::new(v));
            // bytewise oracle: sum of byte_j * 256^j over wrapped addresses
            let mut expected: u64 = 0;
            for j in 0..w.bytes() {
                let a = Word::new(addr.wrapping_add(j));
                expected += (mem.get(&a).copied().unwrap_or(0) as u64) << (8 * j);
            }
            let mask = if w == Width::Word { u32::MAX as u64 } else { (1u64 << w.bits()) - 1 };
            prop_assert_eq!(expected, v as u64 & mask);
            prop_assert_eq!(mem_load(&mem, Word::new(addr), w).get() as u64, expected);

            let disjoint = other.wrapping_sub(addr) >= w.bytes();
            if disjoint {
                prop_assert_eq!(mem_load(&mem, Word::new(other), Width::Byte), Word::ZERO);
            }
        }
    }
}
