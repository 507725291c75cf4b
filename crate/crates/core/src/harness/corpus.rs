//! The directed instruction corpus.
//!
//! Each case is a single-instruction scenario: a pre-state with the encoded
//! instruction at its pc, and the expected values of the fields it should
//! compute. Expected values are produced here with native `u32`/`i32`
//! wrapping arithmetic, which shares no code with the interpreter's wide
//! integer helpers or with the postcondition oracle. Every case records the
//! formula that produced its expectation in `provenance`.

use std::collections::BTreeMap;

use crate::bitops::Word;
use crate::exec::cycle;
use crate::isa::{
    encode, BType, CsrImm, CsrReg, DecodeResult, FenceFields, IType, Instr, JType, Mnemonic, RType, SType,
    ShiftImm, UType,
};
use crate::machine::{csr_read, mem_byte, write_reg, HostEvent, HostEventKind, MachineState, RegIdx};
use crate::speccheck::{check_step, Violation};

/// Expected values after one step. Anything not listed is covered by the
/// frame check instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub regs: Vec<(RegIdx, Word)>,
    pub pc: Word,
    pub mem: Vec<(Word, u8)>,
    pub csrs: Vec<(u16, Word)>,
    pub halt: bool,
    /// Event appended to the trace at the pre-state pc, if any.
    pub event: Option<HostEventKind>,
}

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: String,
    pub instr: Instr,
    pub pre: MachineState,
    pub expect: Expectation,
    pub provenance: &'static str,
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub mnemonic: Mnemonic,
    /// Expectation mismatches, one line each.
    pub failures: Vec<String>,
    pub violations: Vec<Violation>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.violations.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CorpusSummary {
    pub results: Vec<CaseResult>,
}

impl CorpusSummary {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CaseResult::passed)
    }

    pub fn per_mnemonic(&self) -> BTreeMap<Mnemonic, usize> {
        let mut counts = BTreeMap::new();
        for r in &self.results {
            *counts.entry(r.mnemonic).or_insert(0) += 1;
        }
        counts
    }
}

/// Fetches, decodes and executes the case's instruction with every
/// specification check enabled, then compares against the expectation.
pub fn run_case(case: &CorpusCase) -> CaseResult {
    let pre = &case.pre;
    let (decoded, out) = cycle(pre);
    let post = out.next;
    let mut failures = Vec::new();

    if decoded != DecodeResult::Valid(case.instr) {
        failures.push(format!("decode: expected {:?}, got {decoded:?}", case.instr));
    }
    let violations = check_step(pre, &case.instr, &post).into_violations();

    let e = &case.expect;
    for &(r, w) in &e.regs {
        let got = post.regs.get(r.index()).copied();
        if got != Some(w) {
            failures.push(format!("{r}: expected {w}, got {got:?}"));
        }
    }
    if post.pc != e.pc {
        failures.push(format!("pc: expected {}, got {}", e.pc, post.pc));
    }
    for &(a, b) in &e.mem {
        let got = mem_byte(&post.mem, a);
        if got != b {
            failures.push(format!("mem[{a}]: expected {b:#x}, got {got:#x}"));
        }
    }
    for &(a, w) in &e.csrs {
        let got = csr_read(&post.csrs, a);
        if got != w {
            failures.push(format!("csr[{a:#x}]: expected {w}, got {got}"));
        }
    }
    if post.halt != e.halt {
        failures.push(format!("halt: expected {}, got {}", e.halt, post.halt));
    }
    let mut trace = pre.trace.clone();
    if let Some(kind) = e.event {
        trace.push(HostEvent { kind, pc: pre.pc });
    }
    if post.trace != trace {
        failures.push(format!("trace: expected {trace:?}, got {:?}", post.trace));
    }

    CaseResult { name: case.name.clone(), mnemonic: case.instr.mnemonic(), failures, violations }
}

pub fn run_corpus() -> CorpusSummary {
    CorpusSummary { results: directed_corpus().iter().map(run_case).collect() }
}

fn r(i: u8) -> RegIdx {
    RegIdx::new(i).expect("register index in range")
}

fn sx12(imm: u32) -> u32 {
    (((imm << 20) as i32) >> 20) as u32
}

fn sx13(imm: u32) -> u32 {
    (((imm << 19) as i32) >> 19) as u32
}

fn sx21(imm: u32) -> u32 {
    (((imm << 11) as i32) >> 11) as u32
}

struct Case {
    label: String,
    instr: Instr,
    pc: u32,
    regs: Vec<(u8, u32)>,
    mem: Vec<(u32, u8)>,
    csrs: Vec<(u16, u32)>,
    trace: Vec<HostEvent>,
    halted: bool,
    want_regs: Vec<(u8, u32)>,
    want_pc: Option<u32>,
    want_mem: Vec<(u32, u8)>,
    want_csrs: Vec<(u16, u32)>,
    event: Option<HostEventKind>,
    provenance: &'static str,
}

fn case(label: impl Into<String>, instr: Instr) -> Case {
    Case {
        label: label.into(),
        instr,
        pc: 0x100,
        regs: Vec::new(),
        mem: Vec::new(),
        csrs: Vec::new(),
        trace: Vec::new(),
        halted: false,
        want_regs: Vec::new(),
        want_pc: None,
        want_mem: Vec::new(),
        want_csrs: Vec::new(),
        event: None,
        provenance: "",
    }
}

impl Case {
    fn at(mut self, pc: u32) -> Self {
        self.pc = pc;
        self
    }

    fn set(mut self, reg: u8, v: u32) -> Self {
        self.regs.push((reg, v));
        self
    }

    fn bytes(mut self, addr: u32, data: &[u8]) -> Self {
        for (k, &b) in data.iter().enumerate() {
            self.mem.push((addr.wrapping_add(k as u32), b));
        }
        self
    }

    fn csr(mut self, a: u16, v: u32) -> Self {
        self.csrs.push((a, v));
        self
    }

    fn traced(mut self, kind: HostEventKind, pc: u32) -> Self {
        self.trace.push(HostEvent { kind, pc: Word::new(pc) });
        self
    }

    fn halted(mut self) -> Self {
        self.halted = true;
        self
    }

    fn want(mut self, reg: u8, v: u32) -> Self {
        self.want_regs.push((reg, v));
        self
    }

    fn want_pc(mut self, pc: u32) -> Self {
        self.want_pc = Some(pc);
        self
    }

    fn want_mem(mut self, addr: u32, data: &[u8]) -> Self {
        for (k, &b) in data.iter().enumerate() {
            self.want_mem.push((addr.wrapping_add(k as u32), b));
        }
        self
    }

    fn want_csr(mut self, a: u16, v: u32) -> Self {
        self.want_csrs.push((a, v));
        self
    }

    fn want_event(mut self, kind: HostEventKind) -> Self {
        self.event = Some(kind);
        self
    }

    fn by(mut self, provenance: &'static str) -> Self {
        self.provenance = provenance;
        self
    }

    /// Value of a data byte as the pre-state holds it.
    fn byte(&self, addr: u32) -> u8 {
        self.mem.iter().rev().find(|&&(a, _)| a == addr).map_or(0, |&(_, b)| b)
    }

    fn build(self) -> CorpusCase {
        let mut pre = MachineState::at(Word::new(self.pc));
        for &(i, v) in &self.regs {
            pre.regs = write_reg(&pre.regs, r(i), Word::new(v));
        }
        for &(a, b) in &self.mem {
            pre.mem.insert(Word::new(a), b);
        }
        for (k, b) in encode(&self.instr).to_le_bytes().into_iter().enumerate() {
            pre.mem.insert(Word::new(self.pc.wrapping_add(k as u32)), b);
        }
        for &(a, v) in &self.csrs {
            pre.csrs.insert(a, Word::new(v));
        }
        pre.trace = self.trace;
        pre.halt = self.halted;

        let expect = if self.halted {
            // a halted machine absorbs every instruction
            Expectation {
                regs: (0..32u8).map(|i| (r(i), pre.regs[i as usize])).collect(),
                pc: pre.pc,
                mem: Vec::new(),
                csrs: Vec::new(),
                halt: true,
                event: None,
            }
        } else {
            Expectation {
                regs: self.want_regs.iter().map(|&(i, v)| (r(i), Word::new(v))).collect(),
                pc: Word::new(self.want_pc.unwrap_or(self.pc.wrapping_add(4))),
                mem: self.want_mem.iter().map(|&(a, b)| (Word::new(a), b)).collect(),
                csrs: self.want_csrs.iter().map(|&(a, v)| (a, Word::new(v))).collect(),
                halt: self.event.is_some(),
                event: self.event,
            }
        };
        CorpusCase {
            name: format!("{}/{}", self.instr.mnemonic(), self.label),
            instr: self.instr,
            pre,
            expect,
            provenance: self.provenance,
        }
    }
}

const ALU_PAIRS: [(u32, u32); 7] = [
    (0, 0),
    (0xFFFF_FFFF, 1),
    (0x7FFF_FFFF, 1),
    (0x8000_0000, 0xFFFF_FFFF),
    (0x1234_5678, 0x0F0F_0F0F),
    (0x8000_0000, 31),
    (0xF0F0_F0F0, 33),
];

type Native = fn(u32, u32) -> u32;
type Ctor<T> = fn(T) -> Instr;
type AluRow<T> = (Ctor<T>, Native, &'static str);

fn reg_reg_cases(out: &mut Vec<Case>) {
    let table: [AluRow<RType>; 10] = [
        (Instr::Add, |a, b| a.wrapping_add(b), "u32::wrapping_add"),
        (Instr::Sub, |a, b| a.wrapping_sub(b), "u32::wrapping_sub"),
        (Instr::Sll, |a, b| a.wrapping_shl(b), "u32::wrapping_shl (shift amount masked to 5 bits)"),
        (Instr::Slt, |a, b| ((a as i32) < (b as i32)) as u32, "i32 comparison"),
        (Instr::Sltu, |a, b| (a < b) as u32, "u32 comparison"),
        (Instr::Xor, |a, b| a ^ b, "u32 xor"),
        (Instr::Srl, |a, b| a.wrapping_shr(b), "u32::wrapping_shr"),
        (Instr::Sra, |a, b| (a as i32).wrapping_shr(b) as u32, "i32::wrapping_shr (arithmetic)"),
        (Instr::Or, |a, b| a | b, "u32 or"),
        (Instr::And, |a, b| a & b, "u32 and"),
    ];
    for (ctor, f, prov) in table {
        let rt = |rd, rs1, rs2| ctor(RType { rd: r(rd), rs1: r(rs1), rs2: r(rs2) });
        for (a, b) in ALU_PAIRS {
            out.push(
                case(format!("{a:#x},{b:#x}"), rt(3, 1, 2)).set(1, a).set(2, b).want(3, f(a, b)).by(prov),
            );
        }
        out.push(case("rs1=x0", rt(3, 0, 2)).set(2, 0x8000_0001).want(3, f(0, 0x8000_0001)).by(prov));
        out.push(
            case("rd=x0", rt(0, 1, 2)).set(1, 0x1234).set(2, 7).want(0, 0).by("x0 is hard-wired to zero"),
        );
        out.push(
            case("rd=rs1", rt(1, 1, 2))
                .set(1, 0xFFFF_0000)
                .set(2, 0x10)
                .want(1, f(0xFFFF_0000, 0x10))
                .by(prov),
        );
    }
}

fn reg_imm_cases(out: &mut Vec<Case>) {
    let table: [AluRow<IType>; 6] = [
        (Instr::Addi, |a, i| a.wrapping_add(i), "u32::wrapping_add of sign-extended imm"),
        (Instr::Slti, |a, i| ((a as i32) < (i as i32)) as u32, "i32 comparison with sign-extended imm"),
        (Instr::Sltiu, |a, i| (a < i) as u32, "u32 comparison with sign-extended imm"),
        (Instr::Xori, |a, i| a ^ i, "u32 xor with sign-extended imm"),
        (Instr::Ori, |a, i| a | i, "u32 or with sign-extended imm"),
        (Instr::Andi, |a, i| a & i, "u32 and with sign-extended imm"),
    ];
    let pairs = [
        (0u32, 0u32),
        (0xFFFF_FFFF, 1),
        (0x7FFF_FFFF, 0x7FF),
        (0x8000_0000, 0x800),
        (0x1234_5678, 0xFFF),
        (5, 0x801),
    ];
    for (ctor, f, prov) in table {
        let it = |rd, rs1, imm12| ctor(IType { rd: r(rd), rs1: r(rs1), imm12 });
        for (a, imm) in pairs {
            out.push(
                case(format!("{a:#x},imm={imm:#x}"), it(3, 1, imm))
                    .set(1, a)
                    .want(3, f(a, sx12(imm)))
                    .by(prov),
            );
        }
        out.push(case("rs1=x0", it(3, 0, 0x555)).want(3, f(0, sx12(0x555))).by(prov));
        out.push(case("rd=x0", it(0, 1, 0x7FF)).set(1, 9).want(0, 0).by("x0 is hard-wired to zero"));
    }
    out.push(
        case("nop", Instr::Addi(IType { rd: r(0), rs1: r(0), imm12: 0 }))
            .set(5, 0xAAAA)
            .want(0, 0)
            .want(5, 0xAAAA)
            .by("canonical nop: only pc advances"),
    );
}

fn shift_imm_cases(out: &mut Vec<Case>) {
    let table: [AluRow<ShiftImm>; 3] = [
        (Instr::Slli, |a, s| a << s, "u32 <<"),
        (Instr::Srli, |a, s| a >> s, "u32 >>"),
        (Instr::Srai, |a, s| ((a as i32) >> s) as u32, "i32 >> (arithmetic)"),
    ];
    let pairs = [
        (0x8000_0001u32, 0u32),
        (0x8000_0001, 1),
        (0x8000_0000, 31),
        (0xFFFF_FFFF, 16),
        (0x1234_5678, 4),
        (0x7FFF_FFFF, 31),
    ];
    for (ctor, f, prov) in table {
        let sh = |rd, rs1, shamt| ctor(ShiftImm { rd: r(rd), rs1: r(rs1), shamt });
        for (a, s) in pairs {
            out.push(case(format!("{a:#x},shamt={s}"), sh(3, 1, s)).set(1, a).want(3, f(a, s)).by(prov));
        }
        out.push(case("rs1=x0", sh(3, 0, 5)).want(3, 0).by(prov));
        out.push(case("rd=x0", sh(0, 1, 3)).set(1, 0xF0).want(0, 0).by("x0 is hard-wired to zero"));
    }
}

fn upper_cases(out: &mut Vec<Case>) {
    let lui = |rd, imm20| Instr::Lui(UType { rd: r(rd), imm20 });
    for imm in [0u32, 1, 0x80000, 0xFFFFF, 0x12345] {
        out.push(
            case(format!("imm={imm:#x}"), lui(3, imm)).set(3, 0xFFFF_FFFF).want(3, imm << 12).by("u32 << 12"),
        );
    }
    out.push(case("rd=x0", lui(0, 0x12345)).want(0, 0).by("x0 is hard-wired to zero"));

    let auipc = |rd, imm20| Instr::Auipc(UType { rd: r(rd), imm20 });
    let prov = "u32::wrapping_add(pc, imm << 12)";
    for (pc, imm) in
        [(0x100u32, 0u32), (0x100, 1), (0xFFFF_F000, 1), (0x2000, 0xFFFFF), (0x8000_0000, 0x80000)]
    {
        out.push(
            case(format!("pc={pc:#x},imm={imm:#x}"), auipc(3, imm))
                .at(pc)
                .want(3, pc.wrapping_add(imm << 12))
                .by(prov),
        );
    }
    out.push(case("rd=x0", auipc(0, 1)).want(0, 0).by("x0 is hard-wired to zero"));
}

fn jump_cases(out: &mut Vec<Case>) {
    let jal = |rd, imm21| Instr::Jal(JType { rd: r(rd), imm21 });
    let prov = "u32::wrapping_add(pc, i32 sign-extended imm21); link = pc + 4";
    for (pc, imm) in [
        (0x1000u32, 8u32),
        (0x1000, 0x1F_FFFC),
        (0x100, 0),
        (0, 0x0F_FFFE),
        (0, 0x1F_FFFC),
        (0x10_0000, 0x10_0000),
    ] {
        out.push(
            case(format!("pc={pc:#x},imm={imm:#x}"), jal(1, imm))
                .at(pc)
                .want(1, pc.wrapping_add(4))
                .want_pc(pc.wrapping_add(sx21(imm)))
                .by(prov),
        );
    }
    out.push(case("rd=x0", jal(0, 8)).at(0x1000).want(0, 0).want_pc(0x1008).by(prov));
    out.push(case("link-wraps", jal(31, 8)).at(0xFFFF_FFFC).want(31, 0).want_pc(4).by(prov));

    let jalr = |rd, rs1, imm12| Instr::Jalr(IType { rd: r(rd), rs1: r(rs1), imm12 });
    let prov = "(u32::wrapping_add(x[rs1], sign-extended imm) & !1); link = pc + 4";
    let target = |x: u32, imm: u32| x.wrapping_add(sx12(imm)) & !1;
    out.push(
        case("example", jalr(1, 5, 4))
            .at(0x1000)
            .set(5, 0x2003)
            .want(1, 0x1004)
            .want_pc(target(0x2003, 4))
            .by(prov),
    );
    out.push(
        case("negative-offset", jalr(1, 2, 0xFFC))
            .set(2, 0x100)
            .want(1, 0x104)
            .want_pc(target(0x100, 0xFFC))
            .by(prov),
    );
    out.push(case("rs1=x0", jalr(1, 0, 0x7FF)).want(1, 0x104).want_pc(target(0, 0x7FF)).by(prov));
    out.push(case("rd=rs1", jalr(5, 5, 0)).set(5, 0x3000).want(5, 0x104).want_pc(0x3000).by(prov));
    out.push(
        case("target-wraps", jalr(1, 6, 2))
            .set(6, 0xFFFF_FFFF)
            .want(1, 0x104)
            .want_pc(target(0xFFFF_FFFF, 2))
            .by(prov),
    );
    out.push(case("rd=x0", jalr(0, 5, 0)).set(5, 0x400).want(0, 0).want_pc(0x400).by(prov));
    out.push(
        case("link-wraps", jalr(1, 5, 0)).at(0xFFFF_FFFC).set(5, 0x400).want(1, 0).want_pc(0x400).by(prov),
    );
}

fn branch_cases(out: &mut Vec<Case>) {
    type Cond = fn(u32, u32) -> bool;
    let table: [(Ctor<BType>, Cond); 6] = [
        (Instr::Beq, |a, b| a == b),
        (Instr::Bne, |a, b| a != b),
        (Instr::Blt, |a, b| (a as i32) < (b as i32)),
        (Instr::Bge, |a, b| (a as i32) >= (b as i32)),
        (Instr::Bltu, |a, b| a < b),
        (Instr::Bgeu, |a, b| a >= b),
    ];
    let prov = "native i32/u32 comparison; taken: u32::wrapping_add(pc, sign-extended imm13)";
    let rows = [
        (5u32, 5u32, 0x10u32, 0x100u32),
        (5, 6, 0x10, 0x100),
        (0xFFFF_FFFF, 0, 0x10, 0x100),
        (0, 0xFFFF_FFFF, 0x10, 0x100),
        (0x8000_0000, 0x7FFF_FFFF, 0x1FF0, 0x100),
        (7, 7, 0x1FF0, 0x8),
        (3, 7, 0x1FF0, 0x8),
    ];
    for (ctor, cond) in table {
        for (a, b, imm, pc) in rows {
            let taken = cond(a, b);
            let next = if taken { pc.wrapping_add(sx13(imm)) } else { pc.wrapping_add(4) };
            out.push(
                case(
                    format!("{a:#x},{b:#x},imm={imm:#x},{}", if taken { "taken" } else { "not-taken" }),
                    ctor(BType { rs1: r(1), rs2: r(2), imm13: imm }),
                )
                .at(pc)
                .set(1, a)
                .set(2, b)
                .want_pc(next)
                .by(prov),
            );
        }
        let taken = cond(0, 0);
        out.push(
            case("x0,x0", ctor(BType { rs1: r(0), rs2: r(0), imm13: 0x800 }))
                .want_pc(if taken { 0x100 + 0x800 } else { 0x104 })
                .by(prov),
        );
    }
}

const DATA: [u8; 8] = [0x80, 0x7F, 0xFF, 0x01, 0x34, 0x12, 0xCD, 0xAB];

fn load_cases(out: &mut Vec<Case>) {
    type LoadRow = (Ctor<IType>, u32, fn(u32) -> u32, &'static str);
    let table: [LoadRow; 5] = [
        (Instr::Lb, 1, |v| v as u8 as i8 as i32 as u32, "u32::from_le_bytes, i8 sign extension"),
        (Instr::Lh, 2, |v| v as u16 as i16 as i32 as u32, "u32::from_le_bytes, i16 sign extension"),
        (Instr::Lw, 4, |v| v, "u32::from_le_bytes"),
        (Instr::Lbu, 1, |v| v & 0xFF, "u32::from_le_bytes, zero extension"),
        (Instr::Lhu, 2, |v| v & 0xFFFF, "u32::from_le_bytes, zero extension"),
    ];
    let rows = [
        ("aligned", 0x2000u32, 0u32),
        ("misaligned", 0x2001, 0),
        ("negative-offset", 0x2010, 0xFF0),
        ("wraps-top", 0xFFFF_FFFE, 0),
        ("unmapped", 0x3000, 0),
        ("upper-half", 0x2006, 0),
    ];
    for (ctor, width, convert, prov) in table {
        for (label, base, imm) in rows {
            let c = case(label, ctor(IType { rd: r(3), rs1: r(1), imm12: imm }))
                .set(1, base)
                .set(3, 0x5555_5555)
                .bytes(0x2000, &DATA)
                .bytes(0xFFFF_FFFE, &[0xEF, 0xBE, 0xAD, 0xDE]);
            let ea = base.wrapping_add(sx12(imm));
            let mut raw = [0u8; 4];
            for (j, slot) in raw.iter_mut().enumerate().take(width as usize) {
                *slot = c.byte(ea.wrapping_add(j as u32));
            }
            let value = convert(u32::from_le_bytes(raw));
            out.push(c.want(3, value).by(prov));
        }
        out.push(
            case("rd=x0", ctor(IType { rd: r(0), rs1: r(1), imm12: 0 }))
                .set(1, 0x2000)
                .bytes(0x2000, &DATA)
                .want(0, 0)
                .by("x0 is hard-wired to zero"),
        );
    }
}

fn store_cases(out: &mut Vec<Case>) {
    let table: [(Ctor<SType>, usize); 3] = [(Instr::Sb, 1), (Instr::Sh, 2), (Instr::Sw, 4)];
    let prov = "u32::to_le_bytes truncated to width at u32::wrapping_add(x[rs1], sign-extended imm)";
    let rows = [
        ("aligned", 0x2000u32, 0u32, 0xDEAD_BEEFu32),
        ("misaligned", 0x2001, 0, 0x1234_5678),
        ("negative-offset", 0x2010, 0xFF0, 0xCAFE_F00D),
        ("wraps-top", 0xFFFF_FFFE, 0, 0xA1B2_C3D4),
        ("overwrite", 0x2004, 0x7FF, 0x0102_0304),
    ];
    for (ctor, width) in table {
        for (label, base, imm, v) in rows {
            let ea = base.wrapping_add(sx12(imm));
            out.push(
                case(label, ctor(SType { rs1: r(1), rs2: r(2), imm12: imm }))
                    .set(1, base)
                    .set(2, v)
                    .bytes(0x2000, &[0xEE; 8])
                    .bytes(0x2803, &[0x77; 4])
                    .want_mem(ea, &v.to_le_bytes()[..width])
                    .by(prov),
            );
        }
        out.push(
            case("rs2=x0", ctor(SType { rs1: r(1), rs2: r(0), imm12: 0 }))
                .set(1, 0x2000)
                .bytes(0x2000, &[0xEE; 8])
                .want_mem(0x2000, &[0; 4][..width])
                .by("x0 reads as zero"),
        );
    }
}

fn fence_cases(out: &mut Vec<Case>) {
    let prov = "fences only advance the pc";
    for (fm, pred, succ, rd, rs1) in
        [(0, 0xF, 0xF, 0, 0), (8, 3, 3, 0, 0), (0, 1, 2, 0, 0), (0, 0xF, 0xF, 5, 6), (0, 0, 0, 0, 0)]
    {
        let f = FenceFields { fm, pred, succ, rd: r(rd), rs1: r(rs1) };
        out.push(
            case(format!("fm={fm},pred={pred:#x},succ={succ:#x},rd={rd},rs1={rs1}"), Instr::Fence(f))
                .set(5, 0x55)
                .set(6, 0x66)
                .want(5, 0x55)
                .by(prov),
        );
    }
    out.push(
        case("pc-wraps", Instr::Fence(FenceFields { fm: 0, pred: 0xF, succ: 0xF, rd: r(0), rs1: r(0) }))
            .at(0xFFFF_FFFC)
            .want_pc(0)
            .by(prov),
    );

    for (rd, rs1, imm12) in [(0, 0, 0), (1, 2, 0), (0, 0, 0xFFF), (31, 31, 0x123), (3, 0, 0x800)] {
        out.push(
            case(
                format!("rd={rd},rs1={rs1},imm={imm12:#x}"),
                Instr::FenceI(IType { rd: r(rd), rs1: r(rs1), imm12 }),
            )
            .set(2, 0x22)
            .set(31, 0x3131)
            .want(1, 0)
            .want(31, 0x3131)
            .by(prov),
        );
    }
    out.push(
        case("pc-wraps", Instr::FenceI(IType { rd: r(0), rs1: r(0), imm12: 0 }))
            .at(0xFFFF_FFFC)
            .want_pc(0)
            .by(prov),
    );
}

fn system_cases(out: &mut Vec<Case>) {
    for (instr, kind) in [(Instr::Ecall, HostEventKind::ECall), (Instr::Ebreak, HostEventKind::EBreak)] {
        let prov = "halt with one event at the unchanged pc";
        for pc in [0u32, 0x100, 0xFFFF_FFFC] {
            out.push(case(format!("pc={pc:#x}"), instr).at(pc).want_pc(pc).want_event(kind).by(prov));
        }
        out.push(
            case("after-earlier-event", instr)
                .traced(HostEventKind::EBreak, 0x40)
                .want_pc(0x100)
                .want_event(kind)
                .by(prov),
        );
        out.push(
            case("regs-preserved", instr)
                .set(10, 93)
                .set(17, 0xFFFF_FFFF)
                .want(10, 93)
                .want(17, 0xFFFF_FFFF)
                .want_pc(0x100)
                .want_event(kind)
                .by(prov),
        );
        out.push(case("halted", instr).halted().traced(kind, 0x100).by("halted state is a fixed point"));
    }
}

fn csr_cases(out: &mut Vec<Case>) {
    let creg = |rd, rs1, csr| CsrReg { rd: r(rd), rs1: r(rs1), csr };
    let cimm = |rd, zimm, csr| CsrImm { rd: r(rd), zimm, csr };
    let rw = "rd = old; csr = source";
    let set = "rd = old; csr = old | mask (no write when the source is x0 or zimm 0)";
    let clear = "rd = old; csr = old & !mask (no write when the source is x0 or zimm 0)";

    out.push(
        case("empty", Instr::Csrrw(creg(1, 5, 0x305))).set(5, 0x42).want(1, 0).want_csr(0x305, 0x42).by(rw),
    );
    out.push(
        case("existing", Instr::Csrrw(creg(2, 5, 0x300)))
            .csr(0x300, 0x1234)
            .set(5, 0xFFFF_FFFF)
            .want(2, 0x1234)
            .want_csr(0x300, 0xFFFF_FFFF)
            .by(rw),
    );
    out.push(
        case("rd=x0", Instr::Csrrw(creg(0, 5, 0x340)))
            .csr(0x340, 7)
            .set(5, 9)
            .want(0, 0)
            .want_csr(0x340, 9)
            .by(rw),
    );
    out.push(
        case("rs1=x0", Instr::Csrrw(creg(3, 0, 0x341))).csr(0x341, 7).want(3, 7).want_csr(0x341, 0).by(rw),
    );
    out.push(
        case("csr=0xfff", Instr::Csrrw(creg(3, 4, 0xFFF))).set(4, 1).want(3, 0).want_csr(0xFFF, 1).by(rw),
    );
    out.push(
        case("swap", Instr::Csrrw(creg(5, 5, 0x305)))
            .csr(0x305, 0xAAAA)
            .set(5, 0x5555)
            .want(5, 0xAAAA)
            .want_csr(0x305, 0x5555)
            .by(rw),
    );

    let or = |old: u32, m: u32| old | m;
    let andn = |old: u32, m: u32| old & !m;
    for (ctor, f, prov) in
        [(Instr::Csrrs as fn(CsrReg) -> Instr, or as Native, set), (Instr::Csrrc, andn, clear)]
    {
        out.push(
            case("mask", ctor(creg(1, 2, 0x300)))
                .csr(0x300, 0x0F0F)
                .set(2, 0x00FF)
                .want(1, 0x0F0F)
                .want_csr(0x300, f(0x0F0F, 0x00FF))
                .by(prov),
        );
        out.push(
            case("rs1=x0-reads-only", ctor(creg(1, 0, 0x300)))
                .csr(0x300, 0x0F0F)
                .want(1, 0x0F0F)
                .want_csr(0x300, 0x0F0F)
                .by(prov),
        );
        out.push(
            case("all-ones", ctor(creg(3, 2, 0x301)))
                .csr(0x301, 0x1234_5678)
                .set(2, 0xFFFF_FFFF)
                .want(3, 0x1234_5678)
                .want_csr(0x301, f(0x1234_5678, 0xFFFF_FFFF))
                .by(prov),
        );
        out.push(
            case("rd=x0", ctor(creg(0, 2, 0x302)))
                .csr(0x302, 0x10)
                .set(2, 0x01)
                .want(0, 0)
                .want_csr(0x302, f(0x10, 0x01))
                .by(prov),
        );
        out.push(
            case("absent-csr", ctor(creg(4, 2, 0x000)))
                .set(2, 0x8000_0000)
                .want(4, 0)
                .want_csr(0x000, f(0, 0x8000_0000))
                .by(prov),
        );
    }

    out.push(
        case("zimm=0", Instr::Csrrwi(cimm(1, 0, 0x305))).csr(0x305, 5).want(1, 5).want_csr(0x305, 0).by(rw),
    );
    out.push(case("zimm=31", Instr::Csrrwi(cimm(1, 31, 0x305))).want(1, 0).want_csr(0x305, 31).by(rw));
    out.push(
        case("rd=x0", Instr::Csrrwi(cimm(0, 3, 0x305))).csr(0x305, 9).want(0, 0).want_csr(0x305, 3).by(rw),
    );
    out.push(
        case("csr=0xfff", Instr::Csrrwi(cimm(2, 17, 0xFFF)))
            .csr(0xFFF, 1)
            .want(2, 1)
            .want_csr(0xFFF, 17)
            .by(rw),
    );
    out.push(
        case("same-value", Instr::Csrrwi(cimm(2, 4, 0x310)))
            .csr(0x310, 4)
            .want(2, 4)
            .want_csr(0x310, 4)
            .by(rw),
    );

    for (ctor, f, prov) in
        [(Instr::Csrrsi as fn(CsrImm) -> Instr, or as Native, set), (Instr::Csrrci, andn, clear)]
    {
        for (label, rd, zimm, old) in [
            ("zimm=0-reads-only", 1u8, 0u32, 0xFFu32),
            ("zimm=31", 1, 31, 0xF0F0),
            ("zimm=1", 2, 1, 0x3),
            ("rd=x0", 0, 5, 0x7),
            ("absent-csr", 3, 16, 0),
        ] {
            let csr = 0x344;
            let c = case(label, ctor(cimm(rd, zimm, csr)));
            let c = if old != 0 { c.csr(csr, old) } else { c };
            out.push(
                c.want(rd, if rd == 0 { 0 } else { old })
                    .want_csr(csr, if zimm == 0 { old } else { f(old, zimm) })
                    .by(prov),
            );
        }
    }
}

fn absorption_cases(out: &mut Vec<Case>) {
    let prov = "halted state is a fixed point";
    out.push(
        case("halted", Instr::Add(RType { rd: r(3), rs1: r(1), rs2: r(2) }))
            .set(1, 1)
            .set(2, 2)
            .halted()
            .by(prov),
    );
    out.push(
        case("halted", Instr::Sw(SType { rs1: r(1), rs2: r(2), imm12: 0 }))
            .set(1, 0x2000)
            .set(2, 5)
            .halted()
            .by(prov),
    );
    out.push(
        case("halted", Instr::Csrrw(CsrReg { rd: r(1), rs1: r(2), csr: 0x305 })).set(2, 5).halted().by(prov),
    );
    out.push(
        case("halted", Instr::Jalr(IType { rd: r(1), rs1: r(5), imm12: 4 })).set(5, 0x2000).halted().by(prov),
    );
}

/// The full directed corpus: boundary operands, x0 as source and
/// destination, taken and fall-through branches, aligned, misaligned and
/// wrapping memory access, for every instruction in the roster.
pub fn directed_corpus() -> Vec<CorpusCase> {
    let mut cases = Vec::new();
    reg_reg_cases(&mut cases);
    reg_imm_cases(&mut cases);
    shift_imm_cases(&mut cases);
    upper_cases(&mut cases);
    jump_cases(&mut cases);
    branch_cases(&mut cases);
    load_cases(&mut cases);
    store_cases(&mut cases);
    fence_cases(&mut cases);
    system_cases(&mut cases);
    csr_cases(&mut cases);
    absorption_cases(&mut cases);
    cases.into_iter().map(Case::build).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_extension_helpers() {
        assert_eq!(sx12(0x800), 0xFFFF_F800);
        assert_eq!(sx12(0x7FF), 0x7FF);
        assert_eq!(sx13(0x1FF0), (-16i32) as u32);
        assert_eq!(sx21(0x1F_FFFC), (-4i32) as u32);
    }

    #[test]
    fn corpus_shape() {
        let corpus = directed_corpus();
        assert!(corpus.len() >= 265, "{}", corpus.len());
        let mut counts = BTreeMap::new();
        for c in &corpus {
            *counts.entry(c.instr.mnemonic()).or_insert(0usize) += 1;
            assert!(!c.provenance.is_empty(), "{} has no provenance", c.name);
        }
        for m in Mnemonic::ALL {
            assert!(counts.get(&m).copied().unwrap_or(0) >= 5, "{m}: {:?}", counts.get(&m));
        }
        let mut names: Vec<_> = corpus.iter().map(|c| &c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), corpus.len(), "case names are unique");
    }

    #[test]
    fn corpus_contains_landmark_cases() {
        let corpus = directed_corpus();
        let jalr = corpus.iter().find(|c| c.name == "jalr/example").unwrap();
        assert_eq!(jalr.pre.pc, Word::new(0x1000));
        assert_eq!(jalr.pre.reg(r(5)), Word::new(0x2003));
        assert_eq!(jalr.expect.pc, Word::new(0x2006));
        assert_eq!(jalr.expect.regs, vec![(r(1), Word::new(0x1004))]);

        let nop = corpus.iter().find(|c| c.name == "addi/nop").unwrap();
        assert_eq!(encode(&nop.instr), 0x0000_0013);
    }

    #[test]
    fn every_case_passes() {
        let summary = run_corpus();
        if let Some(r) = summary.results.iter().find(|r| !r.passed()) {
            panic!("{}: {:?} {:?}", r.name, r.failures, r.violations);
        }
    }
}
