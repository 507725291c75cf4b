//! Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails. A criterion that overruns its time budget
//! fails too.

mod common;

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::RngExt;

use rv32i::bitops::{jalr_target, sext_from};
use rv32i::exec::illegal_instruction;
use rv32i::harness::{fuzz_one, run_corpus, ExitReason, FUZZ_FUEL};
use rv32i::isa::{is_csr, is_memory_write, IType};
use rv32i::speccheck::{
    check_frame, check_global, check_global_illegal, check_step, footprint_of, illegal_footprint,
    mutations_outside,
};
use rv32i::{decode, encode, step, DecodeResult, Instr, Mnemonic, RegIdx, Word};

type Criterion = fn() -> Result<String, String>;

fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::from_seed(proptest::test_runner::RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

fn big(v: u32) -> BigInt {
    BigInt::from(v)
}

fn two32() -> BigInt {
    BigInt::from(1u64 << 32)
}

fn modulo(z: BigInt, m: &BigInt) -> BigInt {
    ((z % m) + m) % m
}

fn sext12_oracle(v: u32) -> BigInt {
    if v >= 2048 {
        BigInt::from(v) - 4096
    } else {
        BigInt::from(v)
    }
}

fn instruction_coverage() -> Result<String, String> {
    let summary = run_corpus();
    let counts = summary.per_mnemonic();
    let fewest = Mnemonic::ALL.iter().map(|m| counts.get(m).copied().unwrap_or(0)).min().unwrap_or(0);
    let detail = format!(
        "{}/{} corpus cases pass, {} instructions, at least {fewest} cases each",
        summary.passed(),
        summary.total(),
        counts.len()
    );
    if let Some(bad) = summary.results.iter().find(|r| !r.passed()) {
        return Err(format!("{detail}; first failure {}: {:?} {:?}", bad.name, bad.failures, bad.violations));
    }
    if summary.total() < 265 || counts.len() != 47 || fewest < 5 {
        return Err(detail);
    }
    Ok(detail)
}

fn jalr_fidelity() -> Result<String, String> {
    let strategy = (common::arb_state(0.0), 0u8..32, 0u8..32, 0u32..4096);
    runner(100_000, 2)
        .run(&strategy, |(pre, rd, rs1, off)| {
            let (rd, rs1) = (RegIdx::new(rd).unwrap(), RegIdx::new(rs1).unwrap());
            let i = Instr::Jalr(IType { rd, rs1, imm12: off });
            let post = step(&pre, &i);

            let m = two32();
            let link = modulo(big(pre.pc.get()) + 4, &m);
            let folded = modulo(big(pre.reg(rs1).get()) + sext12_oracle(off), &m);
            let target = &folded - (&folded % 2);

            let want_rd = if rd.is_zero() { BigInt::from(0) } else { link };
            prop_assert_eq!(big(post.reg(rd).get()), want_rd, "link");
            prop_assert_eq!(big(post.pc.get()), target, "target");
            prop_assert_eq!(post.pc.get() & 1, 0, "pc lsb");
            for k in 0..32 {
                if k != rd.index() {
                    prop_assert_eq!(post.regs[k], pre.regs[k], "x{} outside the frame", k);
                }
            }
            prop_assert!(post.mem == pre.mem && post.csrs == pre.csrs);
            prop_assert!(post.halt == pre.halt && post.trace == pre.trace && post.mode == pre.mode);
            let verdict = check_step(&pre, &i, &post);
            prop_assert!(verdict.passed(), "{:?}", verdict);
            Ok(())
        })
        .map(|_| "100000 random (state, rd, rs1, off): link, target, pc lsb and frame hold".to_string())
        .map_err(|e| e.to_string())
}

fn global_invariants() -> Result<String, String> {
    let hits = RefCell::new(BTreeMap::<Mnemonic, u32>::new());
    runner(100_000, 3)
        .run(&common::arb_pair(0.1), |(pre, i)| {
            *hits.borrow_mut().entry(i.mnemonic()).or_insert(0) += 1;
            let post = step(&pre, &i);
            prop_assert_eq!(post.regs.len(), 32);
            prop_assert_eq!(post.regs[0], Word::ZERO);
            prop_assert!((0..1i128 << 32).contains(&post.pc.to_int()));
            if !is_csr(&i) {
                prop_assert!(post.csrs == pre.csrs, "csr frame");
            }
            if !is_memory_write(&i) {
                prop_assert!(post.mem == pre.mem, "memory frame");
            }
            if pre.halt {
                prop_assert!(post == pre, "halt absorption");
            }
            let verdict = check_step(&pre, &i, &post);
            prop_assert!(verdict.passed(), "{:?}", verdict);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let hits = hits.into_inner();
    if hits.len() != 47 {
        return Err(format!("only {} variants exercised", hits.len()));
    }
    let fewest = hits.values().min().copied().unwrap_or(0);
    Ok(format!("100000 random (state, instr) pairs over all 47 variants (at least {fewest} each)"))
}

fn bitops_exhaustive() -> Result<String, String> {
    for v in 0u32..4096 {
        let got = sext_from(12, v as i128);
        if BigInt::from(got) != sext12_oracle(v) {
            return Err(format!("sext_from(12, {v}) = {got}"));
        }
    }
    for z in 0i128..1 << 17 {
        let t = jalr_target(z);
        if !t.get().is_multiple_of(2) || t.to_int() != z - z % 2 {
            return Err(format!("jalr_target({z}) = {t}"));
        }
    }
    let mut r = common::rng(4);
    let m = two32();
    for _ in 0..100_000 {
        let z: i128 = r.random::<i128>() >> r.random_range(0..100u32);
        let t = jalr_target(z);
        let folded = modulo(BigInt::from(z), &m);
        let want = &folded - (&folded % 2);
        if !t.get().is_multiple_of(2) || big(t.get()) != want {
            return Err(format!("jalr_target({z}) = {t}, oracle {want}"));
        }
    }
    Ok("sext_from(12, .) on all 4096 inputs; jalr_target on [0, 2^17) and 100000 wide inputs".into())
}

fn decoder_round_trip() -> Result<String, String> {
    for m in Mnemonic::ALL {
        runner(1000, 5)
            .run(&common::arb_instr_of(m), |i| {
                prop_assert!(i.is_well_formed());
                prop_assert_eq!(decode(encode(&i)), DecodeResult::Valid(i));
                Ok(())
            })
            .map_err(|e| format!("{m}: {e}"))?;
    }
    let mut r = common::rng(5);
    let mut valid = 0u32;
    for k in 0..1_000_000u32 {
        let w = match k {
            0 => 0,
            1 => u32::MAX,
            _ => r.random(),
        };
        if let DecodeResult::Valid(i) = decode(w) {
            valid += 1;
            if !i.is_well_formed() || encode(&i) != w {
                return Err(format!("{w:#010x} decodes to {i:?}, which does not re-encode"));
            }
        }
    }
    Ok(format!("1000 operand sets for each of 47 variants; 1000000 random words decoded ({valid} valid)"))
}

fn mutation_sensitivity() -> Result<String, String> {
    let mut r = common::rng(6);
    let mut total = 0usize;
    let flagged = |v: &rv32i::speccheck::SpecVerdict, name: &str| v.flags(name);
    for m in Mnemonic::ALL {
        for _ in 0..200 {
            let (pre, i) = common::random_pair(&mut r, m);
            let post = step(&pre, &i);
            let fp = footprint_of(&i, &pre);
            if !check_frame(&pre, &post, &fp).passed() {
                return Err(format!("{m}: unmutated post-state rejected"));
            }
            for mu in mutations_outside(&pre, &post, &fp) {
                total += 1;
                let frame = check_frame(&pre, &mu.state, &fp);
                let global = check_global(&pre, &i, &mu.state);
                if !flagged(&frame, &mu.component) && !flagged(&global, &mu.component) {
                    return Err(format!(
                        "{m}: perturbed {} not reported ({frame:?} {global:?})",
                        mu.component
                    ));
                }
            }
        }
    }
    for _ in 0..200 {
        let (mut pre, _) = common::random_pair(&mut r, Mnemonic::Addi);
        pre.halt = false;
        let post = illegal_instruction(&pre);
        let fp = illegal_footprint();
        for mu in mutations_outside(&pre, &post, &fp) {
            total += 1;
            let frame = check_frame(&pre, &mu.state, &fp);
            let global = check_global_illegal(&pre, &mu.state);
            if !flagged(&frame, &mu.component) && !flagged(&global, &mu.component) {
                return Err(format!("illegal: perturbed {} not reported", mu.component));
            }
        }
    }
    Ok(format!("{total} single-component perturbations over 47 variants and illegal fetches, all named"))
}

fn fuzz_smoke() -> Result<String, String> {
    const INPUTS: u64 = 1_000_000;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let per = INPUTS.div_ceil(threads);
    let results: Vec<Result<[u64; 3], String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    let mut r = common::rng(7_000 + t);
                    let mut tally = [0u64; 3];
                    let mut bytes = [0u8; 64];
                    for k in (t * per)..((t + 1) * per).min(INPUTS) {
                        if k % 2 == 0 {
                            r.fill(&mut bytes[..]);
                        } else {
                            // a stream of valid instructions runs much deeper
                            for chunk in bytes.chunks_exact_mut(4) {
                                let m = Mnemonic::ALL[r.random_range(0..47)];
                                chunk.copy_from_slice(
                                    &encode(&Instr::synthesize(m, r.random())).to_le_bytes(),
                                );
                            }
                        }
                        let report = catch_unwind(AssertUnwindSafe(|| fuzz_one(&bytes)))
                            .map_err(|_| format!("abort on input {bytes:02x?}"))?;
                        if report.steps > FUZZ_FUEL {
                            return Err(format!("{} steps on input {bytes:02x?}", report.steps));
                        }
                        if !report.violations.is_empty() {
                            return Err(format!("violations {:?} on input {bytes:02x?}", report.violations));
                        }
                        match report.exit_reason {
                            ExitReason::Halted => tally[0] += 1,
                            ExitReason::FuelExhausted => tally[1] += 1,
                        }
                        tally[2] += report.steps;
                    }
                    Ok(tally)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err("worker died".into()))).collect()
    });
    let mut sum = [0u64; 3];
    for res in results {
        let t = res?;
        for k in 0..3 {
            sum[k] += t[k];
        }
    }
    if sum[0] + sum[1] != INPUTS {
        return Err(format!("{} of {INPUTS} inputs ran", sum[0] + sum[1]));
    }
    Ok(format!(
        "{INPUTS} random 64-byte images (half raw bytes, half valid instruction streams): 0 aborts, 0 violations, {} halted, {} stopped at the 1000-step bound, {} steps checked",
        sum[0], sum[1], sum[2]
    ))
}

fn main() {
    let criteria: [(u32, &str, u64, Criterion); 7] = [
        (1, "instruction coverage", 10, instruction_coverage),
        (2, "JALR fidelity", 30, jalr_fidelity),
        (3, "global step invariants", 60, global_invariants),
        (4, "bitops exhaustive oracles", 5, bitops_exhaustive),
        (5, "decoder round trip", 30, decoder_round_trip),
        (6, "mutation sensitivity", 60, mutation_sensitivity),
        (7, "fuzz smoke", 600, fuzz_smoke),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= Duration::from_secs(budget) => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget}s budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {n} {}: {name}: {detail} [{:.2}s of {budget}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
