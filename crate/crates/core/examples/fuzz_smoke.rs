// Feed pseudo-random 64-byte images to the fuzz entry point, as an external
// fuzzer would, and tally how the runs ended.

use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};
use rv32i::harness::{fuzz_one, ExitReason};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut halted, mut bounded, mut steps) = (0, 0, 0);
    let mut image = [0u8; 64];
    for _ in 0..20_000 {
        rng.fill(&mut image[..]);
        let report = fuzz_one(&image);
        assert!(report.is_clean(), "{:?}", report.violations);
        match report.exit_reason {
            ExitReason::Halted => halted += 1,
            ExitReason::FuelExhausted => bounded += 1,
        }
        steps += report.steps;
    }
    println!("halted {halted}, hit the step bound {bounded}, {steps} checked steps, no violations");
}
