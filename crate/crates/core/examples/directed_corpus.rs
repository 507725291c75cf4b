// Run the directed instruction corpus and summarize it per instruction.

use rv32i::harness::{directed_corpus, run_corpus};

fn main() {
    let corpus = directed_corpus();
    for case in corpus.iter().filter(|c| c.name.starts_with("jalr/")).take(3) {
        println!(
            "{:<24} {:<28} expected pc {}  ({})",
            case.name,
            case.instr.to_string(),
            case.expect.pc,
            case.provenance
        );
    }

    let summary = run_corpus();
    for (m, count) in summary.per_mnemonic() {
        print!("{m}:{count} ");
    }
    println!();
    println!("{} / {} cases pass", summary.passed(), summary.total());
    assert!(summary.all_passed());
}
