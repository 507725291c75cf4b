use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rv32i::harness::{
    fuzz_one, read_image_bytes, run_corpus, run_program, InputFormat, ProgramImage, RunReport,
};
use rv32i::Word;

/// RV32I interpreter with per-step specification checking.
#[derive(Parser)]
#[command(name = "rv32i", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute an image and print the final report.
    Run {
        file: PathBuf,
        /// Load address (hex).
        #[arg(long, value_parser = parse_hex, default_value = "0")]
        base: u32,
        /// Entry pc (hex). Defaults to the load address.
        #[arg(long, value_parser = parse_hex)]
        entry: Option<u32>,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
        /// Check every step against its specification.
        #[arg(long)]
        check_specs: bool,
        #[arg(long)]
        json: bool,
        /// auto, raw or hex.
        #[arg(long, default_value = "auto")]
        format: InputFormat,
    },
    /// Run the directed instruction corpus.
    Corpus {
        #[arg(long)]
        json: bool,
    },
    /// Run one fuzz input: the file's bytes at address 0, 1000 steps, specs on.
    FuzzOne {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn parse_hex(s: &str) -> Result<u32, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|e| format!("{s:?}: {e}"))
}

fn print_report(report: &RunReport, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    if report.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("rv32i: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, base, entry, fuel, check_specs, json, format } => {
            let data = match std::fs::read(&file) {
                Ok(d) => d,
                Err(e) => return usage_error(format!("{}: {e}", file.display())),
            };
            let bytes = match read_image_bytes(&data, format) {
                Ok(b) => b,
                Err(e) => return usage_error(format!("{}: {e}", file.display())),
            };
            let img = ProgramImage { base: Word::new(base), bytes, entry: Word::new(entry.unwrap_or(base)) };
            match run_program(&img, fuel, check_specs) {
                Ok(report) => print_report(&report, json),
                Err(e) => usage_error(e),
            }
        }
        Command::Corpus { json } => {
            let summary = run_corpus();
            if json {
                let failed: Vec<_> = summary
                    .results
                    .iter()
                    .filter(|r| !r.passed())
                    .map(|r| {
                        serde_json::json!({
                            "name": r.name,
                            "failures": r.failures,
                            "violations": r.violations,
                        })
                    })
                    .collect();
                let doc = serde_json::json!({
                    "total": summary.total(),
                    "passed": summary.passed(),
                    "failed": failed,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("summary serializes"));
            } else {
                for r in summary.results.iter().filter(|r| !r.passed()) {
                    println!("FAIL {}", r.name);
                    for f in &r.failures {
                        println!("  {f}");
                    }
                    for v in &r.violations {
                        println!("  {}: expected {} observed {}", v.component, v.expected, v.observed);
                    }
                }
                println!(
                    "{} / {} cases passed across {} instructions",
                    summary.passed(),
                    summary.total(),
                    summary.per_mnemonic().len()
                );
            }
            if summary.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::FuzzOne { file, json } => match std::fs::read(&file) {
            Ok(data) => print_report(&fuzz_one(&data), json),
            Err(e) => usage_error(format!("{}: {e}", file.display())),
        },
    }
}
