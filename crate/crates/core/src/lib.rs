//! A pure RV32I interpreter paired with executable specifications.
//!
//! The crate is split into a deterministic core and a thin host layer:
//!
//! - [`bitops`]: word folding and sign extension over wide integers.
//! - [`machine`]: the architectural state record and its accessors.
//! - [`isa`]: the 47-instruction roster, decoder and encoder.
//! - [`exec`]: instruction handlers, `step`, and the fuel-bounded `run`.
//! - [`speccheck`]: per-instruction postcondition oracles, frame checks
//!   against declared footprints, and the global step invariants.
//! - [`harness`]: image loading, reports, the directed corpus and the fuzz
//!   entry point.

pub mod bitops;
pub mod exec;
pub mod harness;
pub mod isa;
pub mod machine;
pub mod speccheck;

pub use bitops::Word;
pub use exec::{run, step};
pub use isa::{decode, encode, DecodeResult, Instr, Mnemonic};
pub use machine::{MachineState, RegIdx};
