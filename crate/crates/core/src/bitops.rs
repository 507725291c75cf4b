//! Word-level arithmetic helpers.
//!
//! Every helper takes a wide signed integer (`i128`, standing in for an
//! unbounded integer: no RV32I intermediate comes anywhere near its range)
//! and folds back into range at the boundary. Negative inputs use
//! mathematical modulo, so results are never negative.

use std::fmt;

/// Architectural register width in bits.
pub const XLEN: u32 = 32;

/// A 32-bit architectural value. The range invariant `0 <= value < 2^32`
/// holds by construction.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(u32);

impl Word {
    pub const ZERO: Word = Word(0);
    pub const MAX: Word = Word(u32::MAX);

    pub const fn new(value: u32) -> Self {
        Word(value)
    }

    pub const fn get(self) -> u32 {
        self.0
    }

    /// The value as an unbounded integer.
    pub const fn to_int(self) -> i128 {
        self.0 as i128
    }
}

impl From<u32> for Word {
    fn from(value: u32) -> Self {
        Word(value)
    }
}

impl From<Word> for u32 {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::LowerHex for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// `z mod 2^k`, always in `[0, 2^k)`.
///
/// `k` must be in `1..=126` so that `2^k` is representable.
pub fn low_bits(k: u32, z: i128) -> i128 {
    assert!((1..=126).contains(&k), "low_bits: width {k} out of range");
    z.rem_euclid(1i128 << k)
}

/// Reinterprets the low `k` bits of `z` as a `k`-bit two's-complement value.
/// The result lies in `[-2^(k-1), 2^(k-1))`.
pub fn sext_from(k: u32, z: i128) -> i128 {
    let m = low_bits(k, z);
    if m < (1i128 << (k - 1)) {
        m
    } else {
        m - (1i128 << k)
    }
}

/// The XLEN-bit value fold.
pub fn low_xlen(z: i128) -> Word {
    Word(low_bits(XLEN, z) as u32)
}

/// Address fold modulo `2^32`.
pub fn addr_mod(z: i128) -> Word {
    low_xlen(z)
}

/// Folds `z` modulo `2^32` and clears bit 0.
pub fn jalr_target(z: i128) -> Word {
    let folded = low_bits(XLEN, z);
    Word((folded - folded % 2) as u32)
}

pub fn to_signed32(w: Word) -> i128 {
    sext_from(XLEN, w.to_int())
}
