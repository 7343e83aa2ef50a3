//! Finite blocks of symbols in ℤ/p.

use alloc::vec::Vec;
use core::fmt;

use crate::modulus::PrimeModulus;

/// A finite string of residues, compared lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Block(Vec<u16>);

impl Block {
    pub fn new(symbols: Vec<u16>) -> Self {
        Block(symbols)
    }

    pub fn zeros(len: usize) -> Self {
        Block(alloc::vec![0; len])
    }

    /// Parses a digit string such as `"0110"` (symbols below 10 only).
    pub fn parse(s: &str) -> Option<Self> {
        s.chars().map(|c| c.to_digit(10).map(|d| d as u16)).collect::<Option<Vec<_>>>().map(Block)
    }

    /// A ℤ/2 block of length `len` whose symbol i is bit i of `mask`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Block((0..len).map(|i| ((mask >> i) & 1) as u16).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }

    pub fn prefix(&self, k: usize) -> Block {
        Block(self.0[..k].to_vec())
    }

    /// `c·b` symbolwise in ℤ/p.
    pub fn scale(&self, c: u32, m: PrimeModulus) -> Block {
        Block(self.0.iter().map(|&s| m.mul(s as u32, c) as u16).collect())
    }
}

impl From<Vec<u16>> for Block {
    fn from(v: Vec<u16>) -> Self {
        Block(v)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let commas = self.0.iter().any(|&s| s >= 10);
        for (i, s) in self.0.iter().enumerate() {
            if commas && i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block({self})")
    }
}
