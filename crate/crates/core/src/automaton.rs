//! The automaton A_p(I; T): row r is `I·T^r` over ℤ/p on a zero background.

use alloc::vec::Vec;
use core::fmt;

use crate::block::Block;
use crate::modulus::{ModulusError, PrimeModulus};
use crate::poly::{GfpPoly, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecError {
    Modulus(ModulusError),
    Rule(ParseError),
    Initial(ParseError),
    ZeroRule,
    ZeroInitial,
    ModulusMismatch,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Modulus(e) => write!(f, "{e}"),
            SpecError::Rule(e) => write!(f, "rule: {e}"),
            SpecError::Initial(e) => write!(f, "initial state: {e}"),
            SpecError::ZeroRule => write!(f, "rule must be nonzero"),
            SpecError::ZeroInitial => write!(f, "initial state must be nonzero"),
            SpecError::ModulusMismatch => write!(f, "rule and initial state use different moduli"),
        }
    }
}

impl core::error::Error for SpecError {}

/// Rule T and initial state I over a common ℤ/p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutomatonSpec {
    rule: GfpPoly,
    initial: GfpPoly,
}

impl AutomatonSpec {
    pub fn new(rule: GfpPoly, initial: GfpPoly) -> Result<Self, SpecError> {
        if rule.modulus() != initial.modulus() {
            return Err(SpecError::ModulusMismatch);
        }
        if rule.is_zero() {
            return Err(SpecError::ZeroRule);
        }
        if initial.is_zero() {
            return Err(SpecError::ZeroInitial);
        }
        Ok(AutomatonSpec { rule, initial })
    }

    /// `A_p(1; T)`.
    pub fn with_unit_initial(rule: GfpPoly) -> Result<Self, SpecError> {
        let one = GfpPoly::one(rule.modulus());
        Self::new(rule, one)
    }

    /// Parses rule and initial state from the text encoding.
    pub fn parse(p: u64, rule: &str, initial: &str) -> Result<Self, SpecError> {
        let m = PrimeModulus::new(p).map_err(SpecError::Modulus)?;
        let rule = GfpPoly::parse(m, rule).map_err(SpecError::Rule)?;
        let initial = GfpPoly::parse(m, initial).map_err(SpecError::Initial)?;
        Self::new(rule, initial)
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.rule.modulus()
    }

    pub fn rule(&self) -> &GfpPoly {
        &self.rule
    }

    pub fn initial(&self) -> &GfpPoly {
        &self.initial
    }

    /// Degree n of the rule.
    pub fn degree(&self) -> usize {
        self.rule.len() - 1
    }

    /// A rule with at least two nonzero coefficients.
    pub fn is_nontrivial(&self) -> bool {
        self.rule.weight() >= 2
    }

    pub fn has_constant_initial(&self) -> bool {
        self.initial.len() == 1
    }

    /// The same initial state under the rule `T^e`.
    pub fn rule_power(&self, e: u64) -> AutomatonSpec {
        AutomatonSpec { rule: self.rule.pow(e), initial: self.initial.clone() }
    }

    /// Successive rows 0, 1, 2, … by repeated multiplication.
    pub fn rows(&self) -> Rows<'_> {
        Rows { spec: self, next: Row { index: 0, coeffs: self.initial.clone() } }
    }
}

/// Row r of an automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub index: u64,
    pub coeffs: GfpPoly,
}

impl Row {
    /// The length-`len` slice starting at `start` of the row on its zero
    /// background; `start` may be negative.
    pub fn window(&self, start: i64, len: usize) -> Block {
        window(&self.coeffs, start, len)
    }
}

/// Row r computed directly as `I·T^r` with the base-p power.
pub fn row(spec: &AutomatonSpec, r: u64) -> Row {
    let coeffs = spec.initial.mul(&spec.rule.pow(r)).expect("spec shares one modulus");
    Row { index: r, coeffs }
}

/// The length-`len` slice of `poly` starting at `start`, zero outside its support.
pub fn window(poly: &GfpPoly, start: i64, len: usize) -> Block {
    let symbols: Vec<u16> = (0..len as i64)
        .map(|i| {
            let pos = start + i;
            if pos < 0 {
                0
            } else {
                poly.coeff(pos as usize) as u16
            }
        })
        .collect();
    Block::new(symbols)
}

pub struct Rows<'a> {
    spec: &'a AutomatonSpec,
    next: Row,
}

impl Iterator for Rows<'_> {
    type Item = Row;

    fn next(&mut self) -> Option<Row> {
        let coeffs = self.next.coeffs.mul(&self.spec.rule).expect("spec shares one modulus");
        let following = Row { index: self.next.index + 1, coeffs };
        Some(core::mem::replace(&mut self.next, following))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u64, rule: &str) -> AutomatonSpec {
        AutomatonSpec::parse(p, rule, "1").unwrap()
    }

    #[test]
    fn pascal_rows() {
        let s = spec(2, "11");
        assert_eq!(row(&s, 2).coeffs.to_text(), "101");
        assert_eq!(row(&s, 0).coeffs.to_text(), "1");
        let texts: Vec<_> = s.rows().take(4).map(|r| r.coeffs.to_text()).collect();
        assert_eq!(texts, ["1", "11", "101", "1111"]);
    }

    #[test]
    fn first_row_is_the_rule() {
        assert_eq!(row(&spec(2, "101011"), 1).coeffs.to_text(), "101011");
    }

    #[test]
    fn windows() {
        let r = row(&spec(2, "11"), 2);
        assert_eq!(r.window(-1, 3).to_string(), "010");
        assert_eq!(r.window(0, 3).to_string(), "101");
        assert_eq!(r.window(2, 3).to_string(), "100");
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(AutomatonSpec::parse(2, "0", "1"), Err(SpecError::ZeroRule));
        assert_eq!(AutomatonSpec::parse(2, "11", "00"), Err(SpecError::ZeroInitial));
        assert!(matches!(AutomatonSpec::parse(4, "11", "1"), Err(SpecError::Modulus(_))));
        assert!(matches!(AutomatonSpec::parse(2, "12", "1"), Err(SpecError::Rule(_))));
    }
}
