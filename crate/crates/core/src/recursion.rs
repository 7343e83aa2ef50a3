//! Recursions satisfied by line-complexity sequences.
//!
//! A sequence satisfies a recursion of order n over ℤ/p when
//! `a(k) = Σ_{j<p} Σ_{r<p} a(⌊(k+jn+r)/p⌋) + C` for all k ≥ K. For p = 2 this
//! is the pair of parity displays
//!
//! ```text
//! a(2k)   = 2a(k) + a(k+⌊n/2⌋) + a(k+⌈n/2⌉) + C
//! a(2k+1) = a(k) + a(k+1) + a(k+⌈n/2⌉) + a(k+⌊n/2⌋+1) + C
//! ```
//!
//! Fits take C at the largest checkable k and sweep down to the smallest K
//! from which every k verifies; a fit needs at least [`MIN_RUN`]
//! consecutive verified k.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::AutomatonSpec;
use crate::complexity::{BlockScan, ComplexitySeq, ScanPolicy};
use crate::block::Block;

/// Consecutive verified k needed to accept a fit.
pub const MIN_RUN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    TheoremMainEvenOdd,
    GeneralOrder,
}

/// A verified recursion: order n, constant C, holding on `threshold..=verified_to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecursionSpec {
    pub p: u32,
    pub order: usize,
    pub constant: i64,
    pub threshold: usize,
    pub verified_to: usize,
    pub flavor: Flavor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecursionError {
    NotBinary(u32),
    /// Fewer usable indices than the fit needs.
    TooShort { need: usize, have: usize },
    /// a(k) is needed but not flagged exact.
    NotExact { k: usize },
    /// Power identities need a constant initial state.
    NonConstantInitial,
    /// The exponent shares a factor with p.
    NotCoprime { p: u32, n: u64 },
    ZeroOrder,
}

impl fmt::Display for RecursionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecursionError::NotBinary(p) => write!(f, "this recursion is defined over Z/2, got p = {p}"),
            RecursionError::TooShort { need, have } => {
                write!(f, "sequence too short: need {need} usable indices, have {have}")
            }
            RecursionError::NotExact { k } => write!(f, "a({k}) is not exact"),
            RecursionError::NonConstantInitial => write!(f, "initial state must be a nonzero constant"),
            RecursionError::NotCoprime { p, n } => write!(f, "gcd({p}, {n}) is not 1"),
            RecursionError::ZeroOrder => write!(f, "order must be positive"),
        }
    }
}

impl core::error::Error for RecursionError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// Constants implied by each parity display at one k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityConstants {
    pub k: usize,
    pub even: i64,
    pub odd: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MainOutcome {
    Verified {
        spec: RecursionSpec,
        /// Per-parity constants at the largest checked k.
        diagnostics: ParityConstants,
    },
    Violated {
        /// Largest k at which a display fails for the fitted C.
        k: usize,
        parity: Parity,
        constant: i64,
        found: i64,
        diagnostics: ParityConstants,
    },
}

impl MainOutcome {
    pub fn spec(&self) -> Option<&RecursionSpec> {
        match self {
            MainOutcome::Verified { spec, .. } => Some(spec),
            MainOutcome::Violated { .. } => None,
        }
    }

    /// The two parities imply different constants at the top of the range.
    pub fn parity_constants_differ(&self) -> bool {
        let d = match self {
            MainOutcome::Verified { diagnostics, .. } | MainOutcome::Violated { diagnostics, .. } => diagnostics,
        };
        d.even != d.odd
    }
}

fn a(seq: &ComplexitySeq, k: usize) -> i64 {
    seq.get(k) as i64
}

fn require_exact(seq: &ComplexitySeq, upto: usize) -> Result<(), RecursionError> {
    match (0..=upto).find(|&k| !seq.is_exact(k)) {
        Some(k) => Err(RecursionError::NotExact { k }),
        None => Ok(()),
    }
}

/// Even and odd display constants at k for a degree-n rule.
pub fn parity_constants(seq: &ComplexitySeq, n: usize, k: usize) -> ParityConstants {
    let (fl, ce) = (n / 2, n.div_ceil(2));
    let even = a(seq, 2 * k) - 2 * a(seq, k) - a(seq, k + fl) - a(seq, k + ce);
    let odd = a(seq, 2 * k + 1) - a(seq, k) - a(seq, k + 1) - a(seq, k + ce) - a(seq, k + fl + 1);
    ParityConstants { k, even, odd }
}

/// Largest k at which both parity displays can be evaluated: ⌊(k_max − n)/2⌋.
pub fn theorem_main_top(k_max: usize, n: usize) -> usize {
    k_max.saturating_sub(n) / 2
}

/// Fits and verifies both parity displays with one constant.
pub fn verify_theorem_main(seq: &ComplexitySeq, n: usize) -> Result<MainOutcome, RecursionError> {
    let p = seq.spec().modulus().get();
    if p != 2 {
        return Err(RecursionError::NotBinary(p));
    }
    if n == 0 {
        return Err(RecursionError::ZeroOrder);
    }
    let hi = theorem_main_top(seq.k_max(), n);
    let need = (4 * n).max(MIN_RUN);
    if hi < need {
        return Err(RecursionError::TooShort { need, have: hi });
    }
    require_exact(seq, seq.k_max())?;
    let top = parity_constants(seq, n, hi);
    let c = top.even;
    let mut k = hi;
    let violation = loop {
        let d = parity_constants(seq, n, k);
        if d.even != c {
            break Some((k, Parity::Even, d.even));
        }
        if d.odd != c {
            break Some((k, Parity::Odd, d.odd));
        }
        if k == 1 {
            break None;
        }
        k -= 1;
    };
    let threshold = match violation {
        None => 1,
        Some((k, ..)) => k + 1,
    };
    match violation {
        Some((k, parity, found)) if hi + 1 - threshold < MIN_RUN || k == hi => Ok(MainOutcome::Violated {
            k,
            parity,
            constant: c,
            found,
            diagnostics: top,
        }),
        _ => Ok(MainOutcome::Verified {
            spec: RecursionSpec {
                p,
                order: n,
                constant: c,
                threshold,
                verified_to: hi,
                flavor: Flavor::TheoremMainEvenOdd,
            },
            diagnostics: top,
        }),
    }
}

/// Largest argument of the order-n sum at k over ℤ/p.
fn general_reach(p: usize, n: usize, k: usize) -> usize {
    (k + (p - 1) * n).div_ceil(p)
}

/// `a(k) − Σ_{j,r<p} a(⌊(k+jn+r)/p⌋)`.
pub fn general_order_constant(seq: &ComplexitySeq, n: usize, k: usize) -> i64 {
    let p = seq.spec().modulus().get() as usize;
    let mut s = 0;
    for j in 0..p {
        for r in 0..p {
            s += a(seq, (k + j * n + r) / p);
        }
    }
    a(seq, k) - s
}

/// Largest k at which the order-n identity can be evaluated.
pub fn general_order_top(p: usize, n: usize, k_max: usize) -> usize {
    (1..=k_max).rev().find(|&k| general_reach(p, n, k) <= k_max).unwrap_or(0)
}

/// Checks one order n: C from the largest k, then the smallest K.
pub fn check_general_order(seq: &ComplexitySeq, n: usize) -> Result<Option<RecursionSpec>, RecursionError> {
    if n == 0 {
        return Err(RecursionError::ZeroOrder);
    }
    let p = seq.spec().modulus().get();
    let hi = general_order_top(p as usize, n, seq.k_max());
    if hi < MIN_RUN {
        return Err(RecursionError::TooShort { need: MIN_RUN, have: hi });
    }
    require_exact(seq, seq.k_max())?;
    let c = general_order_constant(seq, n, hi);
    let mut threshold = hi;
    while threshold > 1 && general_order_constant(seq, n, threshold - 1) == c {
        threshold -= 1;
    }
    Ok((hi + 1 - threshold >= MIN_RUN).then_some(RecursionSpec {
        p,
        order: n,
        constant: c,
        threshold,
        verified_to: hi,
        flavor: Flavor::GeneralOrder,
    }))
}

/// The smallest order in 1..=n_max whose identity holds on the checkable tail.
///
/// Orders whose tail is too short to verify are skipped; the error is
/// returned only if no order can be checked at all.
pub fn fit_general_order(seq: &ComplexitySeq, n_max: usize) -> Result<Option<RecursionSpec>, RecursionError> {
    let mut first_err = None;
    let mut checked = false;
    for n in 1..=n_max {
        match check_general_order(seq, n) {
            Ok(Some(spec)) => return Ok(Some(spec)),
            Ok(None) => checked = true,
            Err(e @ RecursionError::TooShort { .. }) => {
                first_err.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    match (checked, first_err) {
        (false, Some(e)) => Err(e),
        _ => Ok(None),
    }
}

/// Re-evaluates a fitted recursion at every k of its verified range.
pub fn recheck(seq: &ComplexitySeq, spec: &RecursionSpec) -> bool {
    (spec.threshold..=spec.verified_to).all(|k| match spec.flavor {
        Flavor::TheoremMainEvenOdd => {
            let d = parity_constants(seq, spec.order, k);
            d.even == spec.constant && d.odd == spec.constant
        }
        Flavor::GeneralOrder => general_order_constant(seq, spec.order, k) == spec.constant,
    })
}

/// One failed instance of `a_{T^p}(pk+r) = (p−r)a_T(k) + r·a_T(k+1) + 1 − p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerMismatch {
    pub k: usize,
    pub r: usize,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerReport {
    pub checked: usize,
    pub mismatches: Vec<PowerMismatch>,
}

impl PowerReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn scan_exact(spec: &AutomatonSpec, k_max: usize, policy: &ScanPolicy) -> Result<ComplexitySeq, RecursionError> {
    let seq = BlockScan::run(spec, k_max, policy).into_sequence();
    require_exact(&seq, k_max)?;
    Ok(seq)
}

/// Compares both sides of the T^p identity from scans of `A_p(c;T)` and
/// `A_p(c;T^p)` for k in `ks` (k ≥ 1) and r in `rs` (r < p).
pub fn check_power_p_identity(
    spec: &AutomatonSpec,
    ks: core::ops::RangeInclusive<usize>,
    rs: core::ops::Range<usize>,
    policy: &ScanPolicy,
) -> Result<PowerReport, RecursionError> {
    if !spec.has_constant_initial() {
        return Err(RecursionError::NonConstantInitial);
    }
    let p = spec.modulus().get() as usize;
    assert!(*ks.start() >= 1 && rs.end <= p, "need k >= 1 and r < p");
    let (k_hi, r_hi) = (*ks.end(), rs.end.saturating_sub(1));
    let base = scan_exact(spec, k_hi + 1, policy)?;
    let power = scan_exact(&spec.rule_power(p as u64), p * k_hi + r_hi, policy)?;
    let mut report = PowerReport { checked: 0, mismatches: Vec::new() };
    for k in ks {
        for r in rs.clone() {
            let lhs = a(&power, p * k + r);
            let rhs = (p - r) as i64 * a(&base, k) + r as i64 * a(&base, k + 1) + 1 - p as i64;
            report.checked += 1;
            if lhs != rhs {
                report.mismatches.push(PowerMismatch { k, r, lhs, rhs });
            }
        }
    }
    Ok(report)
}

/// Block-set comparison of `A_p(c;T)` and `A_p(c;T^n)` at one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetComparison {
    pub k: usize,
    pub only_base: BTreeSet<Block>,
    pub only_power: BTreeSet<Block>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelprimeReport {
    pub n: u64,
    pub k_max: usize,
    /// Lengths at which the sets differ.
    pub differences: Vec<SetComparison>,
}

impl RelprimeReport {
    pub fn passed(&self) -> bool {
        self.differences.is_empty()
    }
}

/// Checks 𝒜(k) of `T` and of `T^n` for equality as sets, k ≤ k_max.
pub fn check_relprime_invariance(
    spec: &AutomatonSpec,
    n: u64,
    k_max: usize,
    policy: &ScanPolicy,
) -> Result<RelprimeReport, RecursionError> {
    let p = spec.modulus().get();
    if n == 0 {
        return Err(RecursionError::ZeroOrder);
    }
    if n % p as u64 == 0 {
        return Err(RecursionError::NotCoprime { p, n });
    }
    if !spec.has_constant_initial() {
        return Err(RecursionError::NonConstantInitial);
    }
    let base = BlockScan::run(spec, k_max, policy);
    let power = BlockScan::run(&spec.rule_power(n), k_max, policy);
    let mut differences = Vec::new();
    for k in 1..=k_max {
        for scan in [&base, &power] {
            if !scan.exact(k) {
                return Err(RecursionError::NotExact { k });
            }
        }
        let (x, y) = (base.blocks(k).blocks, power.blocks(k).blocks);
        if x != y {
            differences.push(SetComparison {
                k,
                only_base: x.difference(&y).cloned().collect(),
                only_power: y.difference(&x).cloned().collect(),
            });
        }
    }
    Ok(RelprimeReport { n, k_max, differences })
}

/// Predicted order for `T^n` from an order-r recursion for T: r·p^s with
/// s the p-adic valuation of n.
pub fn power_order(spec: &RecursionSpec, n: u64) -> usize {
    assert!(n >= 1, "exponent must be positive");
    let p = spec.p as u64;
    let (mut m, mut scale) = (n, 1usize);
    while m % p == 0 {
        m /= p;
        scale *= p as usize;
    }
    spec.order * scale
}
