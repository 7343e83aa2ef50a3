//! The piecewise quadratic limit of α(k)/k² and convergence diagnostics.
//!
//! For a framework with `R = Σ c_j z^j`, `Σ c_j = 0` and `γ(k) ~ C k²`,
//! `α(k)/k² − f(p^{−⟨log_p k⟩}) → 0` where on [1/p, 1]
//!
//! ```text
//! f(x) = C Σ_j c_j ( p² q_j² p^{−2ε_j}/(p²−1) x² + 2p q_j p^{−ε_j}/(1−p) x − ⌊log_p j⌋ − ε_j )
//! ```
//!
//! with `q_j = j/p^{⌊log_p j⌋}` and `ε_j(x) = 1` iff `x > 1/q_j`. The
//! breakpoints are the `1/q_j`, so f is an exact piecewise quadratic.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::complexity::ComplexitySeq;
use crate::genfun::FrameworkInstance;
use crate::rational::{int, ratio, to_f64, Rational};

/// `a x² + b x + c` on `[lo, hi)`, or `[lo, hi]` for the last piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Piece {
    pub fn eval(&self, x: &Rational) -> Rational {
        (&self.a * x + &self.b) * x + &self.c
    }

    fn same_quadratic(&self, other: &Piece) -> bool {
        self.a == other.a && self.b == other.b && self.c == other.c
    }
}

/// A continuous piecewise quadratic tiling [1/p, 1].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseQuadratic {
    pub p: u32,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AsymptoticsError {
    /// `Σ c_j ≠ 0`.
    CoefficientSumNonzero(Rational),
    /// Adjacent pieces disagree at a breakpoint.
    Discontinuous { at: Rational },
    OutOfDomain { x: Rational },
    /// Pieces do not tile [1/p, 1].
    BadTiling,
    /// The report needs a rule-derived framework.
    NotRuleDerived,
    NotExact { k: usize },
    TooShort { need: usize, have: usize },
    BadRange,
}

impl fmt::Display for AsymptoticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticsError::CoefficientSumNonzero(s) => write!(f, "coefficients of R sum to {s}, not 0"),
            AsymptoticsError::Discontinuous { at } => write!(f, "limit function is discontinuous at {at}"),
            AsymptoticsError::OutOfDomain { x } => write!(f, "x = {x} is outside [1/p, 1]"),
            AsymptoticsError::BadTiling => write!(f, "pieces do not tile [1/p, 1]"),
            AsymptoticsError::NotRuleDerived => write!(f, "framework has no underlying sequence"),
            AsymptoticsError::NotExact { k } => write!(f, "a({k}) is not exact"),
            AsymptoticsError::TooShort { need, have } => write!(f, "sequence reaches k = {have}, need {need}"),
            AsymptoticsError::BadRange => write!(f, "need 1 <= y_min <= y_max and at least one sample"),
        }
    }
}

impl core::error::Error for AsymptoticsError {}

/// `⌊log_p j⌋` and `p^{⌊log_p j⌋}` for j ≥ 1.
fn floor_log(p: u64, j: u64) -> (u32, u64) {
    let (mut e, mut pe) = (0, 1u64);
    while pe * p <= j {
        pe *= p;
        e += 1;
    }
    (e, pe)
}

/// `x(k) = p^{⌊log_p k⌋}/k = p^{−⟨log_p k⟩}`, in (1/p, 1].
pub fn x_of(p: u32, k: u64) -> Rational {
    assert!(k >= 1, "k must be positive");
    let (_, pe) = floor_log(p as u64, k);
    ratio(pe as i64, k as i64)
}

impl PiecewiseQuadratic {
    pub fn domain(&self) -> (Rational, Rational) {
        (ratio(1, self.p as i64), Rational::one())
    }

    /// Checks the tiling and continuity invariants.
    pub fn validate(&self) -> Result<(), AsymptoticsError> {
        let (lo, hi) = self.domain();
        let (Some(first), Some(last)) = (self.pieces.first(), self.pieces.last()) else {
            return Err(AsymptoticsError::BadTiling);
        };
        if first.lo != lo || last.hi != hi || self.pieces.iter().any(|pc| pc.lo >= pc.hi) {
            return Err(AsymptoticsError::BadTiling);
        }
        for w in self.pieces.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(AsymptoticsError::BadTiling);
            }
            if w[0].eval(&w[0].hi) != w[1].eval(&w[1].lo) {
                return Err(AsymptoticsError::Discontinuous { at: w[1].lo.clone() });
            }
        }
        Ok(())
    }

    /// Interior breakpoints.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces.iter().skip(1).map(|pc| pc.lo.clone()).collect()
    }

    /// The piece containing x (left-closed; x = 1 uses the last piece).
    pub fn piece_at(&self, x: &Rational) -> Result<&Piece, AsymptoticsError> {
        let (lo, hi) = self.domain();
        if *x < lo || *x > hi {
            return Err(AsymptoticsError::OutOfDomain { x: x.clone() });
        }
        Ok(self.pieces.iter().find(|pc| *x < pc.hi).unwrap_or_else(|| self.pieces.last().expect("nonempty")))
    }

    /// Splits the piece containing an interior point x in two with the
    /// same coefficients.
    pub fn refine_at(&self, x: &Rational) -> Result<PiecewiseQuadratic, AsymptoticsError> {
        let mut out = self.clone();
        let Some(i) = out.pieces.iter().position(|pc| pc.lo < *x && *x < pc.hi) else {
            return Err(AsymptoticsError::OutOfDomain { x: x.clone() });
        };
        let mut right = out.pieces[i].clone();
        right.lo = x.clone();
        out.pieces[i].hi = x.clone();
        out.pieces.insert(i + 1, right);
        Ok(out)
    }
}

/// Value of f at x in [1/p, 1].
pub fn evaluate(pq: &PiecewiseQuadratic, x: &Rational) -> Result<Rational, AsymptoticsError> {
    Ok(pq.piece_at(x)?.eval(x))
}

/// The exact limit function of a framework.
pub fn limit_function(fw: &FrameworkInstance) -> Result<PiecewiseQuadratic, AsymptoticsError> {
    let p = fw.p as u64;
    let terms: Vec<(u64, Rational)> =
        fw.r.terms().filter(|(j, _)| *j >= 1).map(|(j, c)| (j as u64, c.clone())).collect();
    let sum: Rational = terms.iter().map(|(_, c)| c.clone()).sum();
    if !sum.is_zero() || !fw.r.coeff(0).is_zero() {
        return Err(AsymptoticsError::CoefficientSumNonzero(sum + fw.r.coeff(0)));
    }
    // (c_j, ⌊log_p j⌋, q_j, x_j = 1/q_j)
    let data: Vec<(Rational, u32, Rational, Rational)> = terms
        .into_iter()
        .map(|(j, c)| {
            let (e, pe) = floor_log(p, j);
            (c, e, ratio(j as i64, pe as i64), ratio(pe as i64, j as i64))
        })
        .collect();
    let (dom_lo, dom_hi) = (ratio(1, p as i64), Rational::one());
    let mut cuts: Vec<Rational> = data.iter().map(|d| d.3.clone()).filter(|x| *x > dom_lo && *x < dom_hi).collect();
    cuts.push(dom_lo);
    cuts.push(dom_hi);
    cuts.sort();
    cuts.dedup();

    let pr = int(p as i64);
    let p2 = &pr * &pr;
    let mut pieces: Vec<Piece> = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let (mut a, mut b, mut c) = (Rational::zero(), Rational::zero(), Rational::zero());
        for (cj, fl, q, xj) in &data {
            // On (lo, hi), x > x_j iff lo ≥ x_j.
            let eps = lo >= xj;
            let scale = if eps { pr.recip() } else { Rational::one() };
            a += cj * &p2 * q * q * &scale * &scale / (&p2 - int(1));
            b += cj * int(2) * &pr * q * &scale / (int(1) - &pr);
            c -= cj * int(*fl as i64 + eps as i64);
        }
        pieces.push(Piece { lo: lo.clone(), hi: hi.clone(), a: &fw.c * a, b: &fw.c * b, c: &fw.c * c });
    }
    let raw = PiecewiseQuadratic { p: fw.p, pieces };
    raw.validate()?;
    let mut merged: Vec<Piece> = Vec::new();
    for pc in raw.pieces {
        match merged.last_mut() {
            Some(prev) if prev.same_quadratic(&pc) => prev.hi = pc.hi,
            _ => merged.push(pc),
        }
    }
    Ok(PiecewiseQuadratic { p: fw.p, pieces: merged })
}

/// Exact extremal values of a piecewise quadratic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtremaReport {
    pub sup: Rational,
    pub argmax: Rational,
    pub inf: Rational,
    pub argmin: Rational,
}

/// sup and inf over [1/p, 1] from piece endpoints and interior vertices.
/// Ties go to the smallest x.
pub fn extrema(pq: &PiecewiseQuadratic) -> ExtremaReport {
    let mut cands: Vec<(Rational, Rational)> = Vec::new();
    for pc in &pq.pieces {
        cands.push((pc.lo.clone(), pc.eval(&pc.lo)));
        cands.push((pc.hi.clone(), pc.eval(&pc.hi)));
        if !pc.a.is_zero() {
            let v = -&pc.b / (int(2) * &pc.a);
            if v > pc.lo && v < pc.hi {
                cands.push((v.clone(), pc.eval(&v)));
            }
        }
    }
    cands.sort_by(|x, y| x.0.cmp(&y.0));
    let mut max = cands[0].clone();
    let mut min = cands[0].clone();
    for c in &cands[1..] {
        if c.1 > max.1 {
            max = c.clone();
        }
        if c.1 < min.1 {
            min = c.clone();
        }
    }
    ExtremaReport { sup: max.1, argmax: max.0, inf: min.1, argmin: min.0 }
}

/// `⌊p^k/x⌋` for x in [1/p, 1].
pub fn garbe_subsequence(p: u32, x: &Rational, k: u32) -> Result<BigInt, AsymptoticsError> {
    if *x < ratio(1, p as i64) || *x > Rational::one() {
        return Err(AsymptoticsError::OutOfDomain { x: x.clone() });
    }
    let pk = Rational::from_integer(num_traits::pow(BigInt::from(p), k as usize));
    Ok((pk / x).floor().to_integer())
}

/// One sampled row of a convergence report.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub logp_y: f64,
    pub k: usize,
    /// f(x(k)).
    pub f_at_x: Rational,
    /// α(k)/k² with α(k) = a(k+n+1).
    pub alpha_ratio: Rational,
    /// a(k)/k².
    pub a_ratio: Rational,
}

/// Largest `|α(k)/k² − f(x(k))|` over one octave `[p^o, p^{o+1})` of the range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctaveError {
    pub octave: u32,
    pub k_lo: usize,
    pub k_hi: usize,
    pub max_error: Rational,
    pub argmax: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub octaves: Vec<OctaveError>,
}

fn alpha_shift(fw: &FrameworkInstance) -> Result<usize, AsymptoticsError> {
    Ok(fw.origin.as_ref().ok_or(AsymptoticsError::NotRuleDerived)?.n + 1)
}

fn check_seq(seq: &ComplexitySeq, need: usize) -> Result<(), AsymptoticsError> {
    if seq.k_max() < need {
        return Err(AsymptoticsError::TooShort { need, have: seq.k_max() });
    }
    match (0..=need).find(|&k| !seq.is_exact(k)) {
        Some(k) => Err(AsymptoticsError::NotExact { k }),
        None => Ok(()),
    }
}

fn ratio_over_square(v: u64, k: usize) -> Rational {
    Rational::new(BigInt::from(v), BigInt::from(k as u64 * k as u64))
}

/// Exact per-octave maxima of `|α(k)/k² − f(x(k))|` for k in `k_lo..=k_hi`.
pub fn octave_errors(
    seq: &ComplexitySeq,
    fw: &FrameworkInstance,
    pq: &PiecewiseQuadratic,
    k_lo: usize,
    k_hi: usize,
) -> Result<Vec<OctaveError>, AsymptoticsError> {
    if k_lo == 0 || k_lo > k_hi {
        return Err(AsymptoticsError::BadRange);
    }
    let shift = alpha_shift(fw)?;
    check_seq(seq, k_hi + shift)?;
    let p = pq.p as u64;
    let mut out: Vec<OctaveError> = Vec::new();
    for k in k_lo..=k_hi {
        let (o, _) = floor_log(p, k as u64);
        let err = (ratio_over_square(seq.get(k + shift), k) - evaluate(pq, &x_of(pq.p, k as u64))?).abs();
        match out.last_mut() {
            Some(last) if last.octave == o => {
                last.k_hi = k;
                if err > last.max_error {
                    last.max_error = err;
                    last.argmax = k;
                }
            }
            _ => out.push(OctaveError { octave: o, k_lo: k, k_hi: k, max_error: err, argmax: k }),
        }
    }
    Ok(out)
}

/// Samples at log-spaced y in [y_min, y_max] (k = ⌊y⌋, duplicates kept)
/// plus the per-octave error summary over `y_min..=y_max`.
pub fn convergence_report(
    seq: &ComplexitySeq,
    fw: &FrameworkInstance,
    pq: &PiecewiseQuadratic,
    y_min: f64,
    y_max: f64,
    samples: usize,
) -> Result<ConvergenceReport, AsymptoticsError> {
    if !(y_min >= 1.0 && y_max >= y_min && samples >= 1) {
        return Err(AsymptoticsError::BadRange);
    }
    let shift = alpha_shift(fw)?;
    let k_hi = libm::floor(y_max) as usize;
    check_seq(seq, k_hi + shift)?;
    let ln_p = libm::log(pq.p as f64);
    let (l0, l1) = (libm::log(y_min), libm::log(y_max));
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = if samples == 1 { 0.0 } else { i as f64 / (samples - 1) as f64 };
        let y = if i + 1 == samples { y_max } else { libm::exp(l0 + t * (l1 - l0)).clamp(y_min, y_max) };
        let k = (libm::floor(y) as usize).max(1);
        rows.push(ConvergenceRow {
            logp_y: libm::log(y) / ln_p,
            k,
            f_at_x: evaluate(pq, &x_of(pq.p, k as u64))?,
            alpha_ratio: ratio_over_square(seq.get(k + shift), k),
            a_ratio: ratio_over_square(seq.get(k), k),
        });
    }
    let octaves = octave_errors(seq, fw, pq, libm::ceil(y_min) as usize, k_hi)?;
    Ok(ConvergenceReport { rows, octaves })
}

/// `f64` view of an octave error, for summaries.
pub fn octave_error_f64(o: &OctaveError) -> f64 {
    to_f64(&o.max_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::{FrameworkInstance, RationalPoly};

    fn framework(r: &[i64], c: Rational) -> FrameworkInstance {
        FrameworkInstance::custom(2, RationalPoly::from_ints(&[1, -1]), RationalPoly::from_ints(r), c, 4).unwrap()
    }

    #[test]
    fn single_pair_is_one_quadratic() {
        // c_1 = 1, c_2 = −1: both breakpoints sit at the domain ends.
        let pq = limit_function(&framework(&[0, 1, -1], int(1))).unwrap();
        assert_eq!(pq.pieces.len(), 1);
        let pc = &pq.pieces[0];
        assert_eq!((pc.lo.clone(), pc.hi.clone()), (ratio(1, 2), int(1)));
        // q_1 = q_2 = 1 and both ε vanish inside; only ⌊log₂ 2⌋ = 1 survives.
        assert_eq!(pc.a, int(0));
        assert_eq!(pc.b, int(0));
        assert_eq!(pc.c, int(1));
    }

    #[test]
    fn rejects_nonzero_sum() {
        assert!(matches!(
            limit_function(&framework(&[0, 1, 1], int(1))),
            Err(AsymptoticsError::CoefficientSumNonzero(_))
        ));
    }

    #[test]
    fn constant_extrema() {
        let pq = PiecewiseQuadratic {
            p: 2,
            pieces: alloc::vec![Piece { lo: ratio(1, 2), hi: int(1), a: int(0), b: int(0), c: ratio(7, 3) }],
        };
        let e = extrema(&pq);
        assert_eq!((e.sup, e.inf), (ratio(7, 3), ratio(7, 3)));
        assert_eq!(evaluate(&pq, &int(2)), Err(AsymptoticsError::OutOfDomain { x: int(2) }));
    }

    #[test]
    fn garbe_values() {
        assert_eq!(garbe_subsequence(2, &int(1), 5).unwrap(), BigInt::from(32));
        assert_eq!(garbe_subsequence(2, &ratio(2, 3), 5).unwrap(), BigInt::from(48));
        assert_eq!(garbe_subsequence(3, &ratio(1, 3), 2).unwrap(), BigInt::from(27));
    }

    #[test]
    fn x_of_powers() {
        assert_eq!(x_of(2, 64), int(1));
        assert_eq!(x_of(2, 48), ratio(2, 3));
        assert_eq!(x_of(3, 5), ratio(3, 5));
    }
}
