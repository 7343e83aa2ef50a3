//! Exact generating functions for recursive line-complexity sequences.
//!
//! With `f(z) = Σ_{k≥2N} a(k) z^k` and a mod-2 recursion of order n and
//! constant C holding from N on,
//!
//! ```text
//! f(z) = P(z) + C z^{2N}/(1−z) + z^{−(n+1)} (1+zⁿ)(1+z)² f(z²)
//! ```
//!
//! for a Laurent polynomial P. Multiplying by `λ(z)/z^{n+1}` with
//! `λ = (1−zⁿ)(1−z)²` gives `λφ = R + λ(z²)φ(z²)` for `φ = f/z^{n+1}`,
//! whose coefficients are `α_k = Σ_j c_j Σ_{j p^t ≤ k} γ(k − j p^t)` for
//! k ≥ deg R, where `R = Σ c_j z^j` and `1/λ = Σ γ(k) z^k`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::complexity::ComplexitySeq;
use crate::rational::{int, ratio, Rational};
use crate::recursion::RecursionSpec;

/// A Laurent polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    /// Exponent of `coeffs[0]`; zero for the zero polynomial.
    low: i64,
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    pub fn monomial(c: Rational, e: i64) -> Self {
        Self::from_coeffs(e, vec![c])
    }

    /// `Σ coeffs[i] z^(low+i)`.
    pub fn from_coeffs(low: i64, coeffs: Vec<Rational>) -> Self {
        let mut p = RationalPoly { low, coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(0, coeffs.iter().map(|&c| int(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.low = if self.coeffs.is_empty() { 0 } else { self.low + lead as i64 };
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// No negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.low >= 0
    }

    pub fn coeff(&self, e: i64) -> Rational {
        let i = e - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Rational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms `(exponent, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.low + i as i64, c))
    }

    /// Coefficients of exponents `0..=deg`; `None` for a Laurent polynomial.
    pub fn dense(&self) -> Option<Vec<Rational>> {
        if !self.is_polynomial() {
            return None;
        }
        let Some(d) = self.degree() else { return Some(Vec::new()) };
        Some((0..=d).map(|e| self.coeff(e)).collect())
    }

    /// Integer coefficients of exponents `0..=deg`, if all are integers.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        self.dense()?
            .iter()
            .map(|c| if c.is_integer() { i64::try_from(c.to_integer()).ok() } else { None })
            .collect()
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        if self.is_zero() {
            return other.scale(&int(sign));
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.degree().unwrap().max(other.degree().unwrap());
        let coeffs = (low..=high)
            .map(|e| {
                let o = other.coeff(e);
                if sign < 0 {
                    self.coeff(e) - o
                } else {
                    self.coeff(e) + o
                }
            })
            .collect();
        Self::from_coeffs(low, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(self.low + other.low, out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `z^s`.
    pub fn shift(&self, s: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        RationalPoly { low: self.low + s, coeffs: self.coeffs.clone() }
    }

    /// `q(z^m)`.
    pub fn substitute_power(&self, m: usize) -> Self {
        assert!(m >= 1, "power must be positive");
        let mut out = RationalPoly::zero();
        for (e, c) in self.terms() {
            out = out.add(&Self::monomial(c.clone(), e * m as i64));
        }
        out
    }

    /// Value at x; x must be nonzero if there are negative exponents.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        if self.low >= 0 {
            acc * pow_rational(x, self.low as u32)
        } else {
            acc / pow_rational(x, (-self.low) as u32)
        }
    }
}

fn pow_rational(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{e}")?,
            }
        }
        Ok(())
    }
}

/// A power series truncated after degree D.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalSeries {
    coeffs: Vec<Rational>,
}

impl RationalSeries {
    /// Truncation of a polynomial to degree D.
    pub fn from_poly(q: &RationalPoly, degree: usize) -> Self {
        assert!(q.is_polynomial(), "series need nonnegative exponents");
        RationalSeries { coeffs: (0..=degree as i64).map(|e| q.coeff(e)).collect() }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series keeps at least the constant term");
        RationalSeries { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Product truncated to the smaller degree.
    pub fn mul(&self, other: &Self) -> Self {
        let d = self.degree().min(other.degree());
        let mut out = vec![Rational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                out[i + j] += a * b;
            }
        }
        RationalSeries { coeffs: out }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenfunError {
    ZeroConstantTerm,
    NotBinary(u32),
    ZeroOrder,
    /// The sequence does not reach the degree the construction needs.
    TooShort { need: usize, have: usize },
    NotExact { k: usize },
    /// P has a nonzero coefficient above its support bound.
    ResidualNotTerminating { exponent: i64 },
    /// P has a nonzero coefficient below its support bound.
    ResidualBelowSupport { exponent: i64 },
    /// Solving f forward from P disagrees with the sequence.
    Resubstitution { k: usize },
    /// Forward solving needs 2N > n + 1.
    ThresholdTooSmall { threshold: usize, order: usize },
    /// `z^(n+1)` does not divide the numerator of R.
    NotDivisible,
    ROfZero,
    ROfOne,
    LambdaIdentity,
    /// k is below deg R.
    BelowDegree { k: usize, degree: usize },
    /// γ(k) is not available from the stored series.
    GammaOutOfRange { k: usize },
    /// The framework was not built from a sequence.
    NotRuleDerived,
}

impl fmt::Display for GenfunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenfunError::ZeroConstantTerm => write!(f, "series inverse needs a nonzero constant term"),
            GenfunError::NotBinary(p) => write!(f, "the functional equation is defined over Z/2, got p = {p}"),
            GenfunError::ZeroOrder => write!(f, "order must be positive"),
            GenfunError::TooShort { need, have } => write!(f, "sequence reaches k = {have}, need {need}"),
            GenfunError::NotExact { k } => write!(f, "a({k}) is not exact"),
            GenfunError::ResidualNotTerminating { exponent } => {
                write!(f, "residual P has a nonzero coefficient at z^{exponent}, above its support")
            }
            GenfunError::ResidualBelowSupport { exponent } => {
                write!(f, "residual P has a nonzero coefficient at z^{exponent}, below its support")
            }
            GenfunError::Resubstitution { k } => write!(f, "re-substitution disagrees with a({k})"),
            GenfunError::ThresholdTooSmall { threshold, order } => {
                write!(f, "threshold {threshold} too small for order {order}: need 2N > n + 1")
            }
            GenfunError::NotDivisible => write!(f, "z^(n+1) does not divide the numerator of R"),
            GenfunError::ROfZero => write!(f, "R(0) != 0"),
            GenfunError::ROfOne => write!(f, "R(1) != 0"),
            GenfunError::LambdaIdentity => write!(f, "lambda(z)(1+z^n)(1+z)^2 != lambda(z^2)"),
            GenfunError::BelowDegree { k, degree } => write!(f, "k = {k} is below deg R = {degree}"),
            GenfunError::GammaOutOfRange { k } => write!(f, "gamma({k}) is beyond the stored series"),
            GenfunError::NotRuleDerived => write!(f, "framework has no underlying sequence"),
        }
    }
}

impl core::error::Error for GenfunError {}

/// `1/q` truncated to degree D.
pub fn series_inverse(q: &RationalPoly, degree: usize) -> Result<RationalSeries, GenfunError> {
    assert!(q.is_polynomial(), "series need nonnegative exponents");
    let q0 = q.coeff(0);
    if q0.is_zero() {
        return Err(GenfunError::ZeroConstantTerm);
    }
    let inv0 = q0.recip();
    let qd = q.degree().unwrap_or(0) as usize;
    let qs: Vec<Rational> = (0..=qd as i64).map(|e| q.coeff(e)).collect();
    let mut out: Vec<Rational> = Vec::with_capacity(degree + 1);
    for k in 0..=degree {
        let mut s = if k == 0 { Rational::one() } else { Rational::zero() };
        for i in 1..=qd.min(k) {
            if !qs[i].is_zero() {
                s -= &qs[i] * &out[k - i];
            }
        }
        out.push(s * &inv0);
    }
    Ok(RationalSeries { coeffs: out })
}

/// `(1−zⁿ)(1−z)²`.
pub fn r_n(n: usize) -> RationalPoly {
    assert!(n >= 1, "n must be positive");
    let mut a = vec![0i64; n + 1];
    a[0] = 1;
    a[n] -= 1;
    RationalPoly::from_ints(&a).mul(&RationalPoly::from_ints(&[1, -2, 1]))
}

/// `(1+zⁿ)(1+z)²`.
fn doubling_factor(n: usize) -> RationalPoly {
    let mut a = vec![0i64; n + 1];
    a[0] = 1;
    a[n] += 1;
    RationalPoly::from_ints(&a).mul(&RationalPoly::from_ints(&[1, 2, 1]))
}

/// Coefficient k of `1/((1−zⁿ)(1−z)²)`: `(1+⌊k/n⌋)(k+1 − (n/2)⌊k/n⌋)`.
pub fn eta_closed_form(n: usize, k: usize) -> Rational {
    assert!(n >= 1, "n must be positive");
    let q = (k / n) as i64;
    int(1 + q) * (int(k as i64 + 1) - ratio(n as i64 * q, 2))
}

/// P and its data, from [`build_p_t`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtResult {
    pub p_t: RationalPoly,
    /// The threshold N.
    pub threshold: usize,
    pub order: usize,
    pub c_cap: i64,
    /// Degree to which the residual was computed and checked.
    pub checked_to: usize,
}

impl PtResult {
    /// Support bound `[2N−n−1, 4N+n]`.
    pub fn support(&self) -> (i64, i64) {
        let (n, big_n) = (self.order as i64, self.threshold as i64);
        (2 * big_n - n - 1, 4 * big_n + n)
    }
}

fn check_recursion(seq: &ComplexitySeq, rec: &RecursionSpec) -> Result<(usize, usize), GenfunError> {
    let p = seq.spec().modulus().get();
    if p != 2 || rec.p != 2 {
        return Err(GenfunError::NotBinary(if p != 2 { p } else { rec.p }));
    }
    if rec.order == 0 {
        return Err(GenfunError::ZeroOrder);
    }
    let (n, big_n) = (rec.order, rec.threshold.max(1));
    let need = 4 * big_n + 2 * n + 4;
    if seq.k_max() < need {
        return Err(GenfunError::TooShort { need, have: seq.k_max() });
    }
    if let Some(k) = (0..=seq.k_max()).find(|&k| !seq.is_exact(k)) {
        return Err(GenfunError::NotExact { k });
    }
    Ok((n, big_n))
}

/// `[z^e] z^{−(n+1)} (1+zⁿ)(1+z)² f(z²)` with `f = Σ_{j≥lo} v[j] z^j`.
fn doubled_term(g: &[i64], n: usize, lo: usize, v: &[i64], e: i64) -> i64 {
    let mut s = 0;
    for (i, &gi) in g.iter().enumerate() {
        let m = e + n as i64 + 1 - i as i64;
        if gi != 0 && m >= 0 && m % 2 == 0 {
            let j = (m / 2) as usize;
            if j >= lo && j < v.len() {
                s += gi * v[j];
            }
        }
    }
    s
}

/// P as the residual `f − C z^{2N}/(1−z) − z^{−(n+1)}(1+zⁿ)(1+z)² f(z²)`
/// with N the recursion threshold.
///
/// The residual is exact through degree k_max of the sequence; every
/// coefficient outside `[2N−n−1, 4N+n]` must vanish, and solving the
/// equation forward from P (seeded with a(k) for k ≤ n+1, where the
/// equation is implicit) must give back the sequence.
pub fn build_p_t(seq: &ComplexitySeq, rec: &RecursionSpec) -> Result<PtResult, GenfunError> {
    let (n, big_n) = check_recursion(seq, rec)?;
    let c = rec.constant;
    let d = seq.k_max();
    let v: Vec<i64> = seq.values().iter().map(|&x| x as i64).collect();
    let g = doubling_factor(n).integer_coeffs().expect("integer polynomial");
    let lo_f = 2 * big_n;
    let f_at = |e: i64| if e >= lo_f as i64 { v[e as usize] } else { 0 };
    let bottom = lo_f as i64 - n as i64 - 1;
    let mut coeffs = Vec::new();
    for e in bottom..=d as i64 {
        let cz = if e >= lo_f as i64 { c } else { 0 };
        coeffs.push(int(f_at(e) - cz - doubled_term(&g, n, lo_f, &v, e)));
    }
    let p_t = RationalPoly::from_coeffs(bottom, coeffs);
    let out = PtResult { p_t, threshold: big_n, order: n, c_cap: c, checked_to: d };
    let (s_lo, s_hi) = out.support();
    if let Some(hi) = out.p_t.degree().filter(|&h| h > s_hi) {
        return Err(GenfunError::ResidualNotTerminating { exponent: hi });
    }
    if let Some(lo) = out.p_t.low_degree().filter(|&l| l < s_lo) {
        return Err(GenfunError::ResidualBelowSupport { exponent: lo });
    }
    resubstitute(&out, &v, d)?;
    Ok(out)
}

/// Solves f forward from P and compares with `v` through degree d.
fn resubstitute(pt: &PtResult, v: &[i64], d: usize) -> Result<(), GenfunError> {
    let (n, big_n) = (pt.order, pt.threshold);
    let lo_f = 2 * big_n;
    let g = doubling_factor(n).integer_coeffs().expect("integer polynomial");
    let mut f: Vec<i64> = vec![0; d + 1];
    for e in 0..=d {
        if e < lo_f {
            continue;
        }
        if e <= n + 1 {
            f[e] = v[e];
            continue;
        }
        let p = pt.p_t.coeff(e as i64);
        debug_assert!(p.is_integer());
        let p = i64::try_from(p.to_integer()).expect("small coefficient");
        f[e] = p + pt.c_cap + doubled_term(&g, n, lo_f, &f[..e], e as i64);
        if f[e] != v[e] {
            return Err(GenfunError::Resubstitution { k: e });
        }
    }
    Ok(())
}

/// How γ(k), the coefficients of 1/λ, are produced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gamma {
    /// `λ = (1−zⁿ)(1−z)²`: the closed form for η.
    Eta { n: usize },
    /// Stored coefficients of a series inverse.
    Series(RationalSeries),
}

impl Gamma {
    pub fn get(&self, k: usize) -> Result<Rational, GenfunError> {
        match self {
            Gamma::Eta { n } => Ok(eta_closed_form(*n, k)),
            Gamma::Series(s) if k <= s.degree() => Ok(s.coeff(k)),
            Gamma::Series(_) => Err(GenfunError::GammaOutOfRange { k }),
        }
    }
}

/// Rule data behind a framework built from a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleOrigin {
    pub n: usize,
    pub threshold: usize,
    pub c_cap: i64,
}

/// `λφ = R + λ(z^p)φ(z^p)` with `1/λ = Σ γ(k) z^k`, `γ(k) ~ C k²`.
///
/// For a user-supplied λ the error term of γ is the caller's concern; it
/// is not checked.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrameworkInstance {
    pub p: u32,
    pub lambda: RationalPoly,
    pub r: RationalPoly,
    pub c: Rational,
    pub gamma: Gamma,
    pub origin: Option<RuleOrigin>,
}

impl FrameworkInstance {
    /// A framework with γ from a series inverse of λ to `gamma_degree`.
    pub fn custom(
        p: u32,
        lambda: RationalPoly,
        r: RationalPoly,
        c: Rational,
        gamma_degree: usize,
    ) -> Result<Self, GenfunError> {
        let gamma = Gamma::Series(series_inverse(&lambda, gamma_degree)?);
        Ok(FrameworkInstance { p, lambda, r, c, gamma, origin: None })
    }

    /// Reassembles a rule-derived framework from its parts and rechecks it.
    pub fn from_rule_parts(r: RationalPoly, origin: RuleOrigin) -> Result<Self, GenfunError> {
        let fw = FrameworkInstance {
            p: 2,
            lambda: r_n(origin.n),
            c: ratio(1, 2 * origin.n as i64),
            gamma: Gamma::Eta { n: origin.n },
            r,
            origin: Some(origin),
        };
        fw.check_boundary()?;
        Ok(fw)
    }

    /// deg R.
    pub fn degree(&self) -> usize {
        self.r.degree().unwrap_or(0).max(0) as usize
    }

    /// `c_j` of `R = Σ c_j z^j`.
    pub fn r_coeff(&self, j: usize) -> Rational {
        self.r.coeff(j as i64)
    }

    fn check_boundary(&self) -> Result<(), GenfunError> {
        if !self.r.is_polynomial() {
            return Err(GenfunError::NotDivisible);
        }
        if !self.r.coeff(0).is_zero() {
            return Err(GenfunError::ROfZero);
        }
        if !self.r.eval(&Rational::one()).is_zero() {
            return Err(GenfunError::ROfOne);
        }
        Ok(())
    }
}

/// `λ(z)(1+zⁿ)(1+z)² = λ(z²)` for `λ = (1−zⁿ)(1−z)²`.
pub fn lambda_identity_holds(n: usize) -> bool {
    r_n(n).mul(&doubling_factor(n)) == r_n(n).substitute_power(2)
}

/// The framework of a mod-2 recursive sequence: `λ = (1−zⁿ)(1−z)²`,
/// `R = λ·(P + C z^{2N}/(1−z))/z^{n+1}`, constant `1/(2n)`, `γ = η`.
pub fn build_framework(seq: &ComplexitySeq, rec: &RecursionSpec) -> Result<FrameworkInstance, GenfunError> {
    let pt = build_p_t(seq, rec)?;
    framework_from_p_t(&pt)
}

/// [`build_framework`] from an already built P.
pub fn framework_from_p_t(pt: &PtResult) -> Result<FrameworkInstance, GenfunError> {
    let n = pt.order;
    if !lambda_identity_holds(n) {
        return Err(GenfunError::LambdaIdentity);
    }
    let lambda = r_n(n);
    // C z^{2N} λ/(1−z) = C z^{2N} (1−zⁿ)(1−z).
    let mut tail = vec![0i64; n + 1];
    tail[0] = 1;
    tail[n] -= 1;
    let tail = RationalPoly::from_ints(&tail)
        .mul(&RationalPoly::from_ints(&[1, -1]))
        .scale(&int(pt.c_cap))
        .shift(2 * pt.threshold as i64);
    let numer = lambda.mul(&pt.p_t).add(&tail);
    if numer.low_degree().is_some_and(|l| l < n as i64 + 1) {
        return Err(GenfunError::NotDivisible);
    }
    let r = numer.shift(-(n as i64 + 1));
    FrameworkInstance::from_rule_parts(r, RuleOrigin { n, threshold: pt.threshold, c_cap: pt.c_cap })
}

/// `α_k = Σ_j c_j Σ_{t: j p^t ≤ k} γ(k − j p^t)` for k ≥ deg R.
pub fn alpha_by_coeffrep(fw: &FrameworkInstance, k: usize) -> Result<Rational, GenfunError> {
    let m = fw.degree();
    if k < m {
        return Err(GenfunError::BelowDegree { k, degree: m });
    }
    let p = fw.p as usize;
    let mut s = Rational::zero();
    for (j, cj) in fw.r.terms() {
        let j = j as usize;
        let mut step = j;
        while step <= k {
            s += cj * fw.gamma.get(k - step)?;
            match step.checked_mul(p) {
                Some(next) => step = next,
                None => break,
            }
        }
    }
    Ok(s)
}

/// `Σ_t R(z^{p^t})` truncated to degree D.
fn lacunary_sum(fw: &FrameworkInstance, degree: usize) -> Vec<Rational> {
    let mut s = vec![Rational::zero(); degree + 1];
    for (j, cj) in fw.r.terms() {
        let mut e = j as usize;
        while e >= 1 && e <= degree {
            s[e] += cj;
            e *= fw.p as usize;
        }
    }
    s
}

/// `[z^e] (λ φ)` for a dense φ.
fn lambda_times(lambda: &[Rational], phi: &[Rational], e: usize) -> Rational {
    let mut s = Rational::zero();
    for (i, l) in lambda.iter().enumerate().take(e + 1) {
        if !l.is_zero() && e - i < phi.len() {
            s += l * &phi[e - i];
        }
    }
    s
}

/// Checks the iteration formula to degree D: `φ = (1/λ) Σ_t R(z^{p^t})`
/// built from γ satisfies `λφ = Σ_t R(z^{p^t})` and
/// `λφ = R + λ(z^p)φ(z^p)` coefficientwise.
pub fn framework_phi_check(fw: &FrameworkInstance, degree: usize) -> Result<bool, GenfunError> {
    let s = lacunary_sum(fw, degree);
    let gamma: Vec<Rational> = (0..=degree).map(|k| fw.gamma.get(k)).collect::<Result<_, _>>()?;
    let phi: Vec<Rational> = (0..=degree)
        .map(|k| (0..=k).filter(|&i| !s[i].is_zero()).map(|i| &s[i] * &gamma[k - i]).sum())
        .collect();
    let lambda = fw.lambda.dense().expect("lambda is a polynomial");
    Ok(equation_holds(fw, &lambda, &phi, degree) && (0..=degree).all(|e| lambda_times(&lambda, &phi, e) == s[e]))
}

fn equation_holds(fw: &FrameworkInstance, lambda: &[Rational], phi: &[Rational], degree: usize) -> bool {
    let p = fw.p as usize;
    (0..=degree).all(|e| {
        let mut rhs = fw.r.coeff(e as i64);
        if e % p == 0 {
            rhs += lambda_times(lambda, phi, e / p);
        }
        lambda_times(lambda, phi, e) == rhs
    })
}

/// Checks `λφ = R + λ(z²)φ(z²)` for `φ_k = a(k+n+1)` (zero below 2N)
/// through the largest degree the sequence determines.
pub fn framework_sequence_check(fw: &FrameworkInstance, seq: &ComplexitySeq) -> Result<bool, GenfunError> {
    let origin = fw.origin.as_ref().ok_or(GenfunError::NotRuleDerived)?;
    let shift = origin.n + 1;
    let top = seq.k_max().checked_sub(shift).ok_or(GenfunError::TooShort { need: shift, have: seq.k_max() })?;
    let phi: Vec<Rational> = (0..=top)
        .map(|k| if k + shift >= 2 * origin.threshold { int(seq.get(k + shift) as i64) } else { Rational::zero() })
        .collect();
    let lambda = fw.lambda.dense().expect("lambda is a polynomial");
    Ok(equation_holds(fw, &lambda, &phi, top))
}
