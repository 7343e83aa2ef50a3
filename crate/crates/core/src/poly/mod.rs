//! Polynomials over ℤ/p.
//!
//! Over ℤ/2 coefficients are packed 64 per word and multiplied carry-less;
//! other primes use one residue per coefficient. Both layouts are
//! normalized so derived equality is polynomial equality.
//!
//! ```
//! use lclab_core::{GfpPoly, PrimeModulus};
//!
//! let m = PrimeModulus::TWO;
//! let t = GfpPoly::parse(m, "111").unwrap();
//! assert_eq!(t.mul(&t).unwrap().to_string(), "10101");
//! assert_eq!(GfpPoly::parse(m, "11").unwrap().pow(4).to_string(), "10001");
//! ```

pub(crate) mod gf2;
mod text;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::modulus::PrimeModulus;

pub use text::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    ModulusMismatch(u32, u32),
    /// The operation needs a nonzero operand.
    Zero,
    /// The operation needs degree at least the given value.
    DegreeTooSmall(usize),
    /// The operation is only defined over ℤ/2.
    NotBinary(u32),
    Parse(ParseError),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ModulusMismatch(a, b) => write!(f, "modulus mismatch: {a} vs {b}"),
            PolyError::Zero => write!(f, "zero polynomial not allowed here"),
            PolyError::DegreeTooSmall(d) => write!(f, "degree must be at least {d}"),
            PolyError::NotBinary(p) => write!(f, "operation requires p = 2, got p = {p}"),
            PolyError::Parse(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PolyError {}

impl From<ParseError> for PolyError {
    fn from(e: ParseError) -> Self {
        PolyError::Parse(e)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Bits(Vec<u64>),
    Residues(Vec<u32>),
}

/// A polynomial over ℤ/p with coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfpPoly {
    modulus: PrimeModulus,
    repr: Repr,
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl GfpPoly {
    pub fn zero(m: PrimeModulus) -> Self {
        let repr = if m.get() == 2 { Repr::Bits(Vec::new()) } else { Repr::Residues(Vec::new()) };
        GfpPoly { modulus: m, repr }
    }

    pub fn one(m: PrimeModulus) -> Self {
        Self::monomial(m, 1, 0)
    }

    /// `c·x^e`, with `c` reduced mod p.
    pub fn monomial(m: PrimeModulus, c: u32, e: usize) -> Self {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = c;
        Self::from_coeffs(m, &coeffs)
    }

    /// Builds a polynomial from ascending coefficients, reducing each mod p.
    pub fn from_coeffs(m: PrimeModulus, coeffs: &[u32]) -> Self {
        if m.get() == 2 {
            let mut bits = vec![0u64; coeffs.len().div_ceil(64)];
            for (i, &c) in coeffs.iter().enumerate() {
                if c & 1 == 1 {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            Self::from_words(bits)
        } else {
            let mut v: Vec<u32> = coeffs.iter().map(|&c| m.reduce(c as u64)).collect();
            trim(&mut v);
            GfpPoly { modulus: m, repr: Repr::Residues(v) }
        }
    }

    /// A ℤ/2 polynomial whose coefficient of x^i is bit i of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        Self::from_words(vec![mask])
    }

    /// A ℤ/2 polynomial from packed little-endian words.
    pub fn from_words(mut words: Vec<u64>) -> Self {
        gf2::normalize(&mut words);
        GfpPoly { modulus: PrimeModulus::TWO, repr: Repr::Bits(words) }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// Packed words when p = 2.
    pub fn words(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Bits(w) => Some(w),
            Repr::Residues(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Bits(w) => w.is_empty(),
            Repr::Residues(v) => v.is_empty(),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.repr {
            Repr::Bits(w) => gf2::degree(w),
            Repr::Residues(v) => v.len().checked_sub(1),
        }
    }

    /// Number of stored coefficients: degree + 1, or 0 for the zero polynomial.
    pub fn len(&self) -> usize {
        self.degree().map_or(0, |d| d + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, i: usize) -> u32 {
        match &self.repr {
            Repr::Bits(w) => u32::from(gf2::bit(w, i)),
            Repr::Residues(v) => v.get(i).copied().unwrap_or(0),
        }
    }

    pub fn coeffs(&self) -> Vec<u32> {
        (0..self.len()).map(|i| self.coeff(i)).collect()
    }

    /// Leading coefficient (0 for the zero polynomial).
    pub fn lead(&self) -> u32 {
        self.degree().map_or(0, |d| self.coeff(d))
    }

    /// `(exponent, coefficient)` for each nonzero term, ascending.
    pub fn terms(&self) -> Vec<(usize, u32)> {
        match &self.repr {
            Repr::Bits(w) => gf2::ones(w).map(|i| (i, 1)).collect(),
            Repr::Residues(v) => {
                v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect()
            }
        }
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        match &self.repr {
            Repr::Bits(w) => gf2::weight(w),
            Repr::Residues(v) => v.iter().filter(|&&c| c != 0).count(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.modulus != other.modulus {
            return Err(PolyError::ModulusMismatch(self.modulus.get(), other.modulus.get()));
        }
        Ok(())
    }

    fn residues(&self) -> &[u32] {
        match &self.repr {
            Repr::Residues(v) => v,
            Repr::Bits(_) => unreachable!("residue view of a packed polynomial"),
        }
    }

    fn with_residues(&self, mut v: Vec<u32>) -> Self {
        trim(&mut v);
        GfpPoly { modulus: self.modulus, repr: Repr::Residues(v) }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Bits(a), Repr::Bits(b)) => Self::from_words(gf2::add(a, b)),
            _ => {
                let m = self.modulus;
                let (a, b) = (self.residues(), other.residues());
                let v = (0..a.len().max(b.len()))
                    .map(|i| m.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
                    .collect();
                self.with_residues(v)
            }
        })
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Bits(_) => self.clone(),
            Repr::Residues(v) => self.with_residues(v.iter().map(|&c| self.modulus.neg(c)).collect()),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    /// `c·self` with `c` reduced mod p.
    pub fn scale(&self, c: u32) -> Self {
        let m = self.modulus;
        let c = m.reduce(c as u64);
        match &self.repr {
            Repr::Bits(_) if c == 1 => self.clone(),
            Repr::Bits(_) => Self::zero(m),
            Repr::Residues(v) => self.with_residues(v.iter().map(|&x| m.mul(x, c)).collect()),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Bits(a), Repr::Bits(b)) => Self::from_words(gf2::mul(a, b)),
            _ => {
                let (a, b) = (self.residues(), other.residues());
                if a.is_empty() || b.is_empty() {
                    return Ok(Self::zero(self.modulus));
                }
                let (sparse, dense) = if self.weight() <= other.weight() { (self, b) } else { (other, a) };
                let m = self.modulus;
                let mut out = vec![0u32; a.len() + b.len() - 1];
                for (i, c) in sparse.terms() {
                    for (j, &d) in dense.iter().enumerate() {
                        if d != 0 {
                            out[i + j] = m.add(out[i + j], m.mul(c, d));
                        }
                    }
                }
                self.with_residues(out)
            }
        })
    }

    /// `x^s·self`.
    pub fn shift(&self, s: usize) -> Self {
        match &self.repr {
            Repr::Bits(w) => {
                let mut out = Vec::new();
                gf2::xor_shifted(&mut out, w, s);
                Self::from_words(out)
            }
            Repr::Residues(v) if v.is_empty() => self.clone(),
            Repr::Residues(v) => {
                let mut out = vec![0; s];
                out.extend_from_slice(v);
                self.with_residues(out)
            }
        }
    }

    /// Coefficients `s..` moved down to degree 0, i.e. `⌊self / x^s⌋`.
    pub fn shift_down(&self, s: usize) -> Self {
        match &self.repr {
            Repr::Bits(w) => Self::from_words(gf2::extract(w, s, (w.len() * 64).saturating_sub(s))),
            Repr::Residues(v) => self.with_residues(v.get(s..).unwrap_or(&[]).to_vec()),
        }
    }

    /// `self(x^m)` for m ≥ 1.
    pub fn spread(&self, m: usize) -> Self {
        assert!(m >= 1, "spread factor must be positive");
        match &self.repr {
            Repr::Bits(w) => Self::from_words(gf2::spread(w, m)),
            Repr::Residues(v) => {
                let mut out = vec![0; (v.len().max(1) - 1) * m + 1];
                for (i, c) in self.terms() {
                    out[i * m] = c;
                }
                self.with_residues(out)
            }
        }
    }

    /// `self^r`, built from the base-p digits of r using
    /// `a(x)^(p^j) = a(x^(p^j))`, so each factor stays as sparse as `self`.
    pub fn pow(&self, r: u64) -> Self {
        let p = self.modulus.get() as u64;
        let mut acc = Self::one(self.modulus);
        let mut r = r;
        let mut place = 1usize;
        while r > 0 {
            let digit = r % p;
            if digit > 0 {
                let factor = if place == 1 { self.clone() } else { self.spread(place) };
                for _ in 0..digit {
                    acc = acc.mul(&factor).expect("shared modulus");
                }
            }
            r /= p;
            if r > 0 {
                place = place.checked_mul(p as usize).expect("exponent too large");
            }
        }
        acc
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        self.check(d)?;
        if d.is_zero() {
            return Err(PolyError::Zero);
        }
        Ok(match (&self.repr, &d.repr) {
            (Repr::Bits(a), Repr::Bits(b)) => {
                let (q, r) = gf2::div_rem(a, b);
                (Self::from_words(q), Self::from_words(r))
            }
            _ => {
                let m = self.modulus;
                let dv = d.residues();
                let dd = dv.len() - 1;
                let inv = m.inv(dv[dd]);
                let mut r = self.residues().to_vec();
                let mut q = vec![0u32; r.len().saturating_sub(dd)];
                while r.len() > dd {
                    let top = r.len() - 1;
                    let c = m.mul(r[top], inv);
                    q[top - dd] = c;
                    for (i, &dc) in dv.iter().enumerate() {
                        r[top - dd + i] = m.sub(r[top - dd + i], m.mul(c, dc));
                    }
                    trim(&mut r);
                }
                (self.with_residues(q), self.with_residues(r))
            }
        })
    }

    pub fn rem(&self, d: &Self) -> Result<Self, PolyError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Scales to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.lead() {
            0 | 1 => self.clone(),
            c => self.scale(self.modulus.inv(c)),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::Zero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Resultant by the Euclidean recurrence
    /// `res(a, b) = (−1)^(deg a·deg b) · lc(b)^(deg a − deg r) · res(b, a mod b)`.
    pub fn resultant(&self, other: &Self) -> Result<u32, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(PolyError::Zero);
        }
        let m = self.modulus;
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = 1u32;
        loop {
            let (da, db) = (a.len() - 1, b.len() - 1);
            if db == 0 {
                return Ok(m.mul(acc, m.pow(b.lead(), da as u64)));
            }
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(0);
            }
            let dr = r.len() - 1;
            if (da * db) % 2 == 1 {
                acc = m.neg(acc);
            }
            acc = m.mul(acc, m.pow(b.lead(), (da - dr) as u64));
            a = b;
            b = r;
        }
    }

    /// Resultant as the determinant of the Sylvester matrix.
    pub fn resultant_sylvester(&self, other: &Self) -> Result<u32, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(PolyError::Zero);
        }
        let m = self.modulus;
        let (da, db) = (self.len() - 1, other.len() - 1);
        let size = da + db;
        let mut mat = vec![vec![0u32; size]; size];
        for row in 0..db {
            for i in 0..=da {
                mat[row][row + i] = self.coeff(da - i);
            }
        }
        for row in 0..da {
            for i in 0..=db {
                mat[db + row][row + i] = other.coeff(db - i);
            }
        }
        Ok(determinant(m, mat))
    }

    /// Trial division by every monic polynomial of degree ≤ deg/2.
    pub fn is_irreducible(&self) -> Result<bool, PolyError> {
        let d = self.degree().ok_or(PolyError::Zero)?;
        if d == 0 {
            return Err(PolyError::DegreeTooSmall(1));
        }
        let m = self.modulus;
        let p = m.get() as usize;
        for fd in 1..=d / 2 {
            let count = p.checked_pow(fd as u32).expect("trial division space too large");
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(fd + 1);
                let mut x = idx;
                for _ in 0..fd {
                    coeffs.push((x % p) as u32);
                    x /= p;
                }
                coeffs.push(1);
                let f = Self::from_coeffs(m, &coeffs);
                if self.rem(&f)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Coefficients in reverse order, normalized (1011 ↦ 1101).
    pub fn reverse(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::Zero);
        }
        let mut c = self.coeffs();
        c.reverse();
        Ok(Self::from_coeffs(self.modulus, &c))
    }

    /// Odd and even parts `(o, e)` with `t(x) = o(x²)/x + e(x²)`.
    pub fn odd_even_parts(&self) -> Result<(Self, Self), PolyError> {
        if self.modulus.get() != 2 {
            return Err(PolyError::NotBinary(self.modulus.get()));
        }
        if self.is_zero() {
            return Err(PolyError::Zero);
        }
        let (mut o, mut e) = (Vec::new(), Vec::new());
        for (i, _) in self.terms() {
            if i % 2 == 1 {
                gf2::set_bit(&mut o, i.div_ceil(2));
            } else {
                gf2::set_bit(&mut e, i / 2);
            }
        }
        Ok((Self::from_words(o), Self::from_words(e)))
    }

    pub fn eval(&self, x: u32) -> u32 {
        let m = self.modulus;
        let x = m.reduce(x as u64);
        (0..self.len()).rev().fold(0, |acc, i| m.add(m.mul(acc, x), self.coeff(i)))
    }

    /// Human-readable form such as `1 + x + 2x^3`.
    pub fn to_expr(&self) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (k, (i, c)) in self.terms().into_iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let coef = if c == 1 && i > 0 { String::new() } else { alloc::format!("{c}") };
            let _ = match i {
                0 => write!(s, "{c}"),
                1 => write!(s, "{coef}x"),
                _ => write!(s, "{coef}x^{i}"),
            };
        }
        s
    }
}

fn determinant(m: PrimeModulus, mut a: Vec<Vec<u32>>) -> u32 {
    let n = a.len();
    let mut det = 1u32;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = m.neg(det);
        }
        det = m.mul(det, a[col][col]);
        let inv = m.inv(a[col][col]);
        for r in col + 1..n {
            let f = m.mul(a[r][col], inv);
            if f == 0 {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            for (x, &y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = m.sub(*x, m.mul(f, y));
            }
        }
    }
    det
}

impl fmt::Debug for GfpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfpPoly(p={}, {})", self.modulus, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(s: &str) -> GfpPoly {
        GfpPoly::parse(PrimeModulus::TWO, s).unwrap()
    }

    fn p3(s: &str) -> GfpPoly {
        GfpPoly::parse(PrimeModulus::new(3).unwrap(), s).unwrap()
    }

    #[test]
    fn addition() {
        assert!(p2("11").add(&p2("11")).unwrap().is_zero());
        assert_eq!(p2("11").add(&p2("001")).unwrap(), p2("111"));
        assert_eq!(p3("12").add(&p3("22")).unwrap(), p3("01"));
        assert_eq!(p2("1").add(&p3("1")), Err(PolyError::ModulusMismatch(2, 3)));
    }

    #[test]
    fn multiplication() {
        assert_eq!(p2("11").mul(&p2("11")).unwrap(), p2("101"));
        assert_eq!(p2("111").mul(&p2("111")).unwrap(), p2("10101"));
        assert!(p2("1101").mul(&GfpPoly::zero(PrimeModulus::TWO)).unwrap().is_zero());
        assert_eq!(p3("11").mul(&p3("11")).unwrap(), p3("121"));
    }

    #[test]
    fn powers() {
        assert_eq!(p2("11").pow(4), p2("10001"));
        assert_eq!(p2("11").pow(3), p2("1111"));
        assert_eq!(p2("1101").pow(0), p2("1"));
        assert_eq!(p3("11").pow(3), p3("1001"));
    }

    #[test]
    fn gcds() {
        assert_eq!(p2("011").gcd(&p2("101")).unwrap(), p2("11"));
        assert_eq!(p2("1101").gcd(&p2("1")).unwrap(), p2("1"));
        assert_eq!(p3("22").gcd(&GfpPoly::zero(p3("1").modulus())).unwrap(), p3("11"));
        assert_eq!(GfpPoly::zero(PrimeModulus::TWO).gcd(&GfpPoly::zero(PrimeModulus::TWO)), Err(PolyError::Zero));
    }

    #[test]
    fn odd_even() {
        assert_eq!(p2("1101").odd_even_parts().unwrap(), (p2("011"), p2("1")));
        assert_eq!(p2("11011").odd_even_parts().unwrap(), (p2("011"), p2("101")));
        assert_eq!(p2("1").odd_even_parts().unwrap(), (GfpPoly::zero(PrimeModulus::TWO), p2("1")));
        assert_eq!(p3("1").odd_even_parts(), Err(PolyError::NotBinary(3)));
    }

    #[test]
    fn resultants() {
        assert_eq!(p2("01").resultant(&p2("11")).unwrap(), 1);
        assert_eq!(p2("11").resultant(&p2("11")).unwrap(), 0);
        assert_eq!(p2("1101").resultant(&p2("1")).unwrap(), 1);
        // (x − 1)(x − 2) against x over ℤ/3: product of roots' values times sign.
        assert_eq!(p3("201").resultant(&p3("01")).unwrap(), p3("201").resultant_sylvester(&p3("01")).unwrap());
    }

    #[test]
    fn irreducibility() {
        assert!(p2("111").is_irreducible().unwrap());
        assert!(!p2("101").is_irreducible().unwrap());
        assert!(p2("01").is_irreducible().unwrap());
        assert!(p2("1101").is_irreducible().unwrap());
        assert_eq!(p2("1").is_irreducible(), Err(PolyError::DegreeTooSmall(1)));
    }

    #[test]
    fn reversal() {
        assert_eq!(p2("1011").reverse().unwrap(), p2("1101"));
        assert_eq!(p2("101").reverse().unwrap(), p2("101"));
        assert_eq!(p2("11").reverse().unwrap(), p2("11"));
        assert_eq!(p2("01").reverse().unwrap(), p2("1"));
    }

    #[test]
    fn shifts() {
        assert_eq!(p2("11").shift(70).shift_down(70), p2("11"));
        assert_eq!(p2("1101").shift_down(1), p2("101"));
        assert_eq!(p3("1201").shift(2), p3("001201"));
        assert_eq!(p3("1201").shift_down(3), p3("1"));
        assert_eq!(p3("12").spread(3), p3("1002"));
    }

    #[test]
    fn expressions() {
        assert_eq!(p2("1101").to_expr(), "1 + x + x^3");
        assert_eq!(p3("021").to_expr(), "2x + x^2");
    }
}
