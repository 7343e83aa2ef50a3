//! Exact rationals (`num_rational::BigRational`) and small helpers.
//!
//! `Display` prints `n` or `n/d` in lowest terms and `FromStr` reads the
//! same forms, which is the text encoding used by every JSON output.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` reduced; `d` must be nonzero.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest `f64` (for plotting and error summaries only).
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn canonical_text() {
        assert_eq!(ratio(6, -4).to_string(), "-3/2");
        assert_eq!(ratio(8, 4).to_string(), "2");
        assert_eq!("-15/32".parse::<Rational>().unwrap(), ratio(-15, 32));
        assert_eq!("7".parse::<Rational>().unwrap(), int(7));
        assert_eq!(to_f64(&ratio(1, 4)), 0.25);
    }
}
