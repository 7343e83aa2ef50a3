//! Rule text encoding: ascending digit strings ("1101" = 1 + x + x³) for
//! p ≤ 10, comma-separated residues ("1,0,2,1") otherwise.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::GfpPoly;
use crate::modulus::PrimeModulus;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Empty,
    /// A character that is not a digit, at the given byte offset.
    BadChar(usize),
    /// A residue ≥ p, at the given coefficient index.
    OutOfRange { index: usize, value: u64 },
    /// p > 10 needs the comma-separated form.
    CommasRequired,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Empty => write!(f, "empty polynomial string"),
            ParseError::BadChar(at) => write!(f, "invalid character at offset {at}"),
            ParseError::OutOfRange { index, value } => {
                write!(f, "coefficient {index} = {value} is not a residue")
            }
            ParseError::CommasRequired => write!(f, "p > 10 requires comma-separated coefficients"),
        }
    }
}

impl core::error::Error for ParseError {}

impl GfpPoly {
    /// Parses the ascending-degree text encoding. Trailing zeros are accepted
    /// and normalized away.
    pub fn parse(m: PrimeModulus, s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseError::Empty);
        }
        let p = m.get() as u64;
        let mut coeffs = Vec::new();
        if s.contains(',') {
            let mut offset = 0;
            for (index, part) in s.split(',').enumerate() {
                let t = part.trim();
                if t.is_empty() {
                    return Err(ParseError::BadChar(offset));
                }
                if let Some(bad) = t.find(|c: char| !c.is_ascii_digit()) {
                    return Err(ParseError::BadChar(offset + bad));
                }
                let value: u64 = t.parse().map_err(|_| ParseError::OutOfRange { index, value: u64::MAX })?;
                if value >= p {
                    return Err(ParseError::OutOfRange { index, value });
                }
                coeffs.push(value as u32);
                offset += part.len() + 1;
            }
        } else {
            if p > 10 && s.len() > 1 {
                return Err(ParseError::CommasRequired);
            }
            for (index, c) in s.char_indices() {
                let d = c.to_digit(10).ok_or(ParseError::BadChar(index))? as u64;
                if d >= p {
                    return Err(ParseError::OutOfRange { index, value: d });
                }
                coeffs.push(d as u32);
            }
        }
        Ok(Self::from_coeffs(m, &coeffs))
    }

    /// The canonical text encoding; `"0"` for the zero polynomial.
    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for GfpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let sep = if self.modulus().get() > 10 { "," } else { "" };
        for i in 0..self.len() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{}", self.coeff(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_strings() {
        let m = PrimeModulus::TWO;
        let t = GfpPoly::parse(m, "1101").unwrap();
        assert_eq!(t.coeffs(), [1, 1, 0, 1]);
        assert_eq!(t.to_text(), "1101");
        assert_eq!(GfpPoly::parse(m, "1100").unwrap().to_text(), "11");
        assert!(GfpPoly::parse(m, "000").unwrap().is_zero());
        assert_eq!(GfpPoly::parse(m, "12"), Err(ParseError::OutOfRange { index: 1, value: 2 }));
        assert_eq!(GfpPoly::parse(m, "1x"), Err(ParseError::BadChar(1)));
        assert_eq!(GfpPoly::parse(m, ""), Err(ParseError::Empty));
    }

    #[test]
    fn comma_form() {
        let m = PrimeModulus::new(13).unwrap();
        let t = GfpPoly::parse(m, "1,0,12,1").unwrap();
        assert_eq!(t.coeffs(), [1, 0, 12, 1]);
        assert_eq!(t.to_text(), "1,0,12,1");
        assert_eq!(GfpPoly::parse(m, "101"), Err(ParseError::CommasRequired));
        assert_eq!(GfpPoly::parse(m, "7").unwrap().to_text(), "7");
        let m5 = PrimeModulus::new(5).unwrap();
        assert_eq!(GfpPoly::parse(m5, "1,4").unwrap().to_text(), "14");
    }
}
