//! The prime modulus p and residue arithmetic in ℤ/p.

use core::fmt;

/// Largest supported modulus.
pub const MAX_MODULUS: u32 = 1 << 16;

/// A prime p with 2 ≤ p ≤ 2^16.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u32);

/// Rejected modulus value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusError {
    OutOfRange(u64),
    NotPrime(u64),
}

impl fmt::Display for ModulusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulusError::OutOfRange(p) => write!(f, "modulus {p} outside 2..=65536"),
            ModulusError::NotPrime(p) => write!(f, "modulus {p} is not prime"),
        }
    }
}

impl core::error::Error for ModulusError {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeModulus {
    pub const TWO: PrimeModulus = PrimeModulus(2);

    pub fn new(p: u64) -> Result<Self, ModulusError> {
        if !(2..=MAX_MODULUS as u64).contains(&p) {
            return Err(ModulusError::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(ModulusError::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Bits per symbol in packed encodings: the smallest power of two that
    /// holds every residue, so symbols never straddle a 64-bit word.
    pub fn symbol_bits(self) -> u32 {
        let need = 32 - (self.0 - 1).leading_zeros();
        need.next_power_of_two()
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u32 {
        (v % self.0 as u64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0);
        self.pow(a, self.0 as u64 - 2)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_primes_only() {
        assert!(PrimeModulus::new(2).is_ok());
        assert!(PrimeModulus::new(65521).is_ok());
        assert_eq!(PrimeModulus::new(1), Err(ModulusError::OutOfRange(1)));
        assert_eq!(PrimeModulus::new(9), Err(ModulusError::NotPrime(9)));
        assert_eq!(PrimeModulus::new(65537), Err(ModulusError::OutOfRange(65537)));
    }

    #[test]
    fn symbol_widths() {
        let w = |p| PrimeModulus::new(p).unwrap().symbol_bits();
        assert_eq!((w(2), w(3), w(5), w(7), w(11), w(17), w(257)), (1, 2, 4, 4, 4, 8, 16));
    }

    #[test]
    fn inverses() {
        let m = PrimeModulus::new(101).unwrap();
        for a in 1..101 {
            assert_eq!(m.mul(a, m.inv(a)), 1);
        }
    }
}
