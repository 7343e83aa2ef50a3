//! Bit-packed GF(2)[x] kernels on little-endian word vectors.
//!
//! Bit `i` of the vector is the coefficient of x^i. Every function that
//! returns a vector returns it normalized (no trailing zero words).

use alloc::vec;
use alloc::vec::Vec;

pub(crate) fn normalize(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[u64]) -> Option<usize> {
    let top = v.iter().rposition(|&w| w != 0)?;
    Some(top * 64 + 63 - v[top].leading_zeros() as usize)
}

#[inline]
pub(crate) fn bit(v: &[u64], i: usize) -> bool {
    v.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
}

pub(crate) fn set_bit(v: &mut Vec<u64>, i: usize) {
    if v.len() <= i / 64 {
        v.resize(i / 64 + 1, 0);
    }
    v[i / 64] |= 1 << (i % 64);
}

pub(crate) fn weight(v: &[u64]) -> usize {
    v.iter().map(|w| w.count_ones() as usize).sum()
}

pub(crate) fn ones(v: &[u64]) -> impl Iterator<Item = usize> + '_ {
    v.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        core::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + t)
        })
    })
}

/// `acc ^= src · x^shift`, growing `acc` as needed (not normalized).
pub(crate) fn xor_shifted(acc: &mut Vec<u64>, src: &[u64], shift: usize) {
    if src.is_empty() {
        return;
    }
    let ws = shift / 64;
    let bs = shift % 64;
    let need = ws + src.len() + usize::from(bs != 0);
    if acc.len() < need {
        acc.resize(need, 0);
    }
    if bs == 0 {
        for (a, &s) in acc[ws..].iter_mut().zip(src) {
            *a ^= s;
        }
    } else {
        let mut carry = 0u64;
        for (i, &s) in src.iter().enumerate() {
            acc[ws + i] ^= (s << bs) | carry;
            carry = s >> (64 - bs);
        }
        acc[ws + src.len()] ^= carry;
    }
}

pub(crate) fn add(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o ^= s;
    }
    normalize(&mut out);
    out
}

/// Carry-less 64×64 → 128-bit product using a 4-bit window table.
fn clmul64(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut table = [0u128; 16];
    for i in 1..16 {
        table[i] = table[i & (i - 1)] ^ (a << i.trailing_zeros());
    }
    let mut r = 0u128;
    for nib in (0..16).rev() {
        r = (r << 4) ^ table[((b >> (4 * nib)) & 15) as usize];
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (wa, wb) = (weight(a), weight(b));
    let (sparse, dense, w) = if wa <= wb { (a, b, wa) } else { (b, a, wb) };
    let mut out = Vec::with_capacity(a.len() + b.len());
    if w <= 16 * sparse.len() {
        for i in ones(sparse) {
            xor_shifted(&mut out, dense, i);
        }
    } else {
        out.resize(a.len() + b.len(), 0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let p = clmul64(x, y);
                out[i + j] ^= p as u64;
                out[i + j + 1] ^= (p >> 64) as u64;
            }
        }
    }
    normalize(&mut out);
    out
}

/// `a(x^m)` for m ≥ 1.
pub(crate) fn spread(a: &[u64], m: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for i in ones(a) {
        set_bit(&mut out, i * m);
    }
    out
}

/// Quotient and remainder; `d` must be nonzero.
pub(crate) fn div_rem(a: &[u64], d: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let dd = degree(d).expect("nonzero divisor");
    let mut r = a.to_vec();
    let mut q = Vec::new();
    while let Some(dr) = degree(&r) {
        if dr < dd {
            break;
        }
        set_bit(&mut q, dr - dd);
        xor_shifted(&mut r, d, dr - dd);
        normalize(&mut r);
    }
    normalize(&mut q);
    (q, r)
}

/// Low `n` bits of `a`, shifted down by `s`: coefficients s..s+n as a new vector.
pub(crate) fn extract(a: &[u64], s: usize, n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n.div_ceil(64)];
    for (k, o) in out.iter_mut().enumerate() {
        let pos = s + 64 * k;
        let (wi, bi) = (pos / 64, pos % 64);
        let lo = a.get(wi).copied().unwrap_or(0) >> bi;
        let hi = if bi == 0 { 0 } else { a.get(wi + 1).copied().unwrap_or(0) << (64 - bi) };
        *o = lo | hi;
    }
    if n % 64 != 0 {
        if let Some(last) = out.last_mut() {
            *last &= (1u64 << (n % 64)) - 1;
        }
    }
    normalize(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_clmul(a: u64, b: u64) -> u128 {
        let mut r = 0u128;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                r ^= (a as u128) << i;
            }
        }
        r
    }

    #[test]
    fn clmul_matches_shift_xor() {
        let mut x = 0x9E37_79B9_7F4A_7C15u64;
        for _ in 0..200 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let y = x.rotate_left(29) ^ 0xDEAD_BEEF;
            assert_eq!(clmul64(x, y), naive_clmul(x, y));
        }
        assert_eq!(clmul64(u64::MAX, u64::MAX), naive_clmul(u64::MAX, u64::MAX));
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        let a: Vec<u64> = (0..5u64).map(|i| 0x0123_4567_89AB_CDEF ^ (i * 0x1111)).collect();
        let b: Vec<u64> = (0..3u64).map(|i| 0xF0F0_0F0F_3C3C_A5A5 ^ i).collect();
        let dense = mul(&a, &b);
        let mut sparse = Vec::new();
        for i in ones(&b) {
            xor_shifted(&mut sparse, &a, i);
        }
        normalize(&mut sparse);
        assert_eq!(dense, sparse);
    }

    #[test]
    fn extract_windows() {
        let a = [0b1011u64, 1];
        assert_eq!(extract(&a, 1, 3), [0b101]);
        assert_eq!(extract(&a, 60, 8), [0b10000]);
        assert!(extract(&a, 200, 5).is_empty());
    }
}
