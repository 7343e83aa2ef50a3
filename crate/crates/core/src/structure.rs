//! Block maps of the mod-2 analysis, their matrices, the suspiciousness
//! criterion and intersection tables.
//!
//! For a rule T of degree n over ℤ/2, blocks of length 2k in even rows are
//! `T_A1(b) = b₀0b₁0…` or `T_A2(b) = 0b₀0b₁…` for b ∈ 𝒜(k), and blocks in
//! odd rows are `T_B1(b)`, `T_B2(b)`: square b, pad one zero each side,
//! multiply by T and keep the 2k symbols starting at n (B1) or n+1 (B2).
//!
//! | kind | domain length          | output | slice start |
//! |------|------------------------|--------|-------------|
//! | A1   | k                      | 2k     |             |
//! | A2   | k                      | 2k     |             |
//! | A1'  | k+1                    | 2k+1   |             |
//! | A2'  | k                      | 2k+1   |             |
//! | B1   | k+⌊n/2⌋                | 2k     | n           |
//! | B2   | k+⌊(n+1)/2⌋            | 2k     | n+1         |
//! | B1'  | k+⌈n/2⌉                | 2k+1   | n           |
//! | B2'  | k+⌊n/2⌋+1              | 2k+1   | n+1         |
//!
//! For odd n both primed maps take k+(n+1)/2 symbols, which is what the
//! last two rows give.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::AutomatonSpec;
use crate::block::Block;
use crate::complexity::{BlockScan, ScanPolicy};
use crate::gf2matrix::Gf2Matrix;
use crate::poly::GfpPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockMapKind {
    A1,
    A2,
    B1,
    B2,
    A1Prime,
    A2Prime,
    B1Prime,
    B2Prime,
}

impl BlockMapKind {
    pub const ALL: [BlockMapKind; 8] = [
        BlockMapKind::A1,
        BlockMapKind::A2,
        BlockMapKind::B1,
        BlockMapKind::B2,
        BlockMapKind::A1Prime,
        BlockMapKind::A2Prime,
        BlockMapKind::B1Prime,
        BlockMapKind::B2Prime,
    ];

    pub fn is_b(self) -> bool {
        matches!(self, BlockMapKind::B1 | BlockMapKind::B2 | BlockMapKind::B1Prime | BlockMapKind::B2Prime)
    }

    pub fn is_primed(self) -> bool {
        matches!(
            self,
            BlockMapKind::A1Prime | BlockMapKind::A2Prime | BlockMapKind::B1Prime | BlockMapKind::B2Prime
        )
    }

    /// Domain length minus k, for a rule of degree n.
    pub fn domain_offset(self, n: usize) -> usize {
        match self {
            BlockMapKind::A1 | BlockMapKind::A2 | BlockMapKind::A2Prime => 0,
            BlockMapKind::A1Prime => 1,
            BlockMapKind::B1 => n / 2,
            BlockMapKind::B2 => n.div_ceil(2),
            BlockMapKind::B1Prime => n.div_ceil(2),
            BlockMapKind::B2Prime => n / 2 + 1,
        }
    }

    pub fn output_len(self, k: usize) -> usize {
        if self.is_primed() {
            2 * k + 1
        } else {
            2 * k
        }
    }

    fn slice_start(self, n: usize) -> usize {
        match self {
            BlockMapKind::B1 | BlockMapKind::B1Prime => n,
            _ => n + 1,
        }
    }
}

impl fmt::Display for BlockMapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockMapKind::A1 => "A1",
            BlockMapKind::A2 => "A2",
            BlockMapKind::B1 => "B1",
            BlockMapKind::B2 => "B2",
            BlockMapKind::A1Prime => "A1'",
            BlockMapKind::A2Prime => "A2'",
            BlockMapKind::B1Prime => "B1'",
            BlockMapKind::B2Prime => "B2'",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapError {
    NotBinary(u32),
    /// The rule must have degree at least 1.
    ConstantRule,
    /// The block length leaves no admissible k for this kind.
    LengthMismatch { kind: BlockMapKind, len: usize },
    /// k is below the smallest admissible value for the matrix.
    KTooSmall { k: usize, min: usize },
    /// Only B kinds have matrices.
    NoMatrix(BlockMapKind),
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::NotBinary(p) => write!(f, "block maps are defined over Z/2, got p = {p}"),
            MapError::ConstantRule => write!(f, "rule must have degree at least 1"),
            MapError::LengthMismatch { kind, len } => write!(f, "block of length {len} is not in the domain of {kind}"),
            MapError::KTooSmall { k, min } => write!(f, "k = {k} is below the minimum {min}"),
            MapError::NoMatrix(kind) => write!(f, "{kind} has no matrix form"),
        }
    }
}

impl core::error::Error for MapError {}

fn check_rule(rule: &GfpPoly) -> Result<usize, MapError> {
    if rule.modulus().get() != 2 {
        return Err(MapError::NotBinary(rule.modulus().get()));
    }
    match rule.degree() {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(MapError::ConstantRule),
    }
}

fn interleave(b: &Block, leading_zero: bool, trailing_zero: bool) -> Block {
    let mut out = Vec::with_capacity(2 * b.len() + 1);
    for (i, &s) in b.symbols().iter().enumerate() {
        if leading_zero {
            out.push(0);
            out.push(s);
        } else {
            if i > 0 {
                out.push(0);
            }
            out.push(s);
        }
    }
    if trailing_zero {
        out.push(0);
    }
    Block::new(out)
}

/// Applies a block map; k is implied by the block length.
pub fn apply_map(kind: BlockMapKind, rule: &GfpPoly, b: &Block) -> Result<Block, MapError> {
    let n = check_rule(rule)?;
    let off = kind.domain_offset(n);
    if b.len() < off + 1 {
        return Err(MapError::LengthMismatch { kind, len: b.len() });
    }
    let k = b.len() - off;
    Ok(match kind {
        BlockMapKind::A1 => interleave(b, false, true),
        BlockMapKind::A2 => interleave(b, true, false),
        BlockMapKind::A1Prime => interleave(b, false, false),
        BlockMapKind::A2Prime => interleave(b, true, true),
        _ => {
            // 0[b²]0 has b_j at position 2j+1.
            let mut s = alloc::vec![0u32; 2 * b.len() + 1];
            for (j, &x) in b.symbols().iter().enumerate() {
                s[2 * j + 1] = u32::from(x);
            }
            let prod = GfpPoly::from_coeffs(rule.modulus(), &s).mul(rule).expect("both mod 2");
            let start = kind.slice_start(n);
            Block::new((start..start + kind.output_len(k)).map(|i| prod.coeff(i) as u16).collect())
        }
    })
}

/// Smallest admissible k of a B kind's matrix: ⌊n/2⌋, and at least 1.
pub fn matrix_k_min(n: usize) -> usize {
    (n / 2).max(1)
}

/// The GF(2) matrix of a B kind at length k: column j is `x^(2j+1)·T`
/// restricted to the sliced rows.
pub fn map_matrix(kind: BlockMapKind, rule: &GfpPoly, k: usize) -> Result<Gf2Matrix, MapError> {
    let n = check_rule(rule)?;
    if !kind.is_b() {
        return Err(MapError::NoMatrix(kind));
    }
    let min = matrix_k_min(n);
    if k < min {
        return Err(MapError::KTooSmall { k, min });
    }
    let cols = k + kind.domain_offset(n);
    let rows = kind.output_len(k);
    let start = kind.slice_start(n);
    let mut m = Gf2Matrix::zeros(rows, cols);
    for j in 0..cols {
        for (e, _) in rule.terms() {
            let pos = 2 * j + 1 + e;
            if pos >= start && pos < start + rows {
                m.set(pos - start, j, true);
            }
        }
    }
    Ok(m)
}

/// Injectivity of a B kind on the full space by a rank test.
pub fn injectivity_bruteforce(kind: BlockMapKind, rule: &GfpPoly, k: usize) -> Result<bool, MapError> {
    Ok(map_matrix(kind, rule, k)?.has_full_column_rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Nonsuspicious,
    Suspicious,
}

/// Which case of the injectivity theorem decides a map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremPart {
    /// n even, `T_B1`: needs c₀ ≠ 0 and coprime parts.
    I,
    /// n even, `T_B2`: needs coprime parts.
    II,
    /// n odd, `T_B1`: needs coprime parts.
    III,
    /// n odd, `T_B2`: needs c₀ ≠ 0 and coprime parts.
    IV,
}

impl fmt::Display for TheoremPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremPart::I => "i",
            TheoremPart::II => "ii",
            TheoremPart::III => "iii",
            TheoremPart::IV => "iv",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartVerdict {
    pub kind: BlockMapKind,
    pub part: TheoremPart,
    pub injective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuspicionReport {
    pub rule: GfpPoly,
    pub o: GfpPoly,
    pub e: GfpPoly,
    /// gcd(o, e).
    pub gcd: GfpPoly,
    /// gcd(o/x, e); differs from `gcd` only when c₀ = 0.
    pub gcd_reduced: GfpPoly,
    pub c0_nonzero: bool,
    pub verdict: Verdict,
    /// Verdicts for `T_B1` and `T_B2`, in that order.
    pub parts: [PartVerdict; 2],
}

/// Odd/even-part analysis of a mod-2 rule.
///
/// The "coprime parts" condition is read as gcd(o/x, e) = 1. With c₀ ≠ 0
/// this is gcd(o, e) = 1; with c₀ = 0 the factor x is shared by o and e for
/// every rule, yet for example `T = x + x²` has an injective `T_B2`.
pub fn suspicion(rule: &GfpPoly) -> Result<SuspicionReport, MapError> {
    let n = check_rule(rule)?;
    let (o, e) = rule.odd_even_parts().expect("binary, nonzero");
    let gcd = o.gcd(&e).expect("e is nonzero");
    let gcd_reduced = o.shift_down(1).gcd(&e).expect("e is nonzero");
    let one = GfpPoly::one(rule.modulus());
    let c0_nonzero = rule.coeff(0) != 0;
    let coprime = gcd_reduced == one;
    let parts = if n % 2 == 0 {
        [
            PartVerdict { kind: BlockMapKind::B1, part: TheoremPart::I, injective: c0_nonzero && coprime },
            PartVerdict { kind: BlockMapKind::B2, part: TheoremPart::II, injective: coprime },
        ]
    } else {
        [
            PartVerdict { kind: BlockMapKind::B1, part: TheoremPart::III, injective: coprime },
            PartVerdict { kind: BlockMapKind::B2, part: TheoremPart::IV, injective: c0_nonzero && coprime },
        ]
    };
    let verdict =
        if parts.iter().all(|p| p.injective) { Verdict::Nonsuspicious } else { Verdict::Suspicious };
    debug_assert_eq!(verdict == Verdict::Nonsuspicious, c0_nonzero && gcd == one);
    Ok(SuspicionReport { rule: rule.clone(), o, e, gcd, gcd_reduced, c0_nonzero, verdict, parts })
}

/// Smallest k from which the injectivity theorem's verdict for `kind`
/// holds at every k: ⌊n/2⌋ for B1, ⌈n/2⌉ for B2 (at k = ⌊n/2⌋ with n odd,
/// `[T_B2]` has more columns than rows), and at least 1.
pub fn theorem_k_min(kind: BlockMapKind, n: usize) -> usize {
    match kind {
        BlockMapKind::B2 => n.div_ceil(2).max(1),
        _ => matrix_k_min(n),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionError {
    Map(MapError),
    KTooSmall { k: usize, min: usize },
    /// A block set needed for this k was not exact.
    NotExact { len: usize },
    /// The scan does not reach the required block length.
    ScanTooShort { need: usize, have: usize },
}

impl fmt::Display for IntersectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntersectionError::Map(e) => write!(f, "{e}"),
            IntersectionError::KTooSmall { k, min } => write!(f, "k = {k} is below the minimum {min}"),
            IntersectionError::NotExact { len } => write!(f, "block set of length {len} is not exact"),
            IntersectionError::ScanTooShort { need, have } => {
                write!(f, "scan covers length {have}, need {need}")
            }
        }
    }
}

impl core::error::Error for IntersectionError {}

impl From<MapError> for IntersectionError {
    fn from(e: MapError) -> Self {
        IntersectionError::Map(e)
    }
}

/// Sizes of the four image sets and all their intersections at one k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTable {
    pub k: usize,
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    pub a1a2: usize,
    pub a1b1: usize,
    pub a1b2: usize,
    pub a2b1: usize,
    pub a2b2: usize,
    pub b1b2: usize,
    pub a1a2b1: usize,
    pub a1a2b2: usize,
    pub a1b1b2: usize,
    pub a2b1b2: usize,
    pub a1a2b1b2: usize,
    /// `|A1 ∪ A2 ∪ B1 ∪ B2|`, counted directly.
    pub union: usize,
    /// −Σ pairs + Σ triples − quadruple.
    pub c_cap: i64,
}

impl IntersectionTable {
    /// Inclusion-exclusion: |union| = |A1| + |A2| + |B1| + |B2| + C_∩.
    pub fn union_by_inclusion_exclusion(&self) -> i64 {
        (self.a1 + self.a2 + self.b1 + self.b2) as i64 + self.c_cap
    }
}

fn image(kind: BlockMapKind, rule: &GfpPoly, set: &BTreeSet<Block>) -> Result<BTreeSet<Block>, MapError> {
    set.iter().map(|b| apply_map(kind, rule, b)).collect()
}

/// Smallest k accepted by [`intersection_table`]: n + 1.
pub fn intersection_k_min(n: usize) -> usize {
    n + 1
}

/// The intersection table at k, scanning to the needed length.
pub fn intersection_table(
    spec: &AutomatonSpec,
    k: usize,
    policy: &ScanPolicy,
) -> Result<IntersectionTable, IntersectionError> {
    let n = check_rule(spec.rule())?;
    let scan = BlockScan::run(spec, k + n.div_ceil(2), policy);
    intersection_table_from_scan(&scan, k)
}

/// The intersection table at k from an existing scan of length ≥ k + ⌈n/2⌉.
pub fn intersection_table_from_scan(scan: &BlockScan, k: usize) -> Result<IntersectionTable, IntersectionError> {
    let rule = scan.spec().rule();
    let n = check_rule(rule)?;
    let min = intersection_k_min(n);
    if k < min {
        return Err(IntersectionError::KTooSmall { k, min });
    }
    let need = k + n.div_ceil(2);
    if scan.k_max() < need {
        return Err(IntersectionError::ScanTooShort { need, have: scan.k_max() });
    }
    let mut sets = Vec::new();
    for len in [k, k + n / 2, k + n.div_ceil(2)] {
        if !scan.exact(len) {
            return Err(IntersectionError::NotExact { len });
        }
        sets.push(scan.blocks(len).blocks);
    }
    let a1 = image(BlockMapKind::A1, rule, &sets[0])?;
    let a2 = image(BlockMapKind::A2, rule, &sets[0])?;
    let b1 = image(BlockMapKind::B1, rule, &sets[1])?;
    let b2 = image(BlockMapKind::B2, rule, &sets[2])?;

    let count = |members: &[&BTreeSet<Block>]| {
        let (first, rest) = members.split_first().expect("nonempty");
        first.iter().filter(|b| rest.iter().all(|s| s.contains(*b))).count()
    };
    let a1a2 = count(&[&a1, &a2]);
    let a1b1 = count(&[&a1, &b1]);
    let a1b2 = count(&[&a1, &b2]);
    let a2b1 = count(&[&a2, &b1]);
    let a2b2 = count(&[&a2, &b2]);
    let b1b2 = count(&[&b1, &b2]);
    let a1a2b1 = count(&[&a1, &a2, &b1]);
    let a1a2b2 = count(&[&a1, &a2, &b2]);
    let a1b1b2 = count(&[&a1, &b1, &b2]);
    let a2b1b2 = count(&[&a2, &b1, &b2]);
    let a1a2b1b2 = count(&[&a1, &a2, &b1, &b2]);
    let pairs = (a1a2 + a1b1 + a1b2 + a2b1 + a2b2 + b1b2) as i64;
    let triples = (a1a2b1 + a1a2b2 + a1b1b2 + a2b1b2) as i64;
    let union = a1.iter().chain(&a2).chain(&b1).chain(&b2).collect::<BTreeSet<_>>().len();
    Ok(IntersectionTable {
        k,
        a1: a1.len(),
        a2: a2.len(),
        b1: b1.len(),
        b2: b2.len(),
        a1a2,
        a1b1,
        a1b2,
        a2b1,
        a2b2,
        b1b2,
        a1a2b1,
        a1a2b2,
        a1b1b2,
        a2b1b2,
        a1a2b1b2,
        union,
        c_cap: -pairs + triples - a1a2b1b2 as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulus::PrimeModulus;

    fn rule(s: &str) -> GfpPoly {
        GfpPoly::parse(PrimeModulus::TWO, s).unwrap()
    }

    fn block(s: &str) -> Block {
        Block::parse(s).unwrap()
    }

    #[test]
    fn schematic_example() {
        let t = rule("111");
        assert_eq!(apply_map(BlockMapKind::B1, &t, &block("1011")).unwrap(), block("110110"));
        assert_eq!(apply_map(BlockMapKind::B2, &t, &block("1011")).unwrap(), block("101101"));
    }

    #[test]
    fn interleaving_maps() {
        let t = rule("11");
        assert_eq!(apply_map(BlockMapKind::A1, &t, &block("11")).unwrap(), block("1010"));
        assert_eq!(apply_map(BlockMapKind::A2, &t, &block("11")).unwrap(), block("0101"));
        assert_eq!(apply_map(BlockMapKind::A1Prime, &t, &block("111")).unwrap(), block("10101"));
        assert_eq!(apply_map(BlockMapKind::A2Prime, &t, &block("11")).unwrap(), block("01010"));
    }

    #[test]
    fn domain_errors() {
        let t = rule("1101");
        assert_eq!(
            apply_map(BlockMapKind::B2, &t, &block("10")),
            Err(MapError::LengthMismatch { kind: BlockMapKind::B2, len: 2 })
        );
        assert_eq!(apply_map(BlockMapKind::B1, &rule("1"), &block("1")), Err(MapError::ConstantRule));
        assert_eq!(map_matrix(BlockMapKind::B1, &rule("11101"), 1), Err(MapError::KTooSmall { k: 1, min: 2 }));
        assert_eq!(map_matrix(BlockMapKind::A1, &t, 3), Err(MapError::NoMatrix(BlockMapKind::A1)));
    }

    #[test]
    fn small_matrices() {
        let m = map_matrix(BlockMapKind::B1, &rule("111"), 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert_eq!(m.rank(), 2);
        assert!(injectivity_bruteforce(BlockMapKind::B1, &rule("1101"), 2).unwrap());
        assert!(!injectivity_bruteforce(BlockMapKind::B1, &rule("11011"), 2).unwrap());
        assert!(injectivity_bruteforce(BlockMapKind::B1, &rule("11"), 1).unwrap());
    }

    #[test]
    fn suspicion_examples() {
        let r = suspicion(&rule("1101")).unwrap();
        assert_eq!(r.verdict, Verdict::Nonsuspicious);
        assert_eq!((r.o.to_text(), r.e.to_text()), ("011".into(), "1".into()));
        let r = suspicion(&rule("11011")).unwrap();
        assert_eq!(r.verdict, Verdict::Suspicious);
        assert_eq!(r.gcd, rule("11"));
        assert!(!r.parts[0].injective && !r.parts[1].injective);
        assert_eq!(suspicion(&rule("1")), Err(MapError::ConstantRule));
    }

    #[test]
    fn zero_constant_term_reading() {
        let r = suspicion(&rule("011")).unwrap();
        assert_eq!(r.gcd, rule("01"));
        assert_eq!(r.gcd_reduced, rule("1"));
        assert!(r.parts[1].injective);
        assert!(injectivity_bruteforce(BlockMapKind::B2, &rule("011"), 1).unwrap());
        assert_eq!(r.verdict, Verdict::Suspicious);
    }

    #[test]
    fn pascal_intersections() {
        let spec = AutomatonSpec::parse(2, "1101", "1").unwrap();
        let scan = BlockScan::run(&spec, 24, &ScanPolicy::default());
        let t = intersection_table_from_scan(&scan, 8).unwrap();
        assert_eq!(t.a1a2, 1);
        assert_eq!(t.a1a2b1, 1);
        assert_eq!(t.a1a2b2, 1);
        assert_eq!(t.a1a2b1b2, 1);
        assert_eq!(t.union as u64, scan.count(16));
        assert_eq!(t.union_by_inclusion_exclusion(), t.union as i64);
        assert_eq!(intersection_table_from_scan(&scan, 3), Err(IntersectionError::KTooSmall { k: 3, min: 4 }));
    }
}
