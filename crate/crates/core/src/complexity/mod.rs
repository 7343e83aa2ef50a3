//! Accessible blocks and the line-complexity sequence a(k).
//!
//! A block of length k is accessible if it occurs in some row, where rows
//! sit on an infinite zero background (windows may start up to k−1 cells
//! left of the support). Over GF(p), row pr+s is T^s(x)·T^r(x^p) times the
//! initial state, so every long window of a late row is fixed by a shorter
//! window of an earlier row. The scan uses this to certify when the rows
//! seen already contain every block, and stops once certified and the last
//! W rows brought nothing new. Values are flagged exact only when
//! certified, which fails only if the hard row limit cuts the scan short.

mod scan;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::automaton::AutomatonSpec;
use crate::block::Block;
use crate::rational::{ratio, Rational};

/// Stopping rule for row scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanPolicy {
    /// Silent rows required at the end of the scan on top of the
    /// certificate; `None` picks 64.
    pub window: Option<usize>,
    /// Hard cap on the number of rows scanned.
    pub row_limit: usize,
}

impl Default for ScanPolicy {
    fn default() -> Self {
        ScanPolicy { window: None, row_limit: 1 << 18 }
    }
}

impl ScanPolicy {
    pub fn with_window(window: usize) -> Self {
        ScanPolicy { window: Some(window), ..Self::default() }
    }

    pub fn window(&self) -> usize {
        self.window.unwrap_or(64).max(1)
    }
}

/// How a sequence or block set was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanRecord {
    pub window: usize,
    pub row_limit: usize,
    /// Rows covered; rows whose parent row ⌊r/p⌋ brought nothing new are
    /// covered without being read.
    pub rows_scanned: usize,
}

/// The set 𝒜(k) of accessible blocks of one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSet {
    pub k: usize,
    pub blocks: BTreeSet<Block>,
    pub exact: bool,
    pub record: ScanRecord,
}

impl BlockSet {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn contains(&self, b: &Block) -> bool {
        self.blocks.contains(b)
    }
}

/// A scan at one maximal length K from which 𝒜(j) for every j ≤ K can be read.
pub struct BlockScan {
    spec: AutomatonSpec,
    outcome: scan::ScanOutcome,
}

impl BlockScan {
    pub fn run(spec: &AutomatonSpec, k_max: usize, policy: &ScanPolicy) -> Self {
        let window = policy.window();
        let outcome = scan::scan(spec, k_max, window, policy.row_limit);
        BlockScan { spec: spec.clone(), outcome }
    }

    pub fn spec(&self) -> &AutomatonSpec {
        &self.spec
    }

    pub fn k_max(&self) -> usize {
        self.outcome.k
    }

    /// a(j) for j ≤ K.
    pub fn count(&self, j: usize) -> u64 {
        self.outcome.counts[j]
    }

    pub fn exact(&self, j: usize) -> bool {
        self.outcome.exact(j)
    }

    /// Row in which the last new block of length j appeared.
    pub fn last_new_row(&self, j: usize) -> usize {
        self.outcome.last_new[j]
    }

    pub fn record(&self) -> ScanRecord {
        ScanRecord {
            window: self.outcome.window,
            row_limit: self.outcome.row_limit,
            rows_scanned: self.outcome.rows_scanned,
        }
    }

    /// 𝒜(j) as the length-j prefixes of the scanned K-blocks.
    pub fn blocks(&self, j: usize) -> BlockSet {
        let blocks = self.outcome.blocks(j).into_iter().map(Block::new).collect();
        BlockSet { k: j, blocks, exact: self.exact(j), record: self.record() }
    }

    pub fn into_sequence(self) -> ComplexitySeq {
        let k = self.outcome.k;
        let exact = (0..=k).map(|j| self.outcome.exact(j)).collect();
        ComplexitySeq {
            record: self.record(),
            spec: self.spec,
            values: self.outcome.counts,
            exact,
        }
    }
}

/// a(0..=k_max) with per-value exactness and scan provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexitySeq {
    spec: AutomatonSpec,
    values: Vec<u64>,
    exact: Vec<bool>,
    record: ScanRecord,
}

impl ComplexitySeq {
    /// A sequence from given values, for synthetic inputs and tests.
    pub fn from_values(spec: AutomatonSpec, values: Vec<u64>) -> Self {
        let n = values.len();
        ComplexitySeq {
            spec,
            values,
            exact: alloc::vec![true; n],
            record: ScanRecord { window: 0, row_limit: 0, rows_scanned: 0 },
        }
    }

    pub fn spec(&self) -> &AutomatonSpec {
        &self.spec
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, k: usize) -> u64 {
        self.values[k]
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn exact_flags(&self) -> &[bool] {
        &self.exact
    }

    pub fn is_exact(&self, k: usize) -> bool {
        self.exact[k]
    }

    /// Every value is flagged exact.
    pub fn all_exact(&self) -> bool {
        self.exact.iter().all(|&e| e)
    }

    pub fn record(&self) -> ScanRecord {
        self.record
    }

    /// The first `k_max + 1` values.
    pub fn truncated(&self, k_max: usize) -> ComplexitySeq {
        ComplexitySeq {
            spec: self.spec.clone(),
            values: self.values[..=k_max].to_vec(),
            exact: self.exact[..=k_max].to_vec(),
            record: self.record,
        }
    }
}

/// 𝒜(k) by a scan of length-k windows.
pub fn accessible_blocks(spec: &AutomatonSpec, k: usize, policy: &ScanPolicy) -> BlockSet {
    assert!(k >= 1, "block length must be positive");
    BlockScan::run(spec, k, policy).blocks(k)
}

/// a(0..=k_max) from a single scan of length-k_max windows.
pub fn line_complexity(spec: &AutomatonSpec, k_max: usize, policy: &ScanPolicy) -> ComplexitySeq {
    assert!(k_max >= 1, "k_max must be positive");
    BlockScan::run(spec, k_max, policy).into_sequence()
}

/// `(k, a(k)/k²)` for k = 1..=k_max.
pub fn berthe_ratio_report(seq: &ComplexitySeq) -> Vec<(usize, Rational)> {
    (1..=seq.k_max()).map(|k| (k, ratio(seq.get(k) as i64, (k * k) as i64))).collect()
}
