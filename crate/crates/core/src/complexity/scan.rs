//! Row scan collecting the distinct length-K windows of an automaton.
//!
//! Each row is stored once, zero-padded by K−1 symbols on both sides and
//! packed `b` bits per symbol. Windows are found with a rolling polynomial
//! hash mod 2^61 − 1 and deduplicated exactly: a hash hit is confirmed by
//! comparing window contents. After the scan the distinct windows are
//! sorted and the longest common prefixes of neighbours give, for every
//! k ≤ K, both the number of distinct k-prefixes and the row where the last
//! new k-prefix appeared. Those rows feed a self-similarity certificate
//! that decides how far the scan must run.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashTable;

use crate::automaton::AutomatonSpec;
use crate::poly::GfpPoly;

const MERSENNE: u64 = (1 << 61) - 1;
const BASE: u64 = 0x1A2B_3C4D_5E6F_7081 % MERSENNE;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let s = (p as u64 & MERSENNE) + (p >> 61) as u64;
    if s >= MERSENNE {
        s - MERSENNE
    } else {
        s
    }
}

#[inline]
fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MERSENNE {
        s - MERSENNE
    } else {
        s
    }
}

#[inline]
fn mix(h: u64) -> u64 {
    let mut z = h.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy)]
struct Rep {
    row: u32,
    off: u32,
    hash: u64,
}

/// Packed padded rows plus the bit-level window accessors.
struct Arena {
    bits: u32,
    mask: u64,
    words: Vec<u64>,
    /// First word of each row, indexed by row number.
    row_start: Vec<usize>,
    /// Last valid window start of each row.
    row_last: Vec<usize>,
}

impl Arena {
    #[inline]
    fn symbol(&self, start: usize, i: usize) -> u64 {
        let pos = i * self.bits as usize;
        (self.words[start + pos / 64] >> (pos % 64)) & self.mask
    }

    /// 64 bits starting at bit `pos` of the row beginning at word `start`.
    #[inline]
    fn chunk(&self, start: usize, pos: usize) -> u64 {
        let (w, s) = (start + pos / 64, pos % 64);
        let lo = self.words[w] >> s;
        if s == 0 {
            lo
        } else {
            lo | (self.words[w + 1] << (64 - s))
        }
    }

    /// Chunk `level` of a window of `nbits` bits, unused high bits cleared.
    #[inline]
    fn window_chunk(&self, rep: &Rep, level: usize, nbits: usize) -> u64 {
        let start = self.row_start[rep.row as usize];
        let base = rep.off as usize * self.bits as usize;
        let c = self.chunk(start, base + 64 * level);
        let rem = nbits - 64 * level;
        if rem >= 64 {
            c
        } else {
            c & ((1u64 << rem) - 1)
        }
    }

    fn windows_equal(&self, a: &Rep, b: &Rep, nbits: usize) -> bool {
        (0..nbits.div_ceil(64)).all(|l| self.window_chunk(a, l, nbits) == self.window_chunk(b, l, nbits))
    }

    /// Appends `row` with `pad` zero symbols on the left and `right` on the
    /// right; returns the padded length in symbols.
    fn push_row(&mut self, row: &GfpPoly, pad: usize, right: usize) -> usize {
        let b = self.bits as usize;
        let padded = row.len() + pad + right;
        let start = self.words.len();
        self.words.resize(start + (padded * b).div_ceil(64) + 1, 0);
        self.row_start.push(start);
        self.row_last.push(pad + row.len() - 1);
        match row.words() {
            Some(src) => {
                let (ws, bs) = (pad / 64, pad % 64);
                for (i, &w) in src.iter().enumerate() {
                    self.words[start + ws + i] |= w << bs;
                    if bs != 0 {
                        self.words[start + ws + i + 1] |= w >> (64 - bs);
                    }
                }
            }
            None => {
                for (i, c) in row.terms() {
                    let pos = (pad + i) * b;
                    self.words[start + pos / 64] |= (c as u64) << (pos % 64);
                }
            }
        }
        padded
    }

    /// Drops the most recently pushed row.
    fn pop_row(&mut self) {
        let start = self.row_start.pop().expect("row to pop");
        self.row_last.pop();
        self.words.truncate(start);
    }
}

/// Outcome of a scan at window length K.
pub(crate) struct ScanOutcome {
    pub k: usize,
    pub window: usize,
    pub row_limit: usize,
    pub rows_scanned: usize,
    /// `counts[k]` = number of distinct length-k windows, k = 0..=K.
    pub counts: Vec<u64>,
    /// `last_new[k]` = row in which the last new length-k window appeared.
    pub last_new: Vec<usize>,
    /// `need[k]` = rows after which the length-k set is certified complete.
    pub need: Vec<usize>,
    arena: Arena,
    /// Distinct K-windows in lexicographic order.
    sorted: Vec<Rep>,
    /// `lcp[i]` = common prefix length of `sorted[i-1]` and `sorted[i]`.
    lcp: Vec<u32>,
}

impl ScanOutcome {
    /// The length-k set is certified complete by the rows scanned.
    pub fn exact(&self, k: usize) -> bool {
        self.rows_scanned >= self.need[k]
    }

    /// Distinct length-`j` windows (j ≤ K) in lexicographic order.
    pub fn blocks(&self, j: usize) -> Vec<Vec<u16>> {
        assert!(j <= self.k);
        let mut out = Vec::new();
        for (i, rep) in self.sorted.iter().enumerate() {
            if i == 0 || (self.lcp[i] as usize) < j {
                let start = self.arena.row_start[rep.row as usize];
                let v = (0..j).map(|t| self.arena.symbol(start, rep.off as usize + t) as u16).collect();
                out.push(v);
            }
        }
        if j == 0 {
            out.truncate(1);
        }
        out
    }
}

/// Resumable row-by-row window collection.
struct Scanner<'a> {
    spec: &'a AutomatonSpec,
    k: usize,
    nbits: usize,
    pow_top: u64,
    arena: Arena,
    table: HashTable<Rep>,
    next: GfpPoly,
    rows_scanned: usize,
    last_new: usize,
    /// With `Some(p)`, row r is skipped unless row ⌊r/p⌋ brought a new window.
    skip: Option<usize>,
    fresh: Vec<bool>,
}

impl<'a> Scanner<'a> {
    fn new(spec: &'a AutomatonSpec, k: usize, skip: Option<usize>) -> Self {
        let bits = spec.modulus().symbol_bits();
        let mut pow_top = 1u64;
        for _ in 1..k {
            pow_top = mulmod(pow_top, BASE);
        }
        Scanner {
            spec,
            k,
            nbits: k * bits as usize,
            pow_top,
            arena: Arena { bits, mask: (1u64 << bits) - 1, words: Vec::new(), row_start: Vec::new(), row_last: Vec::new() },
            table: HashTable::new(),
            next: spec.initial().clone(),
            rows_scanned: 0,
            last_new: 0,
            skip,
            fresh: Vec::new(),
        }
    }

    /// Scans rows until `limit` rows are done or, with `window` given, the
    /// last `window` rows brought nothing new.
    fn run(&mut self, limit: usize, window: Option<usize>) {
        while self.rows_scanned < limit {
            if window.is_some_and(|w| self.rows_scanned > 0 && self.rows_scanned - 1 - self.last_new >= w) {
                break;
            }
            self.step();
        }
    }

    fn step(&mut self) {
        let (k, nbits) = (self.k, self.nbits);
        let r = self.rows_scanned;
        let row = core::mem::replace(&mut self.next, GfpPoly::zero(self.spec.modulus()));
        self.next = row.mul(self.spec.rule()).expect("spec shares one modulus");
        if self.skip.is_some_and(|p| r > 0 && !self.fresh[r / p]) {
            self.arena.row_start.push(usize::MAX);
            self.arena.row_last.push(0);
            self.fresh.push(false);
            self.rows_scanned = r + 1;
            return;
        }
        // Row 0 gets one extra zero on the left so the zero block, always
        // present on the background, is collected from the start.
        let left = if r == 0 { k } else { k - 1 };
        let padded = self.arena.push_row(&row, left, k - 1);
        let arena = &self.arena;
        let start = arena.row_start[r];
        let before = self.table.len();
        let mut h = 0u64;
        for i in 0..k {
            h = addmod(mulmod(h, BASE), arena.symbol(start, i));
        }
        // `follow` = (row start, window start) of an earlier occurrence of
        // the current window shifted by one: if window `off − 1` equals the
        // window at (r', o' − 1), window `off` equals (r', o') exactly when
        // their last symbols agree, so runs of repeats skip the table.
        let mut follow: Option<(usize, usize, usize)> = None;
        for off in 0..=padded - k {
            if off > 0 {
                let out = mulmod(arena.symbol(start, off - 1), self.pow_top);
                h = mulmod(addmod(h, MERSENNE - out), BASE);
                h = addmod(h, arena.symbol(start, off + k - 1));
            }
            if let Some((fs, fo, last)) = follow {
                if fo <= last && arena.symbol(fs, fo + k - 1) == arena.symbol(start, off + k - 1) {
                    follow = Some((fs, fo + 1, last));
                    continue;
                }
            }
            let cand = Rep { row: r as u32, off: off as u32, hash: mix(h) };
            let entry = self.table.entry(
                cand.hash,
                |rep| rep.hash == cand.hash && arena.windows_equal(rep, &cand, nbits),
                |rep| rep.hash,
            );
            follow = match entry {
                hashbrown::hash_table::Entry::Occupied(o) => {
                    let rep = o.get();
                    let row = rep.row as usize;
                    Some((arena.row_start[row], rep.off as usize + 1, arena.row_last[row]))
                }
                hashbrown::hash_table::Entry::Vacant(v) => {
                    v.insert(cand);
                    None
                }
            };
        }
        self.rows_scanned = r + 1;
        self.fresh.push(self.table.len() > before);
        if self.table.len() > before {
            self.last_new = r;
        } else {
            self.arena.pop_row();
            self.arena.row_start.push(usize::MAX);
            self.arena.row_last.push(0);
        }
    }

    /// Sorted windows, neighbour LCPs, counts and last-new rows per length.
    fn statistics(&self) -> (Vec<Rep>, Vec<u32>, Vec<u64>, Vec<usize>) {
        assert!(self.table.len() < u32::MAX as usize, "too many distinct windows");
        let reps: Vec<Rep> = self.table.iter().copied().collect();
        let (sorted, lcp) = sort_windows(&self.arena, reps, self.k, self.nbits);
        let (counts, last_new) = prefix_statistics(&sorted, &lcp, self.k, self.rows_scanned);
        (sorted, lcp, counts, last_new)
    }
}

/// Where the completeness certificate comes from.
enum Certificate {
    /// Constant initial state and K ≥ max(n, 1): the scan certifies itself.
    SelfSimilar { p: usize, n: usize },
    /// Every length is complete after this many rows (`usize::MAX` if the
    /// auxiliary unit-initial scan could not be certified).
    Bound(usize),
}

impl Certificate {
    fn for_spec(spec: &AutomatonSpec, k: usize, window: usize, row_limit: usize) -> Self {
        let p = spec.modulus().get() as usize;
        let n = spec.degree();
        if spec.has_constant_initial() && k >= n.max(1) {
            return Certificate::SelfSimilar { p, n };
        }
        // Row pr+s is (I·T^s)(x)·T^r(x^p), so a K-window is fixed by a
        // window of length ⌊(K−1+u)/p⌋+1 of row r of A(1; T), u = deg(I·T^s).
        let u = spec.initial().len() - 1 + (p - 1) * n;
        let len = ((k - 1 + u) / p + 1).max(n).max(1);
        let unit = AutomatonSpec::with_unit_initial(spec.rule().clone()).expect("rule is nonzero");
        let aux = scan(&unit, len, window, row_limit);
        if !aux.exact(len) {
            return Certificate::Bound(usize::MAX);
        }
        let rows = aux.last_new[len] + 1;
        // A constant initial state scales A(1; T) and K < len here.
        Certificate::Bound(if spec.has_constant_initial() { rows } else { p.saturating_mul(rows) })
    }

    /// Rows needed per length, given the last-new rows of the main scan.
    ///
    /// With L(j) = ⌊(j−1+(p−1)n)/p⌋+1, every j-window of row pr+s is a fixed
    /// function of (s, offset mod p, an L(j)-window of row r). If the
    /// L(j)-windows are complete by row ℓ+1, the j-windows are complete by
    /// row p(ℓ+1). When L(j) = j (j ∈ {n, n+1}) the same argument closes on
    /// itself: no new j-window in rows ℓ+1..p(ℓ+1) means none ever.
    fn need(&self, k: usize, last_new: &[usize]) -> Vec<usize> {
        let mut need = vec![0usize; k + 1];
        match *self {
            Certificate::Bound(rows) => need[1..].fill(rows),
            Certificate::SelfSimilar { p, n } => {
                let base = n.max(1);
                for j in base..=k {
                    let l = (j - 1 + (p - 1) * n) / p + 1;
                    let own = p * (last_new[l] + 1);
                    need[j] = if l < j { own.max(need[l]) } else { own };
                }
                for j in 1..base {
                    need[j] = need[base];
                }
            }
        }
        need
    }
}

pub(crate) fn scan(spec: &AutomatonSpec, k: usize, window: usize, row_limit: usize) -> ScanOutcome {
    assert!(k >= 1, "window length must be positive");
    assert!(row_limit >= 1, "row limit must be positive");
    let cert = Certificate::for_spec(spec, k, window, row_limit);
    // Row pr+s only holds images of windows of row r, so it can bring
    // something new only if row r did.
    let skip = match cert {
        Certificate::SelfSimilar { p, .. } => Some(p),
        Certificate::Bound(_) => None,
    };
    let mut sc = Scanner::new(spec, k, skip);
    sc.run(row_limit, Some(window));
    let mut stats = sc.statistics();
    let mut seen = sc.table.len();
    loop {
        if sc.table.len() != seen {
            stats = sc.statistics();
            seen = sc.table.len();
        }
        let need = cert.need(k, &stats.3);
        let target = need.iter().copied().filter(|&r| r != usize::MAX).max().unwrap_or(0).min(row_limit);
        if target > sc.rows_scanned {
            sc.run(target, None);
            continue;
        }
        let rows = sc.rows_scanned;
        if rows < row_limit && rows - 1 - sc.last_new < window {
            sc.run(row_limit, Some(window));
            continue;
        }
        let (sorted, lcp, counts, last_new) = stats;
        return ScanOutcome { k, window, row_limit, rows_scanned: rows, counts, last_new, need, arena: sc.arena, sorted, lcp };
    }
}

/// Sorts windows lexicographically (symbol 0 first) by most-significant-chunk
/// radix refinement and records neighbour LCPs in symbols.
fn sort_windows(arena: &Arena, reps: Vec<Rep>, k: usize, nbits: usize) -> (Vec<Rep>, Vec<u32>) {
    let n = reps.len();
    let mut items: Vec<(u64, u32)> = (0..n as u32).map(|i| (0, i)).collect();
    let mut lcp_bits = vec![0u32; n];
    let levels = nbits.div_ceil(64);
    // (range start, range end, level) still to be ordered.
    let mut stack = vec![(0usize, n, 0usize)];
    while let Some((lo, hi, level)) = stack.pop() {
        let slice = &mut items[lo..hi];
        for it in slice.iter_mut() {
            // Bit order within a chunk is symbol order, so reversing makes
            // integer order match lexicographic order.
            it.0 = arena.window_chunk(&reps[it.1 as usize], level, nbits).reverse_bits();
        }
        slice.sort_unstable_by_key(|it| it.0);
        let mut run = lo;
        for i in lo + 1..=hi {
            if i == hi || items[i].0 != items[run].0 {
                if i - run > 1 {
                    assert!(level + 1 < levels, "duplicate window survived deduplication");
                    stack.push((run, i, level + 1));
                }
                if i < hi {
                    let x = items[i - 1].0 ^ items[i].0;
                    lcp_bits[i] = (64 * level) as u32 + x.leading_zeros();
                }
                run = i;
            }
        }
    }
    let bits = arena.bits;
    let sorted = items.iter().map(|&(_, i)| reps[i as usize]).collect();
    let lcp = lcp_bits.iter().map(|&b| (b / bits).min(k as u32)).collect();
    (sorted, lcp)
}

/// Distinct-prefix counts and last-new rows for every prefix length.
///
/// Groups of windows sharing a k-prefix are contiguous in sorted order; a
/// prefix first appeared in the earliest row among its group. Walking k
/// downward merges neighbours with lcp = k and keeps a histogram of group
/// minima so the maximum is available at every level.
fn prefix_statistics(sorted: &[Rep], lcp: &[u32], k: usize, rows: usize) -> (Vec<u64>, Vec<usize>) {
    let n = sorted.len();
    let mut counts = vec![0u64; k + 1];
    let mut last_new = vec![0usize; k + 1];
    counts[0] = 1;
    if n == 0 {
        return (counts, last_new);
    }
    let mut hist = vec![0u64; k + 1];
    for &l in &lcp[1..] {
        hist[l as usize] += 1;
    }
    let mut below = 0u64;
    for j in 1..=k {
        below += hist[j - 1];
        counts[j] = 1 + below;
    }

    let mut by_lcp: Vec<Vec<u32>> = vec![Vec::new(); k + 1];
    for (i, &l) in lcp.iter().enumerate().skip(1) {
        by_lcp[l as usize].push(i as u32);
    }
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let min_row: Vec<u32> = sorted.iter().map(|r| r.row).collect();
    let mut per_row = vec![0u32; rows];
    for r in &min_row {
        per_row[*r as usize] += 1;
    }
    let mut top = rows - 1;
    while per_row[top] == 0 {
        top -= 1;
    }
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let g = parent[parent[x as usize] as usize];
            parent[x as usize] = g;
            x = g;
        }
        x
    }
    for j in (1..=k).rev() {
        if j < k {
            for &i in &by_lcp[j] {
                let a = find(&mut parent, i - 1);
                let b = find(&mut parent, i);
                let (lo, hi) = if min_row[a as usize] <= min_row[b as usize] { (a, b) } else { (b, a) };
                per_row[min_row[hi as usize] as usize] -= 1;
                parent[hi as usize] = lo;
            }
            while per_row[top] == 0 {
                top -= 1;
            }
        }
        last_new[j] = top;
    }
    (counts, last_new)
}
