use std::collections::BTreeSet;

use lclab_core::automaton::AutomatonSpec;
use lclab_core::complexity::{BlockScan, ScanPolicy};
use lclab_core::structure::{
    apply_map, injectivity_bruteforce, intersection_table_from_scan, map_matrix, suspicion, theorem_k_min,
    BlockMapKind, Verdict,
};
use lclab_core::{Block, GfpPoly};
use proptest::prelude::*;

/// Every binary polynomial of exact degree n.
fn rules_of_degree(n: usize) -> impl Iterator<Item = GfpPoly> {
    (0u64..1 << n).map(move |low| GfpPoly::from_mask(low | 1 << n))
}

#[test]
fn a_maps_are_injective() {
    let t = GfpPoly::from_mask(0b11);
    for kind in [BlockMapKind::A1, BlockMapKind::A2, BlockMapKind::A1Prime, BlockMapKind::A2Prime] {
        for len in 2..=12 {
            let images: BTreeSet<Block> =
                (0..1u64 << len).map(|m| apply_map(kind, &t, &Block::from_mask(m, len)).unwrap()).collect();
            assert_eq!(images.len(), 1 << len, "{kind} at length {len}");
        }
    }
}

#[test]
fn rank_test_matches_theorem_verdicts() {
    for n in 1..=8 {
        for t in rules_of_degree(n) {
            let report = suspicion(&t).unwrap();
            for part in report.parts {
                let k0 = theorem_k_min(part.kind, n);
                for k in k0..k0 + 4 {
                    assert_eq!(
                        injectivity_bruteforce(part.kind, &t, k).unwrap(),
                        part.injective,
                        "rule {} kind {} k {k}",
                        t.to_text(),
                        part.kind
                    );
                }
            }
        }
    }
}

#[test]
fn primed_maps_injective_for_nonsuspicious_rules() {
    for n in 1..=8 {
        for t in rules_of_degree(n).filter(|t| suspicion(t).unwrap().verdict == Verdict::Nonsuspicious) {
            for kind in [BlockMapKind::B1Prime, BlockMapKind::B2Prime] {
                for k in n / 2 + 1..=n / 2 + 4 {
                    assert!(injectivity_bruteforce(kind, &t, k).unwrap(), "rule {} {kind} k {k}", t.to_text());
                }
            }
        }
    }
}

#[test]
fn irreducible_rules_are_nonsuspicious() {
    for n in 1..=8 {
        for t in rules_of_degree(n).filter(|t| t.coeff(0) == 1 && t.is_irreducible().unwrap()) {
            assert_eq!(suspicion(&t).unwrap().verdict, Verdict::Nonsuspicious, "{}", t.to_text());
        }
    }
}

#[test]
fn intersection_tables_for_f3() {
    let spec = AutomatonSpec::parse(2, "1101", "1").unwrap();
    let scan = BlockScan::run(&spec, 80, &ScanPolicy::default());
    let tables: Vec<_> = (4..=78).map(|k| intersection_table_from_scan(&scan, k).unwrap()).collect();
    for t in &tables {
        assert_eq!((t.a1a2, t.a1a2b1, t.a1a2b2, t.a1a2b1b2), (1, 1, 1, 1));
        assert_eq!(t.union_by_inclusion_exclusion(), t.union as i64);
        if 2 * t.k <= scan.k_max() {
            assert_eq!(t.union as u64, scan.count(2 * t.k));
        }
        assert_eq!(t.a1 as u64, scan.count(t.k));
        assert_eq!(t.a2 as u64, scan.count(t.k));
    }
    for w in tables.windows(2) {
        assert!(w[1].b1b2 <= w[0].b1b2);
        assert!(w[1].a1b1 <= w[0].a1b1 && w[1].a2b2 <= w[0].a2b2);
        assert!(w[1].a2b1 <= w[0].a2b1 && w[1].a1b2 <= w[0].a1b2);
    }
    let tail = &tables[tables.len() - 33..];
    assert!(tail.iter().all(|t| t.c_cap == tail[0].c_cap));
}

proptest! {
    #[test]
    fn matrix_agrees_with_string_construction(
        mask in 2u64..128,
        kind in prop::sample::select(vec![
            BlockMapKind::B1, BlockMapKind::B2, BlockMapKind::B1Prime, BlockMapKind::B2Prime,
        ]),
        dk in 0usize..4,
        bits in any::<u64>(),
    ) {
        let t = GfpPoly::from_mask(mask);
        let n = t.degree().unwrap();
        let k = (n / 2).max(1) + dk;
        let m = map_matrix(kind, &t, k).unwrap();
        let len = m.cols();
        let b = Block::from_mask(bits & ((1u64 << len) - 1), len);
        let via_string = apply_map(kind, &t, &b).unwrap();
        prop_assert_eq!(via_string.len(), m.rows());
        prop_assert_eq!(via_string.symbols(), &m.mul_vec(b.symbols())[..]);
    }
}
