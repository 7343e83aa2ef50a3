use lclab_core::automaton::AutomatonSpec;
use lclab_core::complexity::{line_complexity, BlockScan, ScanPolicy};
use lclab_core::recursion::{
    check_power_p_identity, check_relprime_invariance, fit_general_order, power_order, recheck,
    verify_theorem_main, MainOutcome, MIN_RUN,
};
use lclab_core::structure::intersection_table_from_scan;
use lclab_core::{GfpPoly, PrimeModulus};

/// Rules of degree 1..=3 with c₀ ≠ 0 over ℤ/p.
fn small_rules(p: u32) -> Vec<GfpPoly> {
    let m = PrimeModulus::new(p as u64).unwrap();
    let mut out = Vec::new();
    for n in 1..=3usize {
        let total = (p as usize).pow(n as u32 + 1);
        for code in 0..total {
            let mut c = Vec::with_capacity(n + 1);
            let mut x = code;
            for _ in 0..=n {
                c.push((x % p as usize) as u32);
                x /= p as usize;
            }
            if c[0] != 0 && c[n] != 0 {
                out.push(GfpPoly::from_coeffs(m, &c));
            }
        }
    }
    out
}

fn constant_initials(rule: &GfpPoly) -> Vec<AutomatonSpec> {
    let m = rule.modulus();
    (1..m.get()).map(|c| AutomatonSpec::new(rule.clone(), GfpPoly::from_coeffs(m, &[c])).unwrap()).collect()
}

#[test]
fn theorem_main_constants_agree_with_intersections() {
    for (rule, k_max) in [("11", 200), ("111", 200), ("1101", 200), ("11001", 300)] {
        let spec = AutomatonSpec::parse(2, rule, "1").unwrap();
        let scan = BlockScan::run(&spec, k_max, &ScanPolicy::default());
        let n = spec.degree();
        let top = k_max - n.div_ceil(2);
        let caps: Vec<i64> =
            (top - 3..=top).map(|k| intersection_table_from_scan(&scan, k).unwrap().c_cap).collect();
        let seq = scan.into_sequence();
        let outcome = verify_theorem_main(&seq, n).unwrap();
        let MainOutcome::Verified { spec: rec, .. } = outcome else { panic!("{rule}: {outcome:?}") };
        assert!(rec.verified_to + 1 - rec.threshold >= MIN_RUN);
        assert!(recheck(&seq, &rec));
        assert!(caps.iter().all(|&c| c == rec.constant), "{rule}: {caps:?} vs {}", rec.constant);
    }
}

#[test]
fn small_rules_have_small_thresholds() {
    // Recorded values; the constants are cross-checked against the
    // intersection tables above.
    for (rule, c, k) in [("11", -6, 1), ("111", -8, 3), ("1101", -13, 5), ("11001", -22, 10)] {
        let spec = AutomatonSpec::parse(2, rule, "1").unwrap();
        let seq = line_complexity(&spec, 200, &ScanPolicy::default());
        let rec = verify_theorem_main(&seq, spec.degree()).unwrap().spec().unwrap().clone();
        assert_eq!((rec.constant, rec.threshold), (c, k), "{rule}");
    }
}

#[test]
fn power_identity_on_small_rules() {
    for p in [2, 3] {
        for rule in small_rules(p) {
            for spec in constant_initials(&rule) {
                let report = check_power_p_identity(&spec, 1..=12, 0..p as usize, &ScanPolicy::default()).unwrap();
                assert!(report.passed(), "p={p} rule {}: {:?}", rule.to_text(), report.mismatches);
                assert_eq!(report.checked, 12 * p as usize);
            }
        }
    }
}

#[test]
fn relprime_powers_keep_block_sets() {
    for (p, n) in [(2, 3), (2, 5), (3, 2)] {
        for rule in small_rules(p) {
            for spec in constant_initials(&rule) {
                let report = check_relprime_invariance(&spec, n, 8, &ScanPolicy::default()).unwrap();
                assert!(report.passed(), "p={p} n={n} rule {}", rule.to_text());
            }
        }
    }
}

#[test]
fn squaring_doubles_the_general_order() {
    let pascal = AutomatonSpec::parse(2, "11", "1").unwrap();
    let seq = line_complexity(&pascal, 200, &ScanPolicy::default());
    let rec = fit_general_order(&seq, 4).unwrap().unwrap();
    assert_eq!(rec.order, 1);
    assert!(recheck(&seq, &rec));

    let squared = pascal.rule_power(2);
    let seq2 = line_complexity(&squared, 200, &ScanPolicy::default());
    let rec2 = fit_general_order(&seq2, 4).unwrap().unwrap();
    assert_eq!(rec2.order, power_order(&rec, 2));
    assert_eq!(power_order(&rec, 3), 1);
}
