use lclab_core::automaton::AutomatonSpec;
use lclab_core::complexity::{line_complexity, ComplexitySeq, ScanPolicy};
use lclab_core::genfun::{
    alpha_by_coeffrep, build_framework, build_p_t, eta_closed_form, framework_phi_check, framework_sequence_check,
    r_n, series_inverse, PtResult, RationalPoly,
};
use lclab_core::rational::{int, ratio, Rational};
use lclab_core::recursion::{verify_theorem_main, Flavor, RecursionSpec};
use proptest::prelude::*;

fn scanned(rule: &str, k_max: usize) -> (ComplexitySeq, RecursionSpec) {
    let spec = AutomatonSpec::parse(2, rule, "1").unwrap();
    let seq = line_complexity(&spec, k_max, &ScanPolicy::default());
    let rec = verify_theorem_main(&seq, spec.degree()).unwrap().spec().unwrap().clone();
    (seq, rec)
}

/// The even-n closed form of P, written out term by term.
fn even_n_closed_form(a: &[u64], n: usize, big_n: usize) -> RationalPoly {
    assert!(n % 2 == 0);
    let h = n / 2;
    let term = |k: usize, e: i64, c: i64| RationalPoly::monomial(int(c * a[k] as i64), 2 * k as i64 + e);
    let mut p = RationalPoly::zero();
    for k in big_n..big_n + h {
        p = p.add(&term(k, 0, 2));
    }
    for k in big_n + h..2 * big_n {
        p = p.add(&term(k, 0, 2)).add(&term(k, -(n as i64), 2));
    }
    for k in big_n + 1..2 * big_n {
        p = p.add(&term(k, 1, 1)).add(&term(k, -1, 1));
    }
    for k in big_n + h + 1..2 * big_n {
        p = p.add(&term(k, 1 - n as i64, 1)).add(&term(k, -1 - n as i64, 1));
    }
    p.add(&RationalPoly::monomial(int((a[big_n] + a[big_n + h]) as i64), 2 * big_n as i64 + 1))
}

/// a(k) generated forward from the parity displays with the given head.
fn generated(n: usize, c: i64, head: &[u64], len: usize) -> Vec<u64> {
    let (fl, ce) = (n / 2, n.div_ceil(2));
    let mut v: Vec<i64> = head.iter().map(|&x| x as i64).collect();
    for k in head.len()..len {
        let h = k / 2;
        let x = if k % 2 == 0 {
            2 * v[h] + v[h + fl] + v[h + ce] + c
        } else {
            v[h] + v[h + 1] + v[h + ce] + v[h + fl + 1] + c
        };
        v.push(x);
    }
    v.into_iter().map(|x| x as u64).collect()
}

#[test]
fn f3_pipeline() {
    let (seq, rec) = scanned("1101", 300);
    assert_eq!((rec.constant, rec.threshold), (-13, 5));
    let pt = build_p_t(&seq, &rec).unwrap();
    let (lo, hi) = pt.support();
    assert!(pt.p_t.low_degree().unwrap() >= lo && pt.p_t.degree().unwrap() <= hi);
    let fw = build_framework(&seq, &rec).unwrap();
    assert!(fw.r.coeff(0) == Rational::from_integer(0.into()));
    assert_eq!(fw.r.eval(&int(1)), int(0));
    assert_eq!(fw.c, ratio(1, 6));
    let m = fw.degree();
    for k in m..m + 64 {
        assert_eq!(alpha_by_coeffrep(&fw, k).unwrap(), int(seq.get(k + 4) as i64), "k = {k}");
    }
    assert!(framework_phi_check(&fw, 200).unwrap());
    assert!(framework_sequence_check(&fw, &seq).unwrap());
}

#[test]
fn f4_matches_even_closed_form() {
    let (seq, rec) = scanned("11001", 300);
    let pt = build_p_t(&seq, &rec).unwrap();
    assert_eq!(pt.p_t, even_n_closed_form(seq.values(), 4, rec.threshold));
    let fw = build_framework(&seq, &rec).unwrap();
    let m = fw.degree();
    for k in m..m + 64 {
        assert_eq!(alpha_by_coeffrep(&fw, k).unwrap(), int(seq.get(k + 5) as i64), "k = {k}");
    }
    assert!(framework_phi_check(&fw, 200).unwrap());
}

#[test]
fn synthetic_even_sequences_match_closed_form() {
    let spec = AutomatonSpec::parse(2, "101", "1").unwrap();
    for (n, c, big_n) in [(2, -5, 3), (4, 7, 4), (6, -2, 5)] {
        let head: Vec<u64> = (0..2 * big_n as u64).map(|i| 3 + i * i).collect();
        let seq = ComplexitySeq::from_values(spec.clone(), generated(n, c, &head, 160));
        let rec = RecursionSpec {
            p: 2,
            order: n,
            constant: c,
            threshold: big_n,
            verified_to: 70,
            flavor: Flavor::TheoremMainEvenOdd,
        };
        let pt: PtResult = build_p_t(&seq, &rec).unwrap();
        assert_eq!(pt.p_t, even_n_closed_form(seq.values(), n, big_n), "n = {n}");
    }
}

#[test]
fn zero_tail_leaves_head_polynomial() {
    let spec = AutomatonSpec::parse(2, "11", "1").unwrap();
    let mut v = vec![0u64; 60];
    v[..4].copy_from_slice(&[1, 2, 4, 8]);
    let seq = ComplexitySeq::from_values(spec, v);
    let rec =
        RecursionSpec { p: 2, order: 1, constant: 0, threshold: 2, verified_to: 29, flavor: Flavor::TheoremMainEvenOdd };
    let pt = build_p_t(&seq, &rec).unwrap();
    assert!(pt.p_t.is_zero());
}

#[test]
fn eta_matches_series_inverse() {
    for n in 1..=6 {
        let s = series_inverse(&r_n(n), 120).unwrap();
        for k in 0..=120 {
            assert_eq!(eta_closed_form(n, k), s.coeff(k));
        }
    }
}

proptest! {
    /// `η(k) − k²/(2n) = k/2 + k/n + 1 + s(n−2−s)/(2n)` with `s = k mod n`.
    #[test]
    fn eta_stays_near_quadratic(n in 1usize..12, k in 0usize..5000) {
        let gap = eta_closed_form(n, k) - ratio((k * k) as i64, 2 * n as i64);
        let linear = ratio(k as i64, 2) + ratio(k as i64, n as i64) + int(1);
        prop_assert!(gap > int(0));
        prop_assert!(gap <= linear + ratio(n as i64, 8));
    }
}
