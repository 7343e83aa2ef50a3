use lclab_core::{GfpPoly, PrimeModulus};
use proptest::prelude::*;

fn poly(p: u64) -> impl Strategy<Value = GfpPoly> {
    prop::collection::vec(0u32..p as u32, 1..12)
        .prop_map(move |c| GfpPoly::from_coeffs(PrimeModulus::new(p).unwrap(), &c))
        .prop_filter("nonzero", |t| !t.is_zero())
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn naive_pow(t: &GfpPoly, r: u64) -> GfpPoly {
    (0..r).fold(GfpPoly::one(t.modulus()), |acc, _| acc.mul(t).unwrap())
}

proptest! {
    #[test]
    fn pow_matches_repeated_products((t, r) in prime().prop_flat_map(|p| (poly(p), 0u64..40))) {
        prop_assert_eq!(t.pow(r), naive_pow(&t, r));
    }

    #[test]
    fn frobenius_spreads((a, b) in prime().prop_flat_map(|p| (poly(p), poly(p)))) {
        let p = a.modulus().get() as usize;
        let sum = a.add(&b).unwrap();
        let lhs = sum.pow(p as u64);
        let rhs = a.pow(p as u64).add(&b.pow(p as u64)).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs, sum.spread(p));
    }

    #[test]
    fn odd_and_even_parts_rebuild_the_rule(t in poly(2)) {
        let (o, e) = t.odd_even_parts().unwrap();
        prop_assert_eq!(o.coeff(0), 0);
        let rebuilt = o.spread(2).shift_down(1).add(&e.spread(2)).unwrap();
        prop_assert_eq!(rebuilt, t);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor((a, b) in prime().prop_flat_map(|p| (poly(p), poly(p)))) {
        let g = a.gcd(&b).unwrap();
        let shared = g.degree().unwrap() > 0;
        prop_assert_eq!(a.resultant(&b).unwrap() == 0, shared);
        prop_assert_eq!(a.resultant(&b).unwrap(), a.resultant_sylvester(&b).unwrap());
    }

    #[test]
    fn division_identity((a, b) in prime().prop_flat_map(|p| (poly(p), poly(p)))) {
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        prop_assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
    }
}
