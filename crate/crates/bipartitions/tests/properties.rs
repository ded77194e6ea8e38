//! Randomized algebra invariants for the series engine.

use bipartitions::series::{SeriesRing, TruncatedSeries};
use proptest::prelude::*;

const T: usize = 48;

/// Random series over Z/m with a unit constant term.
fn unit_series(m: u64) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(0i64..m as i64, T - 1).prop_map(move |tail| {
        let ring = SeriesRing::modular(T, m);
        let mut coeffs = vec![1i64];
        coeffs.extend(tail);
        ring.from_coeffs(&coeffs)
    })
}

fn any_series(m: u64) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(0i64..m as i64, T).prop_map(move |coeffs| {
        let ring = SeriesRing::modular(T, m);
        ring.from_coeffs(&coeffs)
    })
}

fn exact_series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(-40i64..=40, T).prop_map(|coeffs| {
        let ring = SeriesRing::exact(T);
        ring.from_coeffs(&coeffs)
    })
}

proptest! {
    #[test]
    fn mul_commutes(x in any_series(97), y in any_series(97)) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
    }

    #[test]
    fn mul_associates(x in any_series(25), y in any_series(25), z in any_series(25)) {
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn mul_distributes_exact(x in exact_series(), y in exact_series(), z in exact_series()) {
        let left = x.mul(&y.add(&z).unwrap()).unwrap();
        let right = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn invert_is_two_sided(x in unit_series(97)) {
        let ring = x.ring().clone();
        let inv = x.invert().unwrap();
        prop_assert_eq!(x.mul(&inv).unwrap(), ring.one());
        prop_assert_eq!(inv.mul(&x).unwrap(), ring.one());
    }

    #[test]
    fn newton_matches_schoolbook(x in unit_series(243)) {
        prop_assert_eq!(x.invert().unwrap(), x.invert_schoolbook().unwrap());
    }

    #[test]
    fn div_matches_mul_by_inverse(num in any_series(121), den in unit_series(121)) {
        let via_div = num.div(&den).unwrap();
        let via_inv = num.mul(&den.invert().unwrap()).unwrap();
        prop_assert_eq!(via_div, via_inv);
    }

    #[test]
    fn extract_ap_indexes_directly(
        x in any_series(1000),
        m in 1usize..8,
        t_off in 0usize..8,
    ) {
        let t = t_off.min(m - 1);
        let sub = x.extract_ap(m, t);
        for n in 0..sub.truncation() {
            prop_assert_eq!(sub.coeff(n), x.coeff(m * n + t));
        }
        // Every in-range source index is covered.
        prop_assert!(m * sub.truncation() + t >= x.truncation());
    }

    #[test]
    fn csv_and_json_roundtrip(x in exact_series()) {
        let ring = x.ring().clone();
        prop_assert_eq!(TruncatedSeries::from_csv(&ring, &x.to_csv()).unwrap(), x.clone());
        prop_assert_eq!(TruncatedSeries::from_json(&x.to_json()).unwrap(), x);
    }

    #[test]
    fn reduce_mod_is_ring_map(x in exact_series(), y in exact_series()) {
        // Reduction commutes with multiplication.
        let m = 13u64;
        let prod_then_reduce = x.mul(&y).unwrap().reduce_mod(m).unwrap();
        let reduce_then_prod = x.reduce_mod(m).unwrap().mul(&y.reduce_mod(m).unwrap()).unwrap();
        prop_assert_eq!(prod_then_reduce, reduce_then_prod);
    }

    #[test]
    fn pow_matches_repeated_mul(x in any_series(49), e in 0u64..6) {
        let ring = x.ring().clone();
        let mut expected = ring.one();
        for _ in 0..e {
            expected = expected.mul(&x).unwrap();
        }
        prop_assert_eq!(x.pow(e), expected);
    }
}
