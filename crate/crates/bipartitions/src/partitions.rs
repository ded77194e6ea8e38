//! Generating functions for `l`-regular partitions and bipartitions, plus a
//! brute-force enumeration oracle that shares no code with the series path.
//!
//! `b_l(n)` counts partitions of `n` with no part divisible by `l` and has
//! generating function `f_l / f_1`; the bipartition count `B_l(n)` is the
//! coefficient of `q^n` in `f_l^2 / f_1^2`.

use crate::series::{SeriesRing, TruncatedSeries};
use crate::{Error, Result};

/// Hard ceiling for the enumeration oracle; beyond it only the series path
/// exists.
pub const ENUMERATION_CAP: u64 = 40;

/// The `B_l(n)` coefficient stream in a fixed ring.
#[derive(Clone, Debug)]
pub struct BipartitionStream {
    ell: u64,
    series: TruncatedSeries,
}

impl BipartitionStream {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    /// `B_l(n)` reduced into the ring, as a word residue when available.
    pub fn coeff_u64(&self, n: usize) -> Option<u64> {
        self.series.coeff_u64(n)
    }
}

/// Coefficients of `f_l^2 / f_1^2` truncated at the ring's order.
///
/// Computed as `(q^l; q^l)_inf^2` divided twice by the pentagonally sparse
/// `(q; q)_inf`, so a run to `T = 10^6` stays in `O(T sqrt(T))`.
pub fn bipartition_coeffs(ell: u64, ring: &SeriesRing) -> BipartitionStream {
    assert!(ell >= 2, "l must be at least 2");
    let numerator = ring.euler_product(ell, 2);
    let f1 = ring.euler_product(1, 1);
    let series = numerator
        .div(&f1)
        .and_then(|s| s.div(&f1))
        .expect("(q;q)_inf has constant term 1");
    BipartitionStream { ell, series }
}

/// Coefficients of `f_l / f_1`, i.e. the `l`-regular partition counts.
pub fn regular_coeffs(ell: u64, ring: &SeriesRing) -> TruncatedSeries {
    assert!(ell >= 2, "l must be at least 2");
    ring.euler_product(ell, 1)
        .div(&ring.euler_product(1, 1))
        .expect("(q;q)_inf has constant term 1")
}

/// Exact `B_l(n)` by explicit recursive enumeration of partition pairs.
///
/// Every `l`-regular partition of each split is visited once, so the cost is
/// exponential in `n`; the [`ENUMERATION_CAP`] keeps calls desk-sized. This
/// is the trust anchor for the series path, not a throughput tool.
pub fn brute_force_bipartitions(ell: u64, n: u64) -> Result<u64> {
    assert!(ell >= 2, "l must be at least 2");
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap { n, cap: ENUMERATION_CAP });
    }
    let singles: Vec<u64> = (0..=n).map(|k| enumerate_regular(ell, k, k)).collect();
    Ok((0..=n).map(|k| singles[k as usize] * singles[(n - k) as usize]).sum())
}

/// Counts `l`-regular partitions of `n` with all parts `<= max_part` by
/// walking the recursion tree one partition at a time.
fn enumerate_regular(ell: u64, n: u64, max_part: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut count = 0;
    for part in (1..=max_part.min(n)).rev() {
        if part % ell == 0 {
            continue;
        }
        count += enumerate_regular(ell, n - part, part);
    }
    count
}
