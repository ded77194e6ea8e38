//! Exact verification of the congruence mechanisms behind `B_3` and `B_5`:
//! Hecke eigenform relations, Newman recurrences for `f_1 f_3` and
//! `f_1^3 f_5`, the theorem-family suites, and arithmetic density scans.
//!
//! The two eta streams in play are
//!
//! ```text
//!   eta^4(6z) = q (q^6;q^6)^4 = sum a(n) q^n   (weight 2, support 1 mod 6)
//!   eta^8(3z) = q (q^3;q^3)^8 = sum b(n) q^n   (weight 4, support 1 mod 3)
//! ```
//!
//! with `B_3(n) = a(6n+1) mod 3` and `B_5(n) = b(3n+1) mod 5`, plus the
//! weight-one-style products `f_1 f_3 = sum c(n) q^n` and
//! `f_1^3 f_5 = sum t(n) q^n` feeding Newman's recurrence.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{is_prime, jacobi, pow_mod};
use crate::partitions::bipartition_coeffs;
use crate::series::{SeriesRing, TruncatedSeries};
use crate::{Error, Rational, Result};

/// Cap on how many series coefficients a family scan may request.
pub const FAMILY_COEFF_CAP: u64 = 10_000_000;

// ---------------------------------------------------------------------------
// Coefficient streams
// ---------------------------------------------------------------------------

/// `eta^4(6z) = q (q^6; q^6)_inf^4`, indexed at its natural q-degrees.
pub fn eta4_of_6z(ring: &SeriesRing) -> TruncatedSeries {
    ring.euler_product(6, 4).shift_up(1)
}

/// `eta^8(3z) = q (q^3; q^3)_inf^8`.
pub fn eta8_of_3z(ring: &SeriesRing) -> TruncatedSeries {
    ring.euler_product(3, 8).shift_up(1)
}

/// `f_1 f_3 = sum c(n) q^n`.
pub fn f1f3(ring: &SeriesRing) -> TruncatedSeries {
    ring.euler_product(1, 1).mul(&ring.euler_product(3, 1)).expect("same ring")
}

/// `f_1^3 f_5 = sum t(n) q^n`.
pub fn f1_cubed_f5(ring: &SeriesRing) -> TruncatedSeries {
    ring.euler_product(1, 3).mul(&ring.euler_product(5, 1)).expect("same ring")
}

// ---------------------------------------------------------------------------
// Hecke operators
// ---------------------------------------------------------------------------

/// Apply `T_q` to an exact coefficient stream: the output coefficient at `n`
/// is `a(qn) + chi_q * q^{k-1} * a(n/q)`, the second term present only when
/// `q | n`. The result is truncated where `qn` leaves the input range.
pub fn hecke_apply(a: &TruncatedSeries, q: u64, weight: u32, chi_q: i8) -> TruncatedSeries {
    let coeffs = a.int_coeffs().expect("hecke_apply needs an exact ring");
    let t = a.truncation();
    let t_out = t.div_ceil(q as usize);
    let ring = SeriesRing::exact(t_out.max(1));
    let qk = BigInt::from(q).pow(weight.saturating_sub(1));
    let chi = BigInt::from(chi_q);
    let mut out = ring.zero();
    for n in 0..t_out {
        let mut value = coeffs[n * q as usize].clone();
        if n % q as usize == 0 {
            value += &chi * &qk * &coeffs[n / q as usize];
        }
        out.set_coeff_internal(n, value);
    }
    out
}

/// Outcome of an eigenform check on one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeReport {
    pub series_id: String,
    pub q: u64,
    pub weight: u32,
    pub chi_q: i8,
    /// The eigenvalue `lambda(q) = a(q)`.
    pub lambda: BigInt,
    /// First `n` where `a(qn) + chi q^{k-1} a(n/q) != lambda a(n)`, if any.
    pub violation: Option<HeckeViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeViolation {
    pub n: u64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Check `a(qn) + chi_q q^{k-1} a(n/q) = lambda(q) a(n)` for all `qn` below
/// the stream's truncation, with `lambda(q) := a(q)`. Requires `a(1) = 1`.
pub fn check_eigenform(
    series_id: &str,
    a: &TruncatedSeries,
    q: u64,
    weight: u32,
    chi_q: i8,
) -> HeckeReport {
    let coeffs = a.int_coeffs().expect("check_eigenform needs an exact ring");
    assert!(coeffs.len() > 1 && coeffs[1].is_one(), "stream must be normalized: a(1) = 1");
    let t = coeffs.len();
    let lambda = coeffs.get(q as usize).cloned().unwrap_or_else(BigInt::zero);
    let qk = BigInt::from(q).pow(weight.saturating_sub(1));
    let chi = BigInt::from(chi_q);
    let mut violation = None;
    for n in 0..t.div_ceil(q as usize) {
        if n * (q as usize) >= t {
            break;
        }
        let mut lhs = coeffs[n * q as usize].clone();
        if n % q as usize == 0 {
            lhs += &chi * &qk * &coeffs[n / q as usize];
        }
        let rhs = &lambda * &coeffs[n];
        if lhs != rhs {
            violation = Some(HeckeViolation { n: n as u64, lhs, rhs });
            break;
        }
    }
    HeckeReport { series_id: series_id.to_string(), q, weight, chi_q, lambda, violation }
}

// ---------------------------------------------------------------------------
// Family reports
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Parameters violate the theorem's side conditions (wrong residue
    /// class, `j = 0 mod p`, failed divisibility hypothesis, ...).
    Inapplicable,
}

/// First index where a family congruence fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyWitness {
    pub n: u64,
    /// The argument of `B_l` (or of the Newman stream) that misbehaved.
    pub index: u64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Scan result for one congruence family instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub family: String,
    pub parameters: String,
    pub modulus: u64,
    pub n_max: u64,
    pub verdict: Verdict,
    pub note: Option<String>,
    pub counterexample: Option<FamilyWitness>,
}

impl FamilyReport {
    fn inapplicable(family: &str, parameters: String, modulus: u64, note: String) -> FamilyReport {
        FamilyReport {
            family: family.into(),
            parameters,
            modulus,
            n_max: 0,
            verdict: Verdict::Inapplicable,
            note: Some(note),
            counterexample: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Newman recurrences
// ---------------------------------------------------------------------------

/// Which Newman product to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewmanKind {
    /// `f_1 f_3`: `c(pn + (p-1)/6) = c((p-1)/6) c(n)
    ///            - (-1)^{(p-1)/2} (3/p) c(n/p - (p-1)/(6p))`.
    F1F3,
    /// `f_1^3 f_5`: `t(pn + (p-1)/3) = t((p-1)/3) t(n)
    ///             - (5/p) p t(n/p - (p-1)/(3p))`.
    F1CubedF5,
}

/// Verify the exact integer recurrence for one prime `p = 1 mod 6`, over all
/// `n` with `pn + e` inside the truncation `t_order`.
pub fn newman_check(kind: NewmanKind, p: u64, t_order: usize) -> FamilyReport {
    let (family, offset_div) = match kind {
        NewmanKind::F1F3 => ("newman-f1f3", 6),
        NewmanKind::F1CubedF5 => ("newman-f1^3f5", 3),
    };
    let parameters = format!("p={p}, T={t_order}");
    if !is_prime(p) || p % 6 != 1 {
        return FamilyReport::inapplicable(
            family,
            parameters,
            0,
            format!("p = {p} is not a prime congruent to 1 mod 6"),
        );
    }
    let ring = SeriesRing::exact(t_order);
    let stream = match kind {
        NewmanKind::F1F3 => f1f3(&ring),
        NewmanKind::F1CubedF5 => f1_cubed_f5(&ring),
    };
    let coeffs = stream.int_coeffs().expect("exact ring");
    let e = ((p - 1) / offset_div) as usize;
    let pu = p as usize;
    // Multiplier of the wraparound term.
    let tail_factor = match kind {
        NewmanKind::F1F3 => {
            let sign = if ((p - 1) / 2).is_multiple_of(2) { 1i64 } else { -1 };
            BigInt::from(sign * jacobi(3, p as i128).expect("odd prime") as i64)
        }
        NewmanKind::F1CubedF5 => {
            BigInt::from(jacobi(5, p as i128).expect("odd prime") as i64) * BigInt::from(p)
        }
    };
    let head = coeffs[e].clone();
    let mut n = 0usize;
    let mut witness = None;
    let mut checked = 0u64;
    while pu * n + e < t_order {
        let lhs = coeffs[pu * n + e].clone();
        let mut rhs = &head * &coeffs[n];
        // c(n/p - e/p) contributes only at non-negative integral arguments,
        // i.e. when p | n - e and n >= e.
        if n >= e && (n - e).is_multiple_of(pu) {
            rhs -= &tail_factor * &coeffs[(n - e) / pu];
        }
        if lhs != rhs {
            witness = Some(FamilyWitness {
                n: n as u64,
                index: (pu * n + e) as u64,
                lhs,
                rhs,
            });
            break;
        }
        checked = n as u64;
        n += 1;
    }
    FamilyReport {
        family: family.into(),
        parameters,
        modulus: 0,
        n_max: checked,
        verdict: if witness.is_none() { Verdict::Pass } else { Verdict::Fail },
        note: None,
        counterexample: witness,
    }
}

/// Primes `p = 1 mod 6` up to `bound` satisfying the Newman divisibility
/// hypothesis: `B_3((p-1)/6) = 0 mod 3` for [`NewmanKind::F1F3`] and
/// `B_5((p-1)/3) = 0 mod 5` for [`NewmanKind::F1CubedF5`].
pub fn qualifying_newman_primes(kind: NewmanKind, bound: u64) -> Vec<u64> {
    let (ell, modulus, div) = match kind {
        NewmanKind::F1F3 => (3u64, 3u64, 6u64),
        NewmanKind::F1CubedF5 => (5, 5, 3),
    };
    let t = (bound / div + 2) as usize;
    let ring = SeriesRing::modular(t, modulus);
    let stream = bipartition_coeffs(ell, &ring);
    (7..=bound)
        .filter(|&p| p % 6 == 1 && is_prime(p))
        .filter(|&p| stream.coeff_u64(((p - 1) / div) as usize) == Some(0))
        .collect()
}

// ---------------------------------------------------------------------------
// Theorem families
// ---------------------------------------------------------------------------

/// A congruence family instance from the `B_3`/`B_5` suites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `B_3(P^2 n + (Q p_last (6j + p_last) - 1)/6) = 0 mod 3` for distinct
    /// primes `>= 5`, all `= 5 mod 6`, `j != 0 mod p_last`.
    Thm8 { primes: Vec<u64>, j: u64 },
    /// `B_3(p^{2k+2} n + p^{2k+1} j + (p^{2k+2}-1)/6) = 0 mod 3`.
    Coro3 { p: u64, k: u32, j: u64 },
    /// `B_3(p^{2k+1} n + (p^{2k+1}-1)/6) = 0 mod 3` when `p` divides
    /// neither `6n+1` nor the hypothesis value `B_3((p-1)/6) mod 3`.
    Newman1 { p: u64, k: u32 },
    /// `B_3(p^{k+1} n + pr + (5p-1)/6) = (-p) B_3(p^{k-1} n + (6r+5-p)/6p) mod 3`.
    Thm9 { p: u64, k: u32, r: u64 },
    /// `B_3(p^{2k} n + (p^{2k}-1)/6) = (-p)^k B_3(n) mod 3`.
    Coro4 { p: u64, k: u32 },
    /// `B_5` analogue of Thm8 with `/3` progressions, primes `= 2 mod 3`.
    Thm10 { primes: Vec<u64>, j: u64 },
    /// `B_5(p^{2k+2} n + p^{2k+1} j + (p^{2k+2}-1)/3) = 0 mod 5`.
    Coro5 { p: u64, k: u32, j: u64 },
    /// `B_5(p^{2k+1} n + (p^{2k+1}-1)/3) = 0 mod 5` under the hypothesis
    /// `B_5((p-1)/3) = 0 mod 5`, skipping `p | 3n+1`.
    Newman2 { p: u64, k: u32 },
    /// `B_5(p^{k+1} n + pr + (2p-1)/3) = (-p^3) B_5(p^{k-1} n + (3r+2-p)/3p) mod 5`.
    Thm11 { p: u64, k: u32, r: u64 },
    /// `B_5(p^{2k} n + (p^{2k}-1)/3) = (-p^3)^k B_5(n) mod 5`.
    Coro6 { p: u64, k: u32 },
}

impl Family {
    pub fn id(&self) -> &'static str {
        match self {
            Family::Thm8 { .. } => "thm8",
            Family::Coro3 { .. } => "coro3",
            Family::Newman1 { .. } => "newmann1",
            Family::Thm9 { .. } => "thm9",
            Family::Coro4 { .. } => "coro4",
            Family::Thm10 { .. } => "thm10",
            Family::Coro5 { .. } => "coro5",
            Family::Newman2 { .. } => "newmann2",
            Family::Thm11 { .. } => "thm11",
            Family::Coro6 { .. } => "coro6",
        }
    }

    fn parameters(&self) -> String {
        match self {
            Family::Thm8 { primes, j } | Family::Thm10 { primes, j } => {
                format!("primes={primes:?}, j={j}")
            }
            Family::Coro3 { p, k, j } | Family::Coro5 { p, k, j } => {
                format!("p={p}, k={k}, j={j}")
            }
            Family::Newman1 { p, k } | Family::Newman2 { p, k } => format!("p={p}, k={k}"),
            Family::Thm9 { p, k, r } | Family::Thm11 { p, k, r } => {
                format!("p={p}, k={k}, r={r}")
            }
            Family::Coro4 { p, k } | Family::Coro6 { p, k } => format!("p={p}, k={k}"),
        }
    }
}

fn pow_u128(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

/// Index arithmetic of one progression, `None` on overflow.
type IndexFn = Box<dyn Fn(u64) -> Option<u128>>;

/// One scanned congruence: `B(lhs_index(n)) = multiplier * B(rhs_index(n))
/// mod modulus`, where `rhs` is `None` for vanishing families.
struct ScanPlan {
    modulus: u64,
    lhs_index: IndexFn,
    rhs: Option<(u64, IndexFn)>,
    skip: Box<dyn Fn(u64) -> bool>,
}

/// Scan a family instance for `n = 0..=n_max`.
///
/// Parameter validation failures yield an `Inapplicable` report rather than
/// an error; only resource exhaustion is an `Err`.
pub fn verify_family(family: &Family, n_max: u64) -> Result<FamilyReport> {
    let parameters = family.parameters();
    let id = family.id();
    let plan = match plan_family(family) {
        Ok(plan) => plan,
        Err(note) => {
            return Ok(FamilyReport::inapplicable(id, parameters, family_modulus(family), note))
        }
    };

    // Work out how many coefficients the scan needs.
    let mut t_needed: u128 = 0;
    for n in [0, n_max] {
        if let Some(idx) = (plan.lhs_index)(n) {
            t_needed = t_needed.max(idx + 1);
        }
        if let Some((_, f)) = &plan.rhs {
            if let Some(idx) = f(n) {
                t_needed = t_needed.max(idx + 1);
            }
        }
    }
    if t_needed > FAMILY_COEFF_CAP as u128 {
        return Err(Error::ResourceCap { needed: t_needed.min(u64::MAX as u128) as u64, cap: FAMILY_COEFF_CAP });
    }

    let ell = if plan.modulus == 3 { 3 } else { 5 };
    let ring = SeriesRing::modular(t_needed as usize, plan.modulus);
    let stream = bipartition_coeffs(ell, &ring);
    let coeffs = stream.series().word_coeffs().expect("modular ring");

    let mut counterexample = None;
    for n in 0..=n_max {
        if (plan.skip)(n) {
            continue;
        }
        let lhs_idx = match (plan.lhs_index)(n) {
            Some(i) => i as usize,
            None => continue,
        };
        let lhs = coeffs[lhs_idx];
        let rhs = match &plan.rhs {
            None => 0,
            Some((mult, f)) => {
                let idx = f(n).expect("rhs index fits once lhs does") as usize;
                mult * coeffs[idx] % plan.modulus
            }
        };
        if lhs != rhs {
            counterexample = Some(FamilyWitness {
                n,
                index: lhs_idx as u64,
                lhs: BigInt::from(lhs),
                rhs: BigInt::from(rhs),
            });
            break;
        }
    }

    Ok(FamilyReport {
        family: id.into(),
        parameters,
        modulus: plan.modulus,
        n_max,
        verdict: if counterexample.is_none() { Verdict::Pass } else { Verdict::Fail },
        note: None,
        counterexample,
    })
}

fn family_modulus(family: &Family) -> u64 {
    match family {
        Family::Thm8 { .. }
        | Family::Coro3 { .. }
        | Family::Newman1 { .. }
        | Family::Thm9 { .. }
        | Family::Coro4 { .. } => 3,
        _ => 5,
    }
}

/// Validate side conditions and compile the index arithmetic for a family.
fn plan_family(family: &Family) -> std::result::Result<ScanPlan, String> {
    let no_skip: Box<dyn Fn(u64) -> bool> = Box::new(|_| false);
    match family {
        Family::Thm8 { primes, j } | Family::Thm10 { primes, j } => {
            let (modulus, step, class) = if matches!(family, Family::Thm8 { .. }) {
                (3u64, 6u64, "5 mod 6")
            } else {
                (5, 3, "2 mod 3")
            };
            if primes.is_empty() {
                return Err("need at least one prime".into());
            }
            let mut seen = std::collections::BTreeSet::new();
            for &p in primes {
                if !is_prime(p) {
                    return Err(format!("{p} is not prime"));
                }
                let ok = if modulus == 3 { p >= 5 && p % 6 == 5 } else { p % 3 == 2 };
                if !ok {
                    return Err(format!("{p} is not congruent to {class}"));
                }
                if !seen.insert(p) {
                    return Err(format!("repeated prime {p}"));
                }
            }
            let p_last = *primes.last().unwrap();
            if j % p_last == 0 {
                return Err(format!("j = {j} vanishes mod p_{{k+1}} = {p_last}"));
            }
            let lead: u128 = primes.iter().map(|&p| p as u128 * p as u128).product();
            let head: u128 = primes[..primes.len() - 1]
                .iter()
                .map(|&p| p as u128 * p as u128)
                .product();
            let off_num = head * p_last as u128 * (step as u128 * *j as u128 + p_last as u128) - 1;
            if !off_num.is_multiple_of(step as u128) {
                return Err("offset is not integral".into());
            }
            let offset = off_num / step as u128;
            Ok(ScanPlan {
                modulus,
                lhs_index: Box::new(move |n| lead.checked_mul(n as u128)?.checked_add(offset)),
                rhs: None,
                skip: no_skip,
            })
        }
        Family::Coro3 { p, k, j } | Family::Coro5 { p, k, j } => {
            let (modulus, step) = if matches!(family, Family::Coro3 { .. }) { (3u64, 6u64) } else { (5, 3) };
            validate_prime_class(*p, modulus)?;
            if j % p == 0 {
                return Err(format!("j = {j} vanishes mod p = {p}"));
            }
            let lead = pow_u128(*p, 2 * k + 2).ok_or("p^{2k+2} overflows")?;
            let inner = pow_u128(*p, 2 * k + 1).ok_or("overflow")?;
            let offset = inner * *j as u128 + (lead - 1) / step as u128;
            Ok(ScanPlan {
                modulus,
                lhs_index: Box::new(move |n| lead.checked_mul(n as u128)?.checked_add(offset)),
                rhs: None,
                skip: no_skip,
            })
        }
        Family::Newman1 { p, k } | Family::Newman2 { p, k } => {
            let (modulus, step) = if matches!(family, Family::Newman1 { .. }) { (3u64, 6u64) } else { (5, 3) };
            if !is_prime(*p) || p % 6 != 1 {
                return Err(format!("p = {p} is not a prime congruent to 1 mod 6"));
            }
            let hyp_index = ((p - 1) / step) as usize;
            let ell = if modulus == 3 { 3 } else { 5 };
            let ring = SeriesRing::modular(hyp_index + 1, modulus);
            let hyp = bipartition_coeffs(ell, &ring).coeff_u64(hyp_index).unwrap();
            if hyp != 0 {
                return Err(format!(
                    "hypothesis fails: B_{ell}(({p}-1)/{step}) = {hyp} mod {modulus}"
                ));
            }
            let lead = pow_u128(*p, 2 * k + 1).ok_or("p^{2k+1} overflows")?;
            let offset = (lead - 1) / step as u128;
            let p_skip = *p;
            let step_skip = step;
            Ok(ScanPlan {
                modulus,
                lhs_index: Box::new(move |n| lead.checked_mul(n as u128)?.checked_add(offset)),
                rhs: None,
                skip: Box::new(move |n| (step_skip as u128 * n as u128 + 1).is_multiple_of(p_skip as u128)),
            })
        }
        Family::Thm9 { p, k, r } | Family::Thm11 { p, k, r } => {
            let (modulus, step, cube) = if matches!(family, Family::Thm9 { .. }) {
                (3u64, 6u64, false)
            } else {
                (5, 3, true)
            };
            validate_prime_class(*p, modulus)?;
            if *k == 0 {
                return Err("k must be positive".into());
            }
            if (step * r + step - 1) % p != 0 {
                return Err(format!("p = {p} must divide {step}r + {}", step - 1));
            }
            let lead = pow_u128(*p, k + 1).ok_or("p^{k+1} overflows")?;
            let inner = pow_u128(*p, k - 1).ok_or("overflow")?;
            // (5p-1)/6, resp. (2p-1)/3; integral in the validated classes.
            let off_l_num = (step - 1) as u128 * *p as u128 - 1;
            let off_r_num = step as u128 * *r as u128 + (step - 1) as u128 - *p as u128;
            if !off_l_num.is_multiple_of(step as u128) || !off_r_num.is_multiple_of(step as u128 * *p as u128) {
                return Err("progression offsets are not integral".into());
            }
            let off_l = off_l_num / step as u128;
            let off_r = off_r_num / (step as u128 * *p as u128);
            let offset_l = *r as u128 * *p as u128 + off_l;
            let mult = {
                let pm = p % modulus;
                let base = (modulus - pm % modulus) % modulus; // -p mod modulus
                if cube {
                    pow_mod(base, 3, modulus)
                } else {
                    base
                }
            };
            Ok(ScanPlan {
                modulus,
                lhs_index: Box::new(move |n| lead.checked_mul(n as u128)?.checked_add(offset_l)),
                rhs: Some((
                    mult,
                    Box::new(move |n| inner.checked_mul(n as u128)?.checked_add(off_r)),
                )),
                skip: no_skip,
            })
        }
        Family::Coro4 { p, k } | Family::Coro6 { p, k } => {
            let (modulus, step, cube) = if matches!(family, Family::Coro4 { .. }) {
                (3u64, 6u64, false)
            } else {
                (5, 3, true)
            };
            validate_prime_class(*p, modulus)?;
            if *k == 0 {
                return Err("k must be positive".into());
            }
            let lead = pow_u128(*p, 2 * k).ok_or("p^{2k} overflows")?;
            let offset = (lead - 1) / step as u128;
            let mult = {
                let pm = p % modulus;
                let base = (modulus - pm % modulus) % modulus;
                let exponent = if cube { 3 * *k as u64 } else { *k as u64 };
                pow_mod(base, exponent, modulus)
            };
            Ok(ScanPlan {
                modulus,
                lhs_index: Box::new(move |n| lead.checked_mul(n as u128)?.checked_add(offset)),
                rhs: Some((mult, Box::new(move |n| Some(n as u128)))),
                skip: no_skip,
            })
        }
    }
}

fn validate_prime_class(p: u64, modulus: u64) -> std::result::Result<(), String> {
    if !is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    if modulus == 3 {
        if p < 5 || p % 6 != 5 {
            return Err(format!("{p} is not a prime >= 5 congruent to 5 mod 6"));
        }
    } else if p % 3 != 2 {
        return Err(format!("{p} is not congruent to 2 mod 3"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Density scans
// ---------------------------------------------------------------------------

/// Divisibility statistics at one checkpoint `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityPoint {
    pub x: u64,
    /// How many `1 <= n <= X` have `B_l(n) = 0 mod p^j`.
    pub divisible: u64,
    pub fraction: Rational,
}

/// Whether the eta-quotient argument applies: `p^{2 ord_p(l)} >= l`.
pub fn density_hypothesis(ell: u64, p: u64) -> bool {
    let a = crate::arith::p_adic_valuation(ell, p).unwrap_or(0);
    match (p as u128).checked_pow(2 * a) {
        Some(v) => v >= ell as u128,
        None => true,
    }
}

/// Fraction of `1 <= n <= X` with `B_l(n) = 0 mod p^j`, evaluated at each
/// checkpoint from one series pass mod `p^j`. Checkpoints come from
/// `x_list`, optionally densified every `stride`; zero entries are dropped.
pub fn density_scan(
    ell: u64,
    p: u64,
    j: u32,
    x_list: &[u64],
    stride: Option<u64>,
    cap: u64,
) -> Result<Vec<DensityPoint>> {
    let modulus = p
        .checked_pow(j)
        .filter(|&m| m >= 2)
        .ok_or_else(|| Error::InvalidFactorization(format!("p^j = {p}^{j} overflows")))?;
    let mut checkpoints: Vec<u64> = x_list.iter().copied().filter(|&x| x > 0).collect();
    let x_max = checkpoints.iter().copied().max().unwrap_or(0);
    if let Some(last) = stride.and_then(|s| x_max.checked_div(s)) {
        let s = stride.unwrap();
        checkpoints.extend((1..=last).map(|i| i * s));
    }
    checkpoints.sort_unstable();
    checkpoints.dedup();
    if checkpoints.is_empty() {
        return Ok(Vec::new());
    }
    let needed = x_max + 1;
    if needed > cap {
        return Err(Error::ResourceCap { needed, cap });
    }
    let ring = SeriesRing::modular(needed as usize, modulus);
    let stream = bipartition_coeffs(ell, &ring);
    let coeffs = stream.series().word_coeffs().expect("modular ring");
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut divisible = 0u64;
    let mut n = 1usize;
    for &x in &checkpoints {
        while n <= x as usize {
            if coeffs[n] == 0 {
                divisible += 1;
            }
            n += 1;
        }
        out.push(DensityPoint {
            x,
            divisible,
            fraction: Rational::new(divisible as i128, x as i128),
        });
    }
    Ok(out)
}
