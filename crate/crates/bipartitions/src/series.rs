//! Truncated formal power series in `q` over exact integers or `Z/M`.
//!
//! A [`SeriesRing`] fixes the truncation order `T` (series live in degrees
//! `0..T`) and the coefficient ring: `M = 0` means exact arbitrary-precision
//! integers, `M >= 2` means residues mod `M`. Word-sized moduli get dense
//! `u64` storage; exact and oversized moduli use `BigInt`.
//!
//! Multiplication and division are schoolbook but skip zero coefficients, so
//! products against Euler factors `(q^d; q^d)_inf` run in `O(T sqrt(T))` via
//! the pentagonal number theorem rather than `O(T^2)`. Inversion is Newton
//! doubling on top of that, with the direct recurrence kept as a fallback
//! and as the correctness oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Coefficient ring selector. `M = 0` is exact; word moduli are the fast path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Modulus {
    Exact,
    Word(u64),
    Big(BigInt),
}

impl Modulus {
    fn from_u64(m: u64) -> Modulus {
        assert!(m != 1, "modulus 1 is not a valid coefficient ring");
        if m == 0 {
            Modulus::Exact
        } else {
            Modulus::Word(m)
        }
    }
}

/// The ambient ring: truncation order plus coefficient modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    truncation: usize,
    modulus: Modulus,
}

impl SeriesRing {
    /// Ring of exact integer series truncated at degree `t`.
    pub fn exact(t: usize) -> SeriesRing {
        assert!(t >= 1, "truncation order must be at least 1");
        SeriesRing { truncation: t, modulus: Modulus::Exact }
    }

    /// Ring of series with coefficients in `Z/m` (`m = 0` selects exact).
    pub fn modular(t: usize, m: u64) -> SeriesRing {
        assert!(t >= 1, "truncation order must be at least 1");
        SeriesRing { truncation: t, modulus: Modulus::from_u64(m) }
    }

    /// Arbitrary-precision modulus (`m >= 2`).
    pub fn modular_big(t: usize, m: BigInt) -> SeriesRing {
        assert!(t >= 1, "truncation order must be at least 1");
        assert!(m >= BigInt::from(2), "modulus must be at least 2");
        match m.to_u64() {
            Some(w) => SeriesRing { truncation: t, modulus: Modulus::Word(w) },
            None => SeriesRing { truncation: t, modulus: Modulus::Big(m) },
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// The modulus as an integer, with 0 standing for "exact".
    pub fn modulus_int(&self) -> BigInt {
        match &self.modulus {
            Modulus::Exact => BigInt::zero(),
            Modulus::Word(m) => BigInt::from(*m),
            Modulus::Big(m) => m.clone(),
        }
    }

    fn with_truncation(&self, t: usize) -> SeriesRing {
        SeriesRing { truncation: t.max(1), modulus: self.modulus.clone() }
    }

    /// The zero series.
    pub fn zero(&self) -> TruncatedSeries {
        let data = match &self.modulus {
            Modulus::Word(_) => Data::Word(vec![0; self.truncation]),
            _ => Data::Int(vec![BigInt::zero(); self.truncation]),
        };
        TruncatedSeries { ring: self.clone(), data }
    }

    /// The constant series 1.
    pub fn one(&self) -> TruncatedSeries {
        self.monomial(0, 1)
    }

    /// The series `c * q^degree` (zero if `degree >= T`).
    pub fn monomial(&self, degree: usize, c: i64) -> TruncatedSeries {
        let mut s = self.zero();
        if degree < self.truncation {
            s.set_coeff(degree, &BigInt::from(c));
        }
        s
    }

    /// Series from the listed low-order coefficients (rest zero).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> TruncatedSeries {
        let mut s = self.zero();
        for (i, &c) in coeffs.iter().enumerate().take(self.truncation) {
            s.set_coeff(i, &BigInt::from(c));
        }
        s
    }

    /// The Euler product `(q^delta; q^delta)_inf ^ e`, truncated.
    ///
    /// For `e = 1` this is written down sparsely from the pentagonal number
    /// theorem: the coefficient at `delta * k(3k -/+ 1)/2` is `(-1)^k`. Other
    /// positive powers go through square-and-multiply; negative powers invert
    /// the base first (its constant term is 1, so this always succeeds).
    pub fn euler_product(&self, delta: u64, e: i64) -> TruncatedSeries {
        assert!(delta >= 1, "delta must be positive");
        if e == 0 {
            return self.one();
        }
        let base = self.euler_factor(delta);
        if e == 1 {
            return base;
        }
        if e > 1 {
            return base.pow(e as u64);
        }
        let inv = base.invert().expect("Euler factor has constant term 1");
        inv.pow((-e) as u64)
    }

    fn euler_factor(&self, delta: u64) -> TruncatedSeries {
        let mut s = self.zero();
        s.set_coeff(0, &BigInt::one());
        let t = self.truncation as u64;
        let minus_one = BigInt::from(-1);
        let one = BigInt::one();
        let mut k = 1u64;
        loop {
            let g1 = delta.checked_mul(k * (3 * k - 1) / 2);
            let g2 = delta.checked_mul(k * (3 * k + 1) / 2);
            let sign = if k % 2 == 1 { &minus_one } else { &one };
            let mut wrote = false;
            if let Some(d) = g1 {
                if d < t {
                    s.set_coeff(d as usize, sign);
                    wrote = true;
                }
            }
            if let Some(d) = g2 {
                if d < t {
                    s.set_coeff(d as usize, sign);
                    wrote = true;
                }
            }
            if !wrote {
                break;
            }
            k += 1;
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Data {
    Int(Vec<BigInt>),
    Word(Vec<u64>),
}

/// A formal power series truncated at the ring's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: SeriesRing,
    data: Data,
}

impl TruncatedSeries {
    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn truncation(&self) -> usize {
        self.ring.truncation
    }

    /// Coefficient at degree `n` as a `BigInt` (zero beyond the truncation).
    pub fn coeff(&self, n: usize) -> BigInt {
        if n >= self.ring.truncation {
            return BigInt::zero();
        }
        match &self.data {
            Data::Int(v) => v[n].clone(),
            Data::Word(v) => BigInt::from(v[n]),
        }
    }

    /// Coefficient at degree `n` for word-modulus rings.
    pub fn coeff_u64(&self, n: usize) -> Option<u64> {
        match &self.data {
            Data::Word(v) => Some(if n < v.len() { v[n] } else { 0 }),
            Data::Int(_) => None,
        }
    }

    /// Dense residue storage, when the modulus is word-sized.
    pub fn word_coeffs(&self) -> Option<&[u64]> {
        match &self.data {
            Data::Word(v) => Some(v),
            Data::Int(_) => None,
        }
    }

    /// Dense `BigInt` storage (exact or big-modulus rings).
    pub fn int_coeffs(&self) -> Option<&[BigInt]> {
        match &self.data {
            Data::Int(v) => Some(v),
            Data::Word(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Int(v) => v.iter().all(|c| c.is_zero()),
            Data::Word(v) => v.iter().all(|&c| c == 0),
        }
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn leading_degree(&self) -> Option<usize> {
        match &self.data {
            Data::Int(v) => v.iter().position(|c| !c.is_zero()),
            Data::Word(v) => v.iter().position(|&c| c != 0),
        }
    }

    pub(crate) fn set_coeff_internal(&mut self, n: usize, value: BigInt) {
        if n < self.ring.truncation {
            self.set_coeff(n, &value);
        }
    }

    fn set_coeff(&mut self, n: usize, value: &BigInt) {
        match (&mut self.data, &self.ring.modulus) {
            (Data::Int(v), Modulus::Exact) => v[n] = value.clone(),
            (Data::Int(v), Modulus::Big(m)) => v[n] = value.mod_floor(m),
            (Data::Word(v), Modulus::Word(m)) => {
                v[n] = value.mod_floor(&BigInt::from(*m)).to_u64().unwrap()
            }
            _ => unreachable!("storage matches modulus by construction"),
        }
    }

    fn check_same_ring(&self, other: &TruncatedSeries) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same_ring(other)?;
        let data = match (&self.data, &other.data, &self.ring.modulus) {
            (Data::Word(a), Data::Word(b), Modulus::Word(m)) => Data::Word(
                a.iter().zip(b).map(|(&x, &y)| ((x as u128 + y as u128) % *m as u128) as u64).collect(),
            ),
            (Data::Int(a), Data::Int(b), Modulus::Exact) => {
                Data::Int(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Data::Int(a), Data::Int(b), Modulus::Big(m)) => {
                Data::Int(a.iter().zip(b).map(|(x, y)| (x + y).mod_floor(m)).collect())
            }
            _ => unreachable!(),
        };
        Ok(TruncatedSeries { ring: self.ring.clone(), data })
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same_ring(other)?;
        let data = match (&self.data, &other.data, &self.ring.modulus) {
            (Data::Word(a), Data::Word(b), Modulus::Word(m)) => Data::Word(
                a.iter().zip(b).map(|(&x, &y)| ((x as u128 + (*m - y) as u128) % *m as u128) as u64).collect(),
            ),
            (Data::Int(a), Data::Int(b), Modulus::Exact) => {
                Data::Int(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            (Data::Int(a), Data::Int(b), Modulus::Big(m)) => {
                Data::Int(a.iter().zip(b).map(|(x, y)| (x - y).mod_floor(m)).collect())
            }
            _ => unreachable!(),
        };
        Ok(TruncatedSeries { ring: self.ring.clone(), data })
    }

    /// Cauchy product truncated at `T`, skipping zero coefficients.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same_ring(other)?;
        let t = self.ring.truncation;
        let data = match (&self.data, &other.data, &self.ring.modulus) {
            (Data::Word(a), Data::Word(b), Modulus::Word(m)) => Data::Word(mul_word(a, b, t, *m)),
            (Data::Int(a), Data::Int(b), Modulus::Exact) => Data::Int(mul_int(a, b, t, None)),
            (Data::Int(a), Data::Int(b), Modulus::Big(m)) => Data::Int(mul_int(a, b, t, Some(m))),
            _ => unreachable!(),
        };
        Ok(TruncatedSeries { ring: self.ring.clone(), data })
    }

    /// Binary exponentiation; `pow(x, 0) = 1`.
    pub fn pow(&self, mut e: u64) -> TruncatedSeries {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Multiplicative inverse up to `T` (Newton doubling).
    ///
    /// The constant term must be a unit. The direct recurrence
    /// [`TruncatedSeries::invert_schoolbook`] computes the same thing and
    /// serves as the oracle for this path.
    pub fn invert(&self) -> Result<TruncatedSeries> {
        let t = self.ring.truncation;
        let data = match (&self.data, &self.ring.modulus) {
            (Data::Word(a), Modulus::Word(m)) => Data::Word(invert_newton_word(a, t, *m)?),
            (Data::Int(a), Modulus::Exact) => Data::Int(invert_newton_int(a, t, None)?),
            (Data::Int(a), Modulus::Big(m)) => Data::Int(invert_newton_int(a, t, Some(m))?),
            _ => unreachable!(),
        };
        Ok(TruncatedSeries { ring: self.ring.clone(), data })
    }

    /// Inverse by the direct convolution recurrence (the schoolbook fallback).
    pub fn invert_schoolbook(&self) -> Result<TruncatedSeries> {
        self.ring.one().div(self)
    }

    /// Quotient `self / divisor` via long division.
    ///
    /// Runs in `O(T * nnz(divisor))`, which is what makes dividing by the
    /// pentagonally sparse `(q; q)_inf` cheap at large `T`.
    pub fn div(&self, divisor: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_same_ring(divisor)?;
        let t = self.ring.truncation;
        let data = match (&self.data, &divisor.data, &self.ring.modulus) {
            (Data::Word(n), Data::Word(d), Modulus::Word(m)) => Data::Word(div_word(n, d, t, *m)?),
            (Data::Int(n), Data::Int(d), Modulus::Exact) => Data::Int(div_int(n, d, t, None)?),
            (Data::Int(n), Data::Int(d), Modulus::Big(m)) => Data::Int(div_int(n, d, t, Some(m))?),
            _ => unreachable!(),
        };
        Ok(TruncatedSeries { ring: self.ring.clone(), data })
    }

    /// Subsequence along an arithmetic progression: coefficient `n` of the
    /// result is this series' coefficient at `m*n + t`. The new truncation is
    /// `ceil((T - t) / m)`.
    pub fn extract_ap(&self, m: usize, t: usize) -> TruncatedSeries {
        assert!(m >= 1 && t < m, "need 0 <= t < m");
        let big_t = self.ring.truncation;
        let new_t = if t < big_t { (big_t - t).div_ceil(m) } else { 1 };
        let ring = self.ring.with_truncation(new_t);
        let data = match &self.data {
            Data::Word(v) => {
                Data::Word((0..new_t).map(|n| v.get(m * n + t).copied().unwrap_or(0)).collect())
            }
            Data::Int(v) => Data::Int(
                (0..new_t).map(|n| v.get(m * n + t).cloned().unwrap_or_else(BigInt::zero)).collect(),
            ),
        };
        TruncatedSeries { ring, data }
    }

    /// Multiply by `q^k` (high coefficients fall off the truncation).
    pub fn shift_up(&self, k: usize) -> TruncatedSeries {
        let t = self.ring.truncation;
        let mut out = self.ring.zero();
        for n in k..t {
            let c = self.coeff(n - k);
            out.set_coeff(n, &c);
        }
        out
    }

    /// Reduce coefficients into `Z/m`. The current ring must be exact or have
    /// a modulus divisible by `m`.
    pub fn reduce_mod(&self, m: u64) -> Result<TruncatedSeries> {
        assert!(m >= 2, "reduction modulus must be at least 2");
        match &self.ring.modulus {
            Modulus::Exact => {}
            Modulus::Word(m0) => {
                if m0 % m != 0 {
                    return Err(Error::IncompatibleModulus {
                        have: m0.to_string(),
                        want: m.to_string(),
                    });
                }
            }
            Modulus::Big(m0) => {
                if !m0.mod_floor(&BigInt::from(m)).is_zero() {
                    return Err(Error::IncompatibleModulus {
                        have: m0.to_string(),
                        want: m.to_string(),
                    });
                }
            }
        }
        let ring = SeriesRing::modular(self.ring.truncation, m);
        let data = match &self.data {
            Data::Word(v) => Data::Word(v.iter().map(|&c| c % m).collect()),
            Data::Int(v) => Data::Word(
                v.iter().map(|c| c.mod_floor(&BigInt::from(m)).to_u64().unwrap()).collect(),
            ),
        };
        Ok(TruncatedSeries { ring, data })
    }

    /// Dump as CSV lines `degree,coefficient`, one per degree below `T`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for n in 0..self.ring.truncation {
            out.push_str(&format!("{},{}\n", n, self.coeff(n)));
        }
        out
    }

    /// Load from CSV lines `degree,coefficient`; absent degrees are zero.
    pub fn from_csv(ring: &SeriesRing, text: &str) -> Result<TruncatedSeries> {
        let mut s = ring.zero();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (deg, coeff) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("csv line {}: missing comma", lineno + 1)))?;
            let deg: usize = deg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("csv line {}: bad degree", lineno + 1)))?;
            let coeff: BigInt = coeff
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("csv line {}: bad coefficient", lineno + 1)))?;
            if deg < ring.truncation {
                s.set_coeff(deg, &coeff);
            }
        }
        Ok(s)
    }

    /// Dump as the JSON object `{"T": .., "M": .., "coeffs": [..]}`.
    pub fn to_json(&self) -> String {
        let coeffs: Vec<serde_json::Value> = (0..self.ring.truncation)
            .map(|n| {
                serde_json::Value::Number(
                    serde_json::Number::from_string_unchecked(self.coeff(n).to_string()),
                )
            })
            .collect();
        let obj = serde_json::json!({
            "T": self.ring.truncation,
            "M": serde_json::Value::Number(
                serde_json::Number::from_string_unchecked(self.ring.modulus_int().to_string()),
            ),
            "coeffs": coeffs,
        });
        obj.to_string()
    }

    /// Parse the JSON object produced by [`TruncatedSeries::to_json`].
    pub fn from_json(text: &str) -> Result<TruncatedSeries> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("json: {e}")))?;
        let t = v["T"].as_u64().ok_or_else(|| Error::Parse("json: missing T".into()))? as usize;
        let m: BigInt = json_number_to_bigint(&v["M"])?;
        let ring = if m.is_zero() {
            SeriesRing::exact(t)
        } else {
            SeriesRing::modular_big(t, m)
        };
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| Error::Parse("json: missing coeffs".into()))?;
        let mut s = ring.zero();
        for (n, c) in coeffs.iter().enumerate().take(t) {
            s.set_coeff(n, &json_number_to_bigint(c)?);
        }
        Ok(s)
    }
}

fn json_number_to_bigint(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| Error::Parse(format!("json: non-integer number {n}"))),
        other => Err(Error::Parse(format!("json: expected number, got {other}"))),
    }
}

fn nonzero_word(v: &[u64]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
}

fn nonzero_int(v: &[BigInt]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
}

// Word kernels. Sums of products are accumulated in u128; when the modulus
// fits 32 bits every summand is below 2^64, so up to 2^64 terms are safe
// between reductions. Larger word moduli reduce each step.

fn mul_word(x: &[u64], y: &[u64], t: usize, m: u64) -> Vec<u64> {
    let xs = nonzero_word(x);
    let ys = nonzero_word(y);
    let (a, ai, b, bi) = if xs.len() <= ys.len() { (x, &xs, y, &ys) } else { (y, &ys, x, &xs) };
    let mut acc = vec![0u128; t];
    let fast = m <= (1u64 << 32);
    for &i in ai {
        if i >= t {
            break;
        }
        let ci = a[i] as u128;
        for &j in bi {
            let d = i + j;
            if d >= t {
                break;
            }
            if fast {
                acc[d] += ci * b[j] as u128;
            } else {
                acc[d] = (acc[d] + ci * b[j] as u128) % m as u128;
            }
        }
    }
    acc.into_iter().map(|v| (v % m as u128) as u64).collect()
}

fn div_word(num: &[u64], den: &[u64], t: usize, m: u64) -> std::result::Result<Vec<u64>, Error> {
    let d0 = den.first().copied().unwrap_or(0);
    let d0_inv = crate::arith::inv_mod_u64(d0, m).ok_or(Error::NonUnitConstantTerm)?;
    let tail: Vec<(usize, u64)> =
        den.iter().enumerate().skip(1).filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c)).collect();
    let mut r = vec![0u64; t];
    let fast = m <= (1u64 << 32);
    let mm = m as u128;
    for n in 0..t {
        let mut s: u128 = 0;
        if fast {
            for &(j, dj) in tail.iter().take_while(|&&(j, _)| j <= n) {
                s += dj as u128 * r[n - j] as u128;
            }
            s %= mm;
        } else {
            for &(j, dj) in tail.iter().take_while(|&&(j, _)| j <= n) {
                s = (s + dj as u128 * r[n - j] as u128) % mm;
            }
        }
        let val = (num.get(n).copied().unwrap_or(0) as u128 + mm - s) % mm;
        r[n] = ((val * d0_inv as u128) % mm) as u64;
    }
    Ok(r)
}

fn invert_newton_word(x: &[u64], t: usize, m: u64) -> std::result::Result<Vec<u64>, Error> {
    let x0 = x.first().copied().unwrap_or(0);
    let inv0 = crate::arith::inv_mod_u64(x0, m).ok_or(Error::NonUnitConstantTerm)?;
    let mut y = vec![inv0];
    let mut k = 1usize;
    while k < t {
        let k2 = (2 * k).min(t);
        // y <- y * (2 - x*y) mod q^k2
        let xy = mul_word(&x[..k2.min(x.len())], &y, k2, m);
        let mut two_minus = vec![0u64; k2];
        for (n, item) in two_minus.iter_mut().enumerate() {
            let base = if n == 0 { 2 % m } else { 0 };
            *item = ((base as u128 + m as u128 - xy.get(n).copied().unwrap_or(0) as u128)
                % m as u128) as u64;
        }
        y = mul_word(&y, &two_minus, k2, m);
        k = k2;
    }
    Ok(y)
}

// BigInt kernels; `m = None` means exact integers.

fn reduce_int(c: BigInt, m: Option<&BigInt>) -> BigInt {
    match m {
        Some(m) => c.mod_floor(m),
        None => c,
    }
}

fn mul_int(x: &[BigInt], y: &[BigInt], t: usize, m: Option<&BigInt>) -> Vec<BigInt> {
    let xs = nonzero_int(x);
    let ys = nonzero_int(y);
    let (a, ai, b, bi) = if xs.len() <= ys.len() { (x, &xs, y, &ys) } else { (y, &ys, x, &xs) };
    let mut acc = vec![BigInt::zero(); t];
    for &i in ai {
        if i >= t {
            break;
        }
        for &j in bi {
            let d = i + j;
            if d >= t {
                break;
            }
            acc[d] += &a[i] * &b[j];
        }
    }
    acc.into_iter().map(|c| reduce_int(c, m)).collect()
}

fn int_unit_inverse(c: &BigInt, m: Option<&BigInt>) -> std::result::Result<BigInt, Error> {
    match m {
        None => {
            if c.is_one() {
                Ok(BigInt::one())
            } else if (-c).is_one() {
                Ok(BigInt::from(-1))
            } else {
                Err(Error::NonUnitConstantTerm)
            }
        }
        Some(m) => {
            let e = c.extended_gcd(m);
            if e.gcd.is_one() {
                Ok(e.x.mod_floor(m))
            } else {
                Err(Error::NonUnitConstantTerm)
            }
        }
    }
}

fn div_int(
    num: &[BigInt],
    den: &[BigInt],
    t: usize,
    m: Option<&BigInt>,
) -> std::result::Result<Vec<BigInt>, Error> {
    let zero = BigInt::zero();
    let d0 = den.first().unwrap_or(&zero);
    let d0_inv = int_unit_inverse(d0, m)?;
    let tail: Vec<(usize, &BigInt)> =
        den.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
    let mut r = vec![BigInt::zero(); t];
    for n in 0..t {
        let mut s = BigInt::zero();
        for &(j, dj) in tail.iter().take_while(|&&(j, _)| j <= n) {
            s += dj * &r[n - j];
        }
        let val = (num.get(n).unwrap_or(&zero) - s) * &d0_inv;
        r[n] = reduce_int(val, m);
    }
    Ok(r)
}

fn invert_newton_int(
    x: &[BigInt],
    t: usize,
    m: Option<&BigInt>,
) -> std::result::Result<Vec<BigInt>, Error> {
    let zero = BigInt::zero();
    let x0 = x.first().unwrap_or(&zero);
    let inv0 = int_unit_inverse(x0, m)?;
    let mut y = vec![inv0];
    let mut k = 1usize;
    while k < t {
        let k2 = (2 * k).min(t);
        let xy = mul_int(&x[..k2.min(x.len())], &y, k2, m);
        let mut two_minus = vec![BigInt::zero(); k2];
        for (n, item) in two_minus.iter_mut().enumerate() {
            let base = if n == 0 { BigInt::from(2) } else { BigInt::zero() };
            *item = reduce_int(base - xy.get(n).unwrap_or(&zero), m);
        }
        y = mul_int(&y, &two_minus, k2, m);
        k = k2;
    }
    Ok(y)
}
