//! Counting and congruence machinery for `l`-regular bipartitions.
//!
//! An `l`-regular bipartition of `n` is an ordered pair of partitions with
//! total size `n` in which no part of either partition is divisible by `l`.
//! Writing `f_k` for the infinite product `(q^k; q^k)_inf`, the counting
//! function `B_l(n)` has generating function `f_l^2 / f_1^2`.
//!
//! The crate is organised around that series:
//!
//! * [`series`] — truncated formal power series over exact integers or
//!   `Z/M`, with sparse Euler-product expansions (the performance core).
//! * [`partitions`] — the `B_l(n)` and `b_l(n)` coefficient streams plus an
//!   independent brute-force enumeration oracle.
//! * [`eta`] — eta-quotient profiles: weight, level, Nebentypus character,
//!   cusp orders (Ligozat/Ono formula), and holomorphy verdicts.
//! * [`radu`] — a Radu–Sellers style finite verifier: a bounded coefficient
//!   check that promotes `B_p(mn + t') ≡ 0 (mod u)` from finitely many `n`
//!   to all `n`.
//! * [`congruence`] — Hecke eigenform checks, Newman recurrences, the
//!   congruence family suites, and arithmetic density scans.
//! * [`arith`] — gcd/Jacobi/valuation primitives shared by everything.
//!
//! The `bipartitions` binary exposes each piece as a scriptable subcommand
//! emitting JSON-lines reports; see the README and the `book/` guide.

pub mod arith;
pub mod congruence;
pub mod eta;
pub mod partitions;
pub mod radu;
pub mod series;

use std::fmt;

/// Exact rational arithmetic for cusp orders and verification bounds.
pub type Rational = num_rational::Ratio<i128>;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Jacobi symbol requested for an even or non-positive modulus.
    JacobiModulus(i128),
    /// `p`-adic valuation of zero requested.
    ZeroValuation,
    /// Operands live in different series rings.
    RingMismatch,
    /// Inversion or division by a series whose constant term is not a unit.
    NonUnitConstantTerm,
    /// `reduce_mod` target does not divide the current modulus.
    IncompatibleModulus { have: String, want: String },
    /// Brute-force enumeration requested beyond the configured cap.
    EnumerationCap { n: u64, cap: u64 },
    /// A run would need more series coefficients than the configured cap.
    ResourceCap { needed: u64, cap: u64 },
    /// A factored integer argument failed validation.
    InvalidFactorization(String),
    /// `d` is not a divisor of the level `N`.
    NotADivisor { d: u64, level: u64 },
    /// Divisor-indexed double coset representatives need `N` or `N/2`
    /// squarefree.
    CosetLevel(u64),
    /// Eta-quotient profile violates the transformation-law congruences.
    ProfileInvalid,
    /// Malformed textual input (eta specs, factored integers, CSV, JSON).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::JacobiModulus(n) => {
                write!(f, "jacobi symbol needs an odd positive modulus, got {n}")
            }
            Error::ZeroValuation => write!(f, "p-adic valuation of 0 is undefined"),
            Error::RingMismatch => write!(f, "series operands live in different rings"),
            Error::NonUnitConstantTerm => {
                write!(f, "constant term is not invertible in the coefficient ring")
            }
            Error::IncompatibleModulus { have, want } => {
                write!(f, "cannot reduce modulus {have} to {want}")
            }
            Error::EnumerationCap { n, cap } => {
                write!(f, "enumeration of n = {n} exceeds the cap {cap}")
            }
            Error::ResourceCap { needed, cap } => {
                write!(f, "run needs {needed} coefficients, cap is {cap}")
            }
            Error::InvalidFactorization(msg) => write!(f, "invalid factorization: {msg}"),
            Error::NotADivisor { d, level } => write!(f, "{d} does not divide the level {level}"),
            Error::CosetLevel(n) => {
                write!(f, "divisor-indexed coset representatives need N or N/2 squarefree, got {n}")
            }
            Error::ProfileInvalid => write!(f, "eta-quotient profile fails the weight/level congruences"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(doctest)]
mod book {
    //! Keeps the guide's code snippets compiling: every fenced Rust block in
    //! `book/src/*.md` runs under `cargo test --doc`.

    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/qseries.md")]
    mod qseries {}
    #[doc = include_str!("../../../book/src/bipartitions.md")]
    mod bipartitions {}
    #[doc = include_str!("../../../book/src/eta-quotients.md")]
    mod eta_quotients {}
    #[doc = include_str!("../../../book/src/hecke-newman.md")]
    mod hecke_newman {}
    #[doc = include_str!("../../../book/src/finite-verification.md")]
    mod finite_verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
