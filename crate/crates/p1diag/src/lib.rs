//! Diagnostics for the prime-divisor growth of integer sequences.
//!
//! Two families of checks are provided, each backed by exact arithmetic
//! and brute-force-verifiable at desk scale:
//!
//! * growth route: smooth-number counting, its reduction to lattice points
//!   under a weighted simplex, and the statistic ln ln n_k / ln k
//!   ([`smooth`], [`simplex`], [`growth`]);
//! * gcd route: pairwise gcd bounds, p-adic valuation index sets, their
//!   spacing and the resulting counting bounds ([`gcd_diag`]).
//!
//! [`sequences`] supplies validated sequence prefixes (polynomials, files,
//! builtin families, smooth semigroups) and [`census`] reports the primes
//! dividing at least one term. The `p1diag` binary exposes everything with
//! JSON/CSV/text output.

pub mod arith;
pub mod census;
pub mod error;
pub mod gcd_diag;
pub mod growth;
pub mod report;
pub mod sequences;
pub mod simplex;
pub mod smooth;

pub use error::{Error, Result};
