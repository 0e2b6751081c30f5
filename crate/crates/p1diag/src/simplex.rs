//! Lattice points under a weighted simplex: the exact count of
//! non-negative integer vectors (k_1..k_n) with sum k_i * w_i <= W, and the
//! analytic upper bound (W + sum w_i)^n / (n! * prod w_i).
//!
//! Boundary ties sum = W count as inside, compared in plain binary64 with
//! no epsilon; callers that need exact boundary behaviour use the integer
//! route in [`crate::smooth`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive real weights w_1..w_n, n >= 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("weight vector must have length >= 1".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::Domain(format!("weights must be finite and > 0, got {w}")));
        }
        Ok(WeightVector { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }
}

/// Exact count next to its analytic bound, as reported by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexCountResult {
    pub exact: u64,
    pub upper_bound: f64,
    pub w_budget: f64,
    /// exact <= upper_bound * (1 + 1e-9)
    pub bound_holds: bool,
}

/// Relative slack allowed when comparing the integer count against the
/// binary64 bound.
pub const BOUND_SLACK: f64 = 1e-9;

impl SimplexCountResult {
    pub fn evaluate(w_budget: f64, weights: &WeightVector) -> Result<Self> {
        let exact = count_exact(w_budget, weights)?;
        let upper_bound = count_upper_bound(w_budget, weights)?;
        Ok(SimplexCountResult {
            exact,
            upper_bound,
            w_budget,
            bound_holds: exact as f64 <= upper_bound * (1.0 + BOUND_SLACK),
        })
    }
}

/// Exact number of non-negative integer vectors with sum k_i * w_i <= W.
///
/// Depth-first enumeration over exponent coordinates with remaining-budget
/// pruning; coordinates are visited in descending weight order. The top
/// coordinate range is split across rayon workers when large; the result is
/// identical to sequential enumeration because branch counts are exact
/// integers added associatively.
pub fn count_exact(w_budget: f64, weights: &WeightVector) -> Result<u64> {
    if !(w_budget >= 0.0) {
        return Err(Error::Domain(format!("W must be >= 0, got {w_budget}")));
    }
    let mut sorted = weights.weights().to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("weights are finite"));

    let top = sorted[0];
    let top_range = (w_budget / top).floor() as u64;
    if sorted.len() == 1 || top_range < 64 {
        return dfs(&sorted, w_budget);
    }
    (0..=top_range)
        .into_par_iter()
        .map(|k| dfs(&sorted[1..], w_budget - k as f64 * top))
        .try_reduce(
            || 0u64,
            |a, b| a.checked_add(b).ok_or_else(overflow),
        )
}

fn overflow() -> Error {
    Error::Overflow("lattice point count exceeds u64".into())
}

fn dfs(weights: &[f64], remaining: f64) -> Result<u64> {
    debug_assert!(remaining >= 0.0);
    if weights.len() == 1 {
        return Ok((remaining / weights[0]).floor() as u64 + 1);
    }
    let w = weights[0];
    let mut total: u64 = 0;
    let mut k: u64 = 0;
    while k as f64 * w <= remaining {
        total = total
            .checked_add(dfs(&weights[1..], remaining - k as f64 * w)?)
            .ok_or_else(overflow)?;
        k += 1;
    }
    Ok(total)
}

/// ln(n!) as a sum of logarithms, exact enough for the bound at any n
/// that fits in memory.
fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// The analytic bound (W + sum w_i)^n / (n! * prod w_i). Evaluated
/// directly when every intermediate fits in binary64 (so small cases like
/// W = 2, w = (1,1) come out as exactly 8), falling back to log space when
/// the factorial or power overflows.
pub fn count_upper_bound(w_budget: f64, weights: &WeightVector) -> Result<f64> {
    if !(w_budget >= 0.0) {
        return Err(Error::Domain(format!("W must be >= 0, got {w_budget}")));
    }
    let n = weights.len();
    let sum: f64 = weights.weights().iter().sum();

    let numer = (w_budget + sum).powi(n as i32);
    let denom = (1..=n).map(|i| i as f64).product::<f64>()
        * weights.weights().iter().product::<f64>();
    if numer.is_finite() && denom.is_finite() && denom > 0.0 {
        let value = numer / denom;
        if value.is_finite() {
            return Ok(value);
        }
    }

    let log_value = n as f64 * (w_budget + sum).ln()
        - ln_factorial(n)
        - weights.weights().iter().map(|w| w.ln()).sum::<f64>();
    let value = log_value.exp();
    if !value.is_finite() {
        return Err(Error::Overflow("simplex bound overflows binary64".into()));
    }
    Ok(value)
}

/// The constant c with N(W; w) <= c * W^n for all W >= delta:
/// c = (1 + sum w_i / delta)^n / (n! * prod w_i), since
/// (W + sum w_i)^n <= W^n * (1 + sum w_i / delta)^n on that range.
pub fn poly_bound_constant(weights: &WeightVector, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be > 0, got {delta}")));
    }
    let n = weights.len();
    let sum: f64 = weights.weights().iter().sum();
    let log_value = n as f64 * (1.0 + sum / delta).ln()
        - ln_factorial(n)
        - weights.weights().iter().map(|w| w.ln()).sum::<f64>();
    let value = log_value.exp();
    if !value.is_finite() {
        return Err(Error::Overflow("bound constant overflows binary64".into()));
    }
    Ok(value)
}
