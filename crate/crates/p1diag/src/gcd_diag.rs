//! Pairwise-gcd machinery: hypothesis verification gcd(n_k, n_{k+l}) < m_l,
//! high-valuation index sets, their spacing, the partition into index sets
//! plus a residual, and the Delta(N) counting bound.
//!
//! Naming note: the offset between compared terms is the *window offset* l;
//! the number of primes with unbounded valuation is the
//! *unbounded prime count*. Both run under the same letter elsewhere, so
//! the two are kept apart explicitly here.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::sequences::SequencePrefix;
use crate::smooth::PrimeSet;

/// The bound sequence (m_l): explicit values or the closed form
/// m_l = l + offset. Strictly increasing by construction; constant
/// sequences are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSequence {
    Explicit(#[serde(with = "crate::report::biguint_vec")] Vec<BigUint>),
    Linear { offset: u64 },
}

impl BoundSequence {
    pub fn explicit(values: Vec<BigUint>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("bound sequence must be non-empty".into()));
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::Domain(format!(
                    "bound sequence must be strictly increasing: violation at m_{}",
                    i + 2
                )));
            }
        }
        Ok(BoundSequence::Explicit(values))
    }

    pub fn linear(offset: u64) -> Self {
        BoundSequence::Linear { offset }
    }

    /// m_l for 1-based l.
    pub fn value(&self, l: u64) -> Result<BigUint> {
        if l == 0 {
            return Err(Error::Domain("bound sequence index must be >= 1".into()));
        }
        match self {
            BoundSequence::Explicit(vs) => vs
                .get(l as usize - 1)
                .cloned()
                .ok_or_else(|| {
                    Error::Domain(format!("bound sequence provides only {} values, need m_{l}", vs.len()))
                }),
            BoundSequence::Linear { offset } => Ok(BigUint::from(l + offset)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub k: u64,
    pub l: u64,
    #[serde(with = "crate::report::biguint_str")]
    pub gcd_value: BigUint,
    #[serde(with = "crate::report::biguint_str")]
    pub m_l: BigUint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcdHypothesisReport {
    pub window_l: u64,
    pub pairs_checked: u64,
    pub violations: Vec<Violation>,
    pub holds: bool,
}

/// Checks gcd(n_k, n_{k+l}) < m_l over every pair with 1 <= l <= window_l
/// and k + l <= prefix length. Parallel over k; violations are merged in
/// (k, l) order so output is independent of thread count.
pub fn verify_gcd_hypothesis(
    prefix: &SequencePrefix,
    m: &BoundSequence,
    window_l: u64,
) -> Result<GcdHypothesisReport> {
    if window_l == 0 {
        return Err(Error::Domain("window must be >= 1".into()));
    }
    let len = prefix.len() as u64;
    if len <= window_l {
        return Err(Error::Domain(format!(
            "prefix length {len} must exceed window {window_l}"
        )));
    }
    // materialize m_1..m_L up front so missing values fail before any work
    let bounds: Vec<BigUint> = (1..=window_l).map(|l| m.value(l)).collect::<Result<_>>()?;

    let terms = prefix.terms();
    let violations: Vec<Violation> = (1..=len - 1)
        .into_par_iter()
        .map(|k| {
            let mut local = Vec::new();
            for l in 1..=window_l.min(len - k) {
                let g = terms[k as usize - 1].gcd_ref(&terms[(k + l) as usize - 1]);
                let m_l = &bounds[l as usize - 1];
                if &g >= m_l {
                    local.push(Violation { k, l, gcd_value: g, m_l: m_l.clone() });
                }
            }
            local
        })
        .flatten()
        .collect();
    let mut violations = violations;
    violations.sort_by_key(|v| (v.k, v.l));

    let pairs_checked = (1..=len - 1).map(|k| window_l.min(len - k)).sum();
    Ok(GcdHypothesisReport {
        window_l,
        pairs_checked,
        holds: violations.is_empty(),
        violations,
    })
}

/// Least M with 2^M > m_l.
pub fn choose_m(m: &BoundSequence, l: u64) -> Result<u32> {
    let m_l = m.value(l)?;
    // m_l < 2^bits and 2^(bits-1) <= m_l, so bits is the least such M
    Ok(m_l.bits() as u32)
}

/// Indices k with nu(p, n_k) > M, ascending (the set A_t(M)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSet {
    #[serde(with = "crate::report::biguint_str")]
    pub prime: BigUint,
    pub threshold_m: u32,
    pub indices: Vec<u64>,
}

pub fn index_set(prefix: &SequencePrefix, p: &BigUint, threshold_m: u32) -> Result<IndexSet> {
    if !arith::is_prime(p) {
        return Err(Error::Domain(format!("index_set: {p} is not prime")));
    }
    let mut indices = Vec::new();
    for (i, t) in prefix.terms().iter().enumerate() {
        if arith::nu(p, t)? > threshold_m {
            indices.push(i as u64 + 1);
        }
    }
    Ok(IndexSet { prime: p.clone(), threshold_m, indices })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacingCheck {
    /// Minimum gap between consecutive indices; None when fewer than two.
    pub min_gap: Option<u64>,
    /// min_gap > l, vacuously true for sets of size < 2.
    pub pass: bool,
}

pub fn spacing_check(set: &IndexSet, l: u64) -> SpacingCheck {
    let min_gap = set
        .indices
        .windows(2)
        .map(|w| w[1] - w[0])
        .min();
    SpacingCheck {
        min_gap,
        pass: min_gap.map_or(true, |g| g > l),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaBound {
    /// N - l * (floor(N/(l+1)) + 1). Can be negative for small N.
    pub delta: i64,
    /// N/(l+1) - l. delta >= lower, with equality exactly when (l+1) | N;
    /// the strict form fails at those points.
    pub lower: f64,
}

pub fn delta_bound(n: u64, l: u64) -> DeltaBound {
    let packed = n / (l + 1) + 1;
    let delta = n as i64 - (l as i64) * (packed as i64);
    let lower = n as f64 / (l + 1) as f64 - l as f64;
    DeltaBound { delta, lower }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationTrajectory {
    #[serde(with = "crate::report::biguint_str")]
    pub prime: BigUint,
    /// (prefix length, running max valuation) at geometric checkpoints —
    /// empirical evidence for or against unbounded valuation.
    pub running_max: Vec<(u64, u32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    /// Indices in no A_t(M) over the chosen unbounded primes (candidate
    /// elements of the finite residual set).
    pub residual_indices: Vec<u64>,
    /// Always true: the index sets plus the residual cover [1, N] by
    /// construction.
    pub covered: bool,
    /// (prefix length, residual count so far) at checkpoints.
    pub residual_growth: Vec<(u64, u64)>,
    /// Whether the residual stopped growing over the final half of the
    /// prefix — a finiteness probe, not a proof.
    pub residual_growth_bounded: bool,
    pub valuation_trajectories: Vec<ValuationTrajectory>,
}

/// Splits indices into the union of A_t(M) over the declared unbounded
/// primes and the residual. Every term must factor over S; anything else is
/// a domain error naming the term.
pub fn partition_check(
    prefix: &SequencePrefix,
    s: &PrimeSet,
    unbounded_primes: &[BigUint],
    threshold_m: u32,
) -> Result<PartitionReport> {
    if unbounded_primes.is_empty() {
        return Err(Error::Domain("at least one unbounded prime is required".into()));
    }
    for p in unbounded_primes {
        if !s.contains(p) {
            return Err(Error::Domain(format!("unbounded prime {p} is not in S")));
        }
    }
    for (i, t) in prefix.terms().iter().enumerate() {
        let f = arith::factorize(t)?;
        let foreign = f.primes().find(|p| !s.contains(p)).cloned();
        if let Some(p) = foreign {
            return Err(Error::Domain(format!(
                "sequence not S-smooth: term at index {} has prime factor {p}",
                i + 1
            )));
        }
    }

    let len = prefix.len() as u64;
    let checkpoints = checkpoint_lengths(len);

    let mut residual_indices = Vec::new();
    let mut residual_growth = Vec::new();
    let mut trajectories: Vec<ValuationTrajectory> = unbounded_primes
        .iter()
        .map(|p| ValuationTrajectory { prime: p.clone(), running_max: Vec::new() })
        .collect();
    let mut running_max = vec![0u32; unbounded_primes.len()];

    let mut cp = checkpoints.iter().peekable();
    for (i, t) in prefix.terms().iter().enumerate() {
        let k = i as u64 + 1;
        let mut in_some_set = false;
        for (j, p) in unbounded_primes.iter().enumerate() {
            let v = arith::nu(p, t)?;
            running_max[j] = running_max[j].max(v);
            in_some_set |= v > threshold_m;
        }
        if !in_some_set {
            residual_indices.push(k);
        }
        if cp.peek() == Some(&&k) {
            cp.next();
            residual_growth.push((k, residual_indices.len() as u64));
            for (j, traj) in trajectories.iter_mut().enumerate() {
                traj.running_max.push((k, running_max[j]));
            }
        }
    }

    let half_count = residual_indices.iter().filter(|&&k| k <= len / 2).count() as u64;
    let residual_growth_bounded = residual_indices.len() as u64 == half_count;

    Ok(PartitionReport {
        residual_indices,
        covered: true,
        residual_growth,
        residual_growth_bounded,
        valuation_trajectories: trajectories,
    })
}

fn checkpoint_lengths(len: u64) -> Vec<u64> {
    let mut cps: Vec<u64> = (1..=4).map(|q| len * q / 4).filter(|&c| c >= 1).collect();
    cps.dedup();
    cps
}

// verify_gcd_hypothesis uses gcd_ref from num-integer via an inherent-style
// helper so the parallel closure stays allocation-light.
trait GcdRef {
    fn gcd_ref(&self, other: &Self) -> Self;
}

impl GcdRef for BigUint {
    fn gcd_ref(&self, other: &Self) -> Self {
        num_integer::Integer::gcd(self, other)
    }
}
