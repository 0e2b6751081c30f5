//! Prime census: the set of primes dividing at least one prefix term, and
//! how that set grows with the index.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::Error;
use crate::error::Result;
use crate::sequences::SequencePrefix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    /// Every prime dividing at least one fully or partially factored term,
    /// ascending.
    #[serde(with = "crate::report::biguint_vec")]
    pub primes_found: Vec<BigUint>,
    /// (k, distinct primes seen among terms 1..k), stored sparsely at
    /// change points only.
    pub growth_curve: Vec<(u64, u64)>,
    /// 1-based indices whose factorization exhausted the retry budget.
    /// Primes found before the budget ran out are still counted; the
    /// unfactored cofactor is not.
    pub incomplete_terms: Vec<u64>,
}

impl CensusReport {
    /// Distinct prime count at index k (0 before the first change point).
    pub fn count_at(&self, k: u64) -> u64 {
        self.growth_curve
            .iter()
            .take_while(|(idx, _)| *idx <= k)
            .last()
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }
}

/// Factors every term and accumulates the distinct primes seen.
///
/// Factorizations run in parallel; the per-term results are folded in index
/// order, so the report is identical whatever the thread count.
pub fn prime_census(prefix: &SequencePrefix) -> Result<CensusReport> {
    let factored: Vec<(Vec<BigUint>, bool)> = prefix
        .terms()
        .par_iter()
        .map(|t| match arith::factorize(t) {
            Ok(f) => Ok((f.primes().cloned().collect(), false)),
            Err(Error::IncompleteFactorization { partial, .. }) => {
                Ok((partial.into_iter().map(|(p, _)| p).collect(), true))
            }
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let mut seen: BTreeSet<BigUint> = BTreeSet::new();
    let mut growth_curve = Vec::new();
    let mut incomplete_terms = Vec::new();
    for (i, (primes, incomplete)) in factored.into_iter().enumerate() {
        let k = i as u64 + 1;
        let before = seen.len();
        seen.extend(primes);
        if seen.len() != before {
            growth_curve.push((k, seen.len() as u64));
        }
        if incomplete {
            incomplete_terms.push(k);
        }
    }
    Ok(CensusReport {
        primes_found: seen.into_iter().collect(),
        growth_curve,
        incomplete_terms,
    })
}
