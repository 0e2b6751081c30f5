//! Growth diagnostics: the statistic d_k = ln ln n_k / ln k, its running
//! infimum, and the lower-bound check k <= a (ln n_k)^n for smooth
//! sequences.
//!
//! The verdict is explicitly empirical: a liminf cannot be read off a
//! finite prefix, so reports only state what the prefix shows.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::SequencePrefix;
use crate::simplex;
use crate::smooth::{self, PrimeSet};

/// Default running-infimum threshold under which the prefix is reported as
/// empirically consistent with the liminf criterion.
pub const DEFAULT_VERDICT_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CriterionSatisfiedEmpirically,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEntry {
    pub k: u64,
    #[serde(with = "crate::report::biguint_str")]
    pub n_k: BigUint,
    pub d_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub entries: Vec<GrowthEntry>,
    /// running_inf[i] = min of d_k over entries[0..=i]; non-increasing.
    pub running_inf: Vec<f64>,
    /// Least k >= 2 with n_k >= 3, so both logs are positive.
    pub first_valid_k: u64,
    pub verdict: Verdict,
}

impl GrowthReport {
    pub fn final_running_inf(&self) -> f64 {
        *self.running_inf.last().expect("report has at least one entry")
    }
}

/// d_k over the prefix with the default verdict threshold.
pub fn growth_statistic(prefix: &SequencePrefix) -> Result<GrowthReport> {
    growth_statistic_with_threshold(prefix, DEFAULT_VERDICT_THRESHOLD)
}

/// d_k = ln ln n_k / ln k for every k from the first valid index on,
/// with logs of arbitrary-precision terms accurate to ~1e-15 relative.
///
/// Indices with k = 1 or n_k <= 2 are skipped, not errors: polynomial
/// sequences may start small.
pub fn growth_statistic_with_threshold(
    prefix: &SequencePrefix,
    threshold: f64,
) -> Result<GrowthReport> {
    let three = BigUint::from(3u32);
    let first_valid_k = prefix
        .terms()
        .iter()
        .enumerate()
        .map(|(i, t)| (i as u64 + 1, t))
        .find(|(k, t)| *k >= 2 && **t >= three)
        .map(|(k, _)| k)
        .ok_or_else(|| {
            Error::Domain("prefix too short: no index k >= 2 with n_k >= 3".into())
        })?;

    let mut entries = Vec::with_capacity(prefix.len() - first_valid_k as usize + 1);
    let mut running_inf = Vec::with_capacity(entries.capacity());
    let mut inf = f64::INFINITY;
    for (i, n_k) in prefix.terms().iter().enumerate().skip(first_valid_k as usize - 1) {
        let k = i as u64 + 1;
        // monotonicity keeps n_k >= 3 from first_valid_k on
        debug_assert!(*n_k >= three);
        let d_k = crate::arith::ln_big(n_k)?.ln() / (k as f64).ln();
        inf = inf.min(d_k);
        entries.push(GrowthEntry { k, n_k: n_k.clone(), d_k });
        running_inf.push(inf);
    }

    let verdict = verdict_for(&entries, &running_inf, first_valid_k, threshold);
    Ok(GrowthReport { entries, running_inf, first_valid_k, verdict })
}

/// Empirically satisfied when the final running infimum is below the
/// threshold and still decreasing over the final decade of indices.
fn verdict_for(
    entries: &[GrowthEntry],
    running_inf: &[f64],
    first_valid_k: u64,
    threshold: f64,
) -> Verdict {
    let last = match running_inf.last() {
        Some(v) => *v,
        None => return Verdict::Inconclusive,
    };
    if last >= threshold {
        return Verdict::Inconclusive;
    }
    let k_last = entries.last().unwrap().k;
    let decade_start_k = (k_last / 10).max(first_valid_k);
    let idx = (decade_start_k - first_valid_k) as usize;
    if idx >= running_inf.len() {
        return Verdict::Inconclusive;
    }
    if last < running_inf[idx] {
        Verdict::CriterionSatisfiedEmpirically
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub k: u64,
    #[serde(with = "crate::report::biguint_str")]
    pub n_k: BigUint,
    /// Left-hand side of the bound, the index k itself.
    pub lhs: u64,
    /// a * (ln n_k)^n.
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    /// The constant a = (1 + sum ln p_i / ln 2)^n / (n! prod ln p_i).
    pub constant_a: f64,
    pub rows: Vec<BoundRow>,
    pub all_pass: bool,
}

/// Checks k <= a (ln n_k)^n over the first K S-smooth numbers >= 2,
/// with a from [`simplex::poly_bound_constant`] at delta = ln 2 (the
/// smallest log of any term >= 2).
pub fn smooth_lower_bound_check(s: &PrimeSet, k_count: u64) -> Result<BoundCheckReport> {
    if k_count < 2 {
        return Err(Error::Domain("K must be >= 2".into()));
    }
    let weights = s.log_weights();
    let n = weights.len() as i32;
    let constant_a = simplex::poly_bound_constant(&weights, std::f64::consts::LN_2)?;
    let terms = smooth::first_smooth(s, k_count)?;
    let mut rows = Vec::with_capacity(terms.len());
    let mut all_pass = true;
    for (i, n_k) in terms.iter().enumerate() {
        let k = i as u64 + 1;
        let rhs = constant_a * crate::arith::ln_big(n_k)?.powi(n);
        let pass = k as f64 <= rhs;
        all_pass &= pass;
        rows.push(BoundRow { k, n_k: n_k.clone(), lhs: k, rhs, pass });
    }
    Ok(BoundCheckReport { constant_a, rows, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{self, Builtin, SequenceKind, SequenceSpec};

    fn identity_prefix(count: u64) -> SequencePrefix {
        sequences::materialize(
            &SequenceSpec::new(SequenceKind::Builtin(Builtin::Identity), 1, count).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn d_k_identity_at_10() {
        let report = growth_statistic(&identity_prefix(10)).unwrap();
        assert_eq!(report.first_valid_k, 3); // n_k = k, first k >= 2 with n_k >= 3
        let last = report.entries.last().unwrap();
        assert_eq!(last.k, 10);
        // oracle: ln ln 10 / ln 10 = 0.36221568869946321
        assert!((last.d_k - 0.36221568869946321).abs() < 1e-12);
    }

    #[test]
    fn d_k_powers_of_two_at_4() {
        let terms = vec![2u64, 4, 8, 16].into_iter().map(BigUint::from).collect();
        let prefix = sequences::validate_increasing(terms, "t".into()).unwrap();
        let report = growth_statistic(&prefix).unwrap();
        let last = report.entries.last().unwrap();
        assert_eq!(last.k, 4);
        // oracle: ln(4 ln 2) / ln 4 = 0.73561681352755119
        assert!((last.d_k - 0.73561681352755119).abs() < 1e-12);
    }

    #[test]
    fn d_k_at_16_16() {
        let report = growth_statistic(&identity_prefix(16)).unwrap();
        let last = report.entries.last().unwrap();
        // oracle: ln ln 16 / ln 16 = 0.36780840676377560
        assert!((last.d_k - 0.36780840676377560).abs() < 1e-12);
    }

    #[test]
    fn running_inf_is_non_increasing_prefix_min() {
        let spec = SequenceSpec::new(
            SequenceKind::Polynomial(vec![1.into(), 0.into(), 1.into()]),
            1,
            500,
        )
        .unwrap();
        let prefix = sequences::materialize(&spec).unwrap();
        let report = growth_statistic(&prefix).unwrap();
        let mut min_so_far = f64::INFINITY;
        for (e, inf) in report.entries.iter().zip(&report.running_inf) {
            min_so_far = min_so_far.min(e.d_k);
            assert_eq!(*inf, min_so_far);
        }
    }

    #[test]
    fn identity_sequence_large_k() {
        let report = growth_statistic(&identity_prefix(1_000_000)).unwrap();
        let last = report.entries.last().unwrap();
        // oracle: ln ln 1e6 / ln 1e6 = 0.19006115651385114
        assert!((last.d_k - 0.19006115651385114).abs() < 1e-10);
        assert!(last.d_k < 0.191);
        // eventually decreasing: final entry is the minimum over the tail
        let tail_min = report.entries[1000..].iter().map(|e| e.d_k).fold(f64::INFINITY, f64::min);
        assert_eq!(tail_min, last.d_k);
    }

    #[test]
    fn too_short_prefix_errors() {
        let terms = vec![BigUint::from(2u32)];
        let prefix = sequences::validate_increasing(terms, "t".into()).unwrap();
        assert!(growth_statistic(&prefix).is_err());
    }

    #[test]
    fn proof_chain_ln_inequality_for_smooth_prefix() {
        // ln k <= ln a + n * ln ln n_k for all k >= 2 in the tested prefix
        let s = PrimeSet::from_u64(&[2, 3, 5]).unwrap();
        let report = smooth_lower_bound_check(&s, 2000).unwrap();
        assert!(report.all_pass);
        let ln_a = report.constant_a.ln();
        for row in &report.rows[1..] {
            let lnln = crate::arith::ln_big(&row.n_k).unwrap().ln();
            assert!((row.k as f64).ln() <= ln_a + 3.0 * lnln + 1e-12, "k = {}", row.k);
        }
    }

    #[test]
    fn bound_check_powers_of_two() {
        // S = {2}: n_k = 2^k, a = 2/ln 2, rhs = 2k
        let s = PrimeSet::from_u64(&[2]).unwrap();
        let report = smooth_lower_bound_check(&s, 10).unwrap();
        assert!(report.all_pass);
        assert!((report.constant_a - 2.0 / std::f64::consts::LN_2).abs() < 1e-12);
        for row in &report.rows {
            assert!((row.rhs - 2.0 * row.k as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn bound_check_minimal_k() {
        let s = PrimeSet::from_u64(&[2, 3]).unwrap();
        let report = smooth_lower_bound_check(&s, 2).unwrap();
        assert!(report.all_pass);
        assert!(smooth_lower_bound_check(&s, 1).is_err());
    }

    #[test]
    fn verdict_identity_sequence_is_inconclusive_at_small_k() {
        // running inf ~0.19 at 1e5, far above the 0.05 default threshold
        let report = growth_statistic(&identity_prefix(100_000)).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
    }
}
