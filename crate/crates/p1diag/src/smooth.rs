//! S-smooth numbers: enumeration by priority-queue merge, exact counting
//! by integer DFS, and the term-counting statistic t_l.
//!
//! All counting here is exact integer arithmetic. The floating-point
//! lattice route in [`crate::simplex`] exists to validate the log
//! reduction, not to replace this module: the boundary
//! prod p_i^{k_i} = limit is exact in integers and ill-defined in
//! binary64 logs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::sequences::SequencePrefix;

/// Default cap on enumerated or counted smooth numbers.
pub const DEFAULT_SMOOTH_CAP: u64 = 100_000_000;

/// An ordered finite set of distinct primes p_1 < p_2 < ... < p_s.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSet {
    #[serde(with = "crate::report::biguint_vec")]
    primes: Vec<BigUint>,
}

impl PrimeSet {
    pub fn new(primes: Vec<BigUint>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::Domain("prime set must be non-empty".into()));
        }
        for w in primes.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Domain("primes must be strictly increasing".into()));
            }
        }
        for p in &primes {
            if !arith::is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
        }
        Ok(PrimeSet { primes })
    }

    pub fn from_u64(primes: &[u64]) -> Result<Self> {
        Self::new(primes.iter().map(|&p| BigUint::from(p)).collect())
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn contains(&self, p: &BigUint) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    /// The weight vector (ln p_1, ..., ln p_s) of the log reduction.
    pub fn log_weights(&self) -> crate::simplex::WeightVector {
        let ws = self
            .primes
            .iter()
            .map(|p| arith::ln_big(p).expect("primes are >= 2"))
            .collect();
        crate::simplex::WeightVector::new(ws).expect("logs of primes >= 2 are positive")
    }
}

/// Every integer in [1, limit] whose prime factors all lie in S, ascending,
/// including 1 as the empty product.
///
/// Priority-queue merge: each popped value v pushes v * p_i for every prime,
/// duplicates collapsing on pop. Never touches floating point.
pub fn enumerate_smooth(s: &PrimeSet, limit: &BigUint) -> Result<Vec<BigUint>> {
    enumerate_smooth_capped(s, limit, DEFAULT_SMOOTH_CAP)
}

pub fn enumerate_smooth_capped(s: &PrimeSet, limit: &BigUint, cap: u64) -> Result<Vec<BigUint>> {
    if limit < &BigUint::one() {
        return Err(Error::Domain("limit must be >= 1".into()));
    }
    let mut heap: BinaryHeap<Reverse<BigUint>> = BinaryHeap::new();
    heap.push(Reverse(BigUint::one()));
    let mut out: Vec<BigUint> = Vec::new();
    while let Some(Reverse(v)) = heap.pop() {
        if out.last() == Some(&v) {
            continue; // duplicate path through the product lattice
        }
        if out.len() as u64 >= cap {
            return Err(Error::Resource(format!("smooth enumeration cap {cap} exceeded")));
        }
        for p in s.primes() {
            let next = &v * p;
            if next <= *limit {
                heap.push(Reverse(next));
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// The first `count` S-smooth numbers >= 2, ascending. Same merge as
/// [`enumerate_smooth`] but bounded by cardinality instead of magnitude;
/// 1 is skipped because generated sequences feed diagnostics that take
/// ln ln of every term.
pub fn first_smooth(s: &PrimeSet, count: u64) -> Result<Vec<BigUint>> {
    if count > DEFAULT_SMOOTH_CAP {
        return Err(Error::Resource(format!(
            "requested {count} smooth numbers exceeds cap {DEFAULT_SMOOTH_CAP}"
        )));
    }
    let mut heap: BinaryHeap<Reverse<BigUint>> = BinaryHeap::new();
    heap.push(Reverse(BigUint::one()));
    let mut out: Vec<BigUint> = Vec::new();
    let mut last: Option<BigUint> = None;
    while (out.len() as u64) < count {
        let Reverse(v) = heap.pop().expect("heap never empties while products remain");
        if last.as_ref() == Some(&v) {
            continue;
        }
        for p in s.primes() {
            heap.push(Reverse(&v * p));
        }
        if !v.is_one() {
            out.push(v.clone());
        }
        last = Some(v);
    }
    Ok(out)
}

/// |{m in [1, limit] : m is S-smooth}| without materializing the list.
///
/// Integer DFS over exponent vectors mirroring the simplex enumeration:
/// the running product stays <= limit, compared exactly.
pub fn count_smooth(s: &PrimeSet, limit: &BigUint) -> Result<u64> {
    count_smooth_capped(s, limit, DEFAULT_SMOOTH_CAP)
}

pub fn count_smooth_capped(s: &PrimeSet, limit: &BigUint, cap: u64) -> Result<u64> {
    if limit < &BigUint::one() {
        return Err(Error::Domain("limit must be >= 1".into()));
    }
    fn rec(primes: &[BigUint], limit: &BigUint, prod: BigUint, cap: u64, seen: &mut u64) -> Result<u64> {
        if primes.is_empty() {
            *seen += 1;
            if *seen > cap {
                return Err(Error::Resource(format!("smooth counting cap {cap} exceeded")));
            }
            return Ok(1);
        }
        let mut total = 0u64;
        let mut prod = prod;
        loop {
            total += rec(&primes[1..], limit, prod.clone(), cap, seen)?;
            prod *= &primes[0];
            if prod > *limit {
                break;
            }
        }
        Ok(total)
    }
    let mut seen = 0u64;
    rec(s.primes(), limit, BigUint::one(), cap, &mut seen)
}

/// t_l: the number of prefix terms not exceeding l, by binary search on the
/// strictly increasing prefix.
pub fn t_l(prefix: &SequencePrefix, l: &BigUint) -> u64 {
    prefix.terms().partition_point(|t| t <= l) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Brute-force oracle: divide out primes of S, keep m iff the residue is 1.
    fn smooth_oracle(primes: &[u64], limit: u64) -> Vec<u64> {
        (1..=limit)
            .filter(|&m| {
                let mut m = m;
                for &p in primes {
                    while m % p == 0 {
                        m /= p;
                    }
                }
                m == 1
            })
            .collect()
    }

    #[test]
    fn enumerate_examples() {
        let s = PrimeSet::from_u64(&[2, 3]).unwrap();
        let got = enumerate_smooth(&s, &big(10)).unwrap();
        assert_eq!(got, vec![1u64, 2, 3, 4, 6, 8, 9].into_iter().map(big).collect::<Vec<_>>());
        assert_eq!(
            enumerate_smooth(&PrimeSet::from_u64(&[2]).unwrap(), &big(8)).unwrap(),
            vec![big(1), big(2), big(4), big(8)]
        );
        assert_eq!(enumerate_smooth(&s, &big(1)).unwrap(), vec![big(1)]);
    }

    #[test]
    fn enumerate_matches_oracle() {
        for primes in [vec![2u64], vec![2, 3], vec![2, 3, 5], vec![3, 7]] {
            let s = PrimeSet::from_u64(&primes).unwrap();
            let got = enumerate_smooth(&s, &big(5000)).unwrap();
            let want: Vec<BigUint> = smooth_oracle(&primes, 5000).into_iter().map(big).collect();
            assert_eq!(got, want, "primes {primes:?}");
        }
    }

    #[test]
    fn enumerate_cap_is_enforced() {
        let s = PrimeSet::from_u64(&[2, 3]).unwrap();
        assert!(matches!(
            enumerate_smooth_capped(&s, &big(10_000), 5),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn count_examples() {
        let s23 = PrimeSet::from_u64(&[2, 3]).unwrap();
        assert_eq!(count_smooth(&s23, &big(10)).unwrap(), 7);
        let s2 = PrimeSet::from_u64(&[2]).unwrap();
        let limit = BigUint::one() << 64;
        assert_eq!(count_smooth(&s2, &limit).unwrap(), 65);
        let s235 = PrimeSet::from_u64(&[2, 3, 5]).unwrap();
        assert_eq!(count_smooth(&s235, &big(1)).unwrap(), 1);
    }

    #[test]
    fn count_matches_enumeration() {
        for primes in [vec![2u64], vec![2, 3], vec![2, 3, 5]] {
            let s = PrimeSet::from_u64(&primes).unwrap();
            for limit in [10u64, 100, 1000, 99_999] {
                assert_eq!(
                    count_smooth(&s, &big(limit)).unwrap(),
                    enumerate_smooth(&s, &big(limit)).unwrap().len() as u64
                );
            }
        }
    }

    #[test]
    fn count_monotone_in_limit_and_s() {
        let s23 = PrimeSet::from_u64(&[2, 3]).unwrap();
        let s235 = PrimeSet::from_u64(&[2, 3, 5]).unwrap();
        let mut prev = 0;
        for limit in (1..200u64).step_by(7) {
            let c = count_smooth(&s23, &big(limit)).unwrap();
            assert!(c >= prev);
            assert!(count_smooth(&s235, &big(limit)).unwrap() >= c);
            prev = c;
        }
    }

    #[test]
    fn first_smooth_starts_at_two() {
        let s = PrimeSet::from_u64(&[2, 3]).unwrap();
        let got = first_smooth(&s, 6).unwrap();
        assert_eq!(got, vec![big(2), big(3), big(4), big(6), big(8), big(9)]);
    }

    #[test]
    fn prime_set_validation() {
        assert!(PrimeSet::from_u64(&[]).is_err());
        assert!(PrimeSet::from_u64(&[2, 2]).is_err());
        assert!(PrimeSet::from_u64(&[3, 2]).is_err());
        assert!(PrimeSet::from_u64(&[2, 4]).is_err());
    }

    #[test]
    fn t_l_examples() {
        let prefix = sequences::validate_increasing(
            vec![big(2), big(4), big(8), big(16)],
            "test".into(),
        )
        .unwrap();
        assert_eq!(t_l(&prefix, &big(8)), 3);
        assert_eq!(t_l(&prefix, &big(1)), 0);
    }

    #[test]
    fn t_l_of_smooth_prefix_matches_count() {
        // first 100 {2,3}-smooth numbers > 1; t_100 = count_smooth - 1
        let s = PrimeSet::from_u64(&[2, 3]).unwrap();
        let terms = first_smooth(&s, 100).unwrap();
        let prefix = sequences::validate_increasing(terms, "test".into()).unwrap();
        let expected = count_smooth(&s, &big(100)).unwrap() - 1;
        assert_eq!(t_l(&prefix, &big(100)), expected);
        assert_eq!(expected, 19);
    }

    #[test]
    fn substitution_identity_t_nk_equals_k() {
        // for the smooth sequence itself, t_{n_k} = k
        let s = PrimeSet::from_u64(&[2, 3, 5]).unwrap();
        let terms = first_smooth(&s, 300).unwrap();
        let prefix = sequences::validate_increasing(terms.clone(), "test".into()).unwrap();
        for (i, n_k) in terms.iter().enumerate() {
            assert_eq!(t_l(&prefix, n_k), i as u64 + 1);
        }
    }

    #[test]
    fn every_enumerated_element_factors_over_s() {
        let s = PrimeSet::from_u64(&[2, 5]).unwrap();
        for v in enumerate_smooth(&s, &big(400)).unwrap() {
            let f = crate::arith::factorize(&v).unwrap();
            assert!(f.primes().all(|p| s.contains(p)), "{v}");
        }
    }
}
