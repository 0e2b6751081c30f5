//! Arbitrary-precision integer primitives: primality, factorization, gcd
//! and p-adic valuation. Everything here is a pure function on immutable
//! values and safe to call from any number of worker threads.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default trial-division bound used by [`factorize`].
pub const DEFAULT_TRIAL_BOUND: u64 = 100_000;

/// Pollard-rho attempts before a cofactor is declared unfactored.
const RHO_ATTEMPTS: u32 = 24;
/// Iteration cap per rho attempt.
const RHO_ITERATIONS: u64 = 1 << 20;

/// A positive integer as a multiset of (prime, exponent) pairs.
///
/// Primes are strictly increasing, exponents are at least 1 and the
/// product of `prime^exponent` reconstructs the original integer exactly.
/// The integer 1 is the empty product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::report::factor_pairs")]
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Builds a factorization from (prime, exponent) pairs, checking every
    /// invariant: primality, strict ordering, positive exponents.
    pub fn new(factors: Vec<(BigUint, u32)>) -> Result<Self> {
        for window in factors.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::Domain("factor primes must be strictly increasing".into()));
            }
        }
        for (p, e) in &factors {
            if *e == 0 {
                return Err(Error::Domain(format!("exponent of {p} must be >= 1")));
            }
            if !is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
        }
        Ok(Factorization { factors })
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::one();
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        v
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(DEFAULT_TRIAL_BOUND))
}

/// Primes up to `bound` inclusive, by Eratosthenes.
pub fn sieve(bound: u64) -> Vec<u64> {
    let bound = bound as usize;
    let mut is_comp = vec![false; bound + 1];
    let mut out = Vec::new();
    for p in 2..=bound {
        if !is_comp[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= bound {
                is_comp[q] = true;
                q += p;
            }
        }
    }
    out
}

/// Largest n for which the fixed Miller-Rabin base set below is a proven
/// deterministic primality test (~3.3e24, Sorenson & Webster).
fn deterministic_mr_limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

const DETERMINISTIC_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Rounds of randomized Miller-Rabin above the deterministic limit.
const PROBABILISTIC_ROUNDS: u32 = 64;

/// Miller-Rabin primality test: deterministic below ~3.3e24, 64 rounds of
/// randomized bases (seeded from the input, so the answer is reproducible)
/// above.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    // n - 1 = d * 2^s with d odd
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let witness = |a: &BigUint| -> bool {
        // true = composite witness found
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    if n <= deterministic_mr_limit() {
        for &a in &DETERMINISTIC_BASES {
            let a = BigUint::from(a);
            if &a % n == BigUint::zero() {
                continue;
            }
            if witness(&a) {
                return false;
            }
        }
        return true;
    }

    let mut rng = seeded_rng(n, 0x6d72);
    for _ in 0..PROBABILISTIC_ROUNDS {
        let a = random_below(&mut rng, &(n - 3u32)) + 2u32; // in [2, n-2]
        if witness(&a) {
            return false;
        }
    }
    true
}

fn seeded_rng(n: &BigUint, salt: u64) -> ChaCha8Rng {
    let digits = n.to_u64_digits();
    let mut seed = salt;
    for d in digits {
        seed = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(d);
    }
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    loop {
        let mut digits = vec![0u64; bits.div_ceil(64) as usize];
        for d in digits.iter_mut() {
            *d = rng.gen();
        }
        let mut v = BigUint::new(digits.iter().flat_map(|d| [(*d & 0xffff_ffff) as u32, (*d >> 32) as u32]).collect());
        v >>= (64 * digits.len() as u64).saturating_sub(bits);
        if &v < bound {
            return v;
        }
    }
}

/// Factors `m` into primes: trial division by all primes up to
/// [`DEFAULT_TRIAL_BOUND`], then Brent's variant of Pollard rho on the
/// remaining cofactors with a deterministic primality test in between.
///
/// A cofactor that survives the rho retry budget is reported through
/// [`Error::IncompleteFactorization`], never silently returned as prime.
pub fn factorize(m: &BigUint) -> Result<Factorization> {
    if m.is_zero() {
        return Err(Error::Domain("factorize: input must be >= 1".into()));
    }
    let mut exponents: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = m.clone();

    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            bump(&mut exponents, pb.clone())?;
        }
    }
    if rest.is_one() {
        return collect(exponents);
    }
    // rest has no prime factor below the trial bound
    let mut stack = vec![rest];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            bump(&mut exponents, c)?;
            continue;
        }
        match rho_split(&c) {
            Some(f) => {
                let q = &c / &f;
                stack.push(f);
                stack.push(q);
            }
            None => {
                let partial: Vec<_> = exponents.into_iter().collect();
                return Err(Error::IncompleteFactorization {
                    value: m.clone(),
                    cofactor: c,
                    partial,
                });
            }
        }
    }
    collect(exponents)
}

fn bump(map: &mut BTreeMap<BigUint, u32>, p: BigUint) -> Result<()> {
    let e = map.entry(p).or_insert(0);
    *e = e
        .checked_add(1)
        .ok_or_else(|| Error::Overflow("prime exponent exceeds u32".into()))?;
    Ok(())
}

fn collect(map: BTreeMap<BigUint, u32>) -> Result<Factorization> {
    Ok(Factorization {
        factors: map.into_iter().collect(),
    })
}

/// One nontrivial factor of composite odd `n`, or None if the retry budget
/// runs out. Brent's cycle detection with batched gcds.
fn rho_split(n: &BigUint) -> Option<BigUint> {
    debug_assert!(!is_prime(n));
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut rng = seeded_rng(n, 0x72686f);
    for _ in 0..RHO_ATTEMPTS {
        let c = random_below(&mut rng, &(n - 2u32)) + 1u32;
        let mut y = random_below(&mut rng, &(n - 2u32)) + 1u32;
        let step = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut ys);
        let mut g = one.clone();
        let mut r: u64 = 1;
        let mut q = one.clone();
        let m: u64 = 128;
        let mut iterations: u64 = 0;
        'outer: loop {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
                iterations += m;
                if iterations > RHO_ITERATIONS {
                    break 'outer;
                }
                if g == one {
                    continue;
                }
                if &g == n {
                    // overshot: back up one step at a time
                    let mut z = ys.clone();
                    loop {
                        z = step(&z);
                        let diff = if x > z { &x - &z } else { &z - &x };
                        g = diff.gcd(n);
                        if !g.is_one() {
                            break;
                        }
                    }
                }
                if g != one && &g != n {
                    return Some(g);
                }
                break 'outer;
            }
            r *= 2;
        }
    }
    None
}

/// p-adic valuation: the largest k with p^k dividing m, by repeated exact
/// division.
pub fn nu(p: &BigUint, m: &BigUint) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("nu: {p} is not prime")));
    }
    if m.is_zero() {
        return Err(Error::Domain("nu: m must be >= 1".into()));
    }
    let mut k: u32 = 0;
    let mut rest = m.clone();
    while (&rest % p).is_zero() {
        rest /= p;
        k = k
            .checked_add(1)
            .ok_or_else(|| Error::Overflow("valuation exceeds u32".into()))?;
    }
    Ok(k)
}

/// Greatest common divisor of two positive integers.
pub fn gcd(a: &BigUint, b: &BigUint) -> Result<BigUint> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("gcd: inputs must be >= 1".into()));
    }
    Ok(a.gcd(b))
}

/// Natural logarithm of a positive big integer, accurate to ~1e-15 relative
/// error: the top 53 bits carry the mantissa, the discarded bits contribute
/// an exact multiple of ln 2.
pub fn ln_big(n: &BigUint) -> Result<f64> {
    if n.is_zero() {
        return Err(Error::Domain("ln_big: input must be >= 1".into()));
    }
    let bits = n.bits();
    if bits <= 53 {
        return Ok(n.to_f64().expect("fits in f64").ln());
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().expect("53 bits fit in f64");
    Ok(top.ln() + shift as f64 * std::f64::consts::LN_2)
}
