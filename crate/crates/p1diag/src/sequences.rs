//! Sequence sources: polynomial evaluation, file ingestion, builtin
//! families and smooth-semigroup generation, all validated into a
//! [`SequencePrefix`] (strictly increasing positive integers).

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smooth::{self, PrimeSet};

/// Largest start-shift bound refined by integer scanning; above this the
/// coarse coefficient bound is used directly.
const SCAN_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// 2^k - 1 for k >= 2, so every term is >= 3.
    Mersenne,
    /// F_k = 2^(2^k) + 1 starting at F_0 = 3.
    Fermat,
    /// k! + 1 starting at k = 1.
    FactorialPlusOne,
    /// n_k = k.
    Identity,
}

impl Builtin {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "mersenne" => Ok(Builtin::Mersenne),
            "fermat" => Ok(Builtin::Fermat),
            "factorial-plus-one" => Ok(Builtin::FactorialPlusOne),
            "identity" => Ok(Builtin::Identity),
            other => Err(Error::Validation(format!(
                "unknown builtin sequence {other:?} (expected mersenne, fermat, factorial-plus-one or identity)"
            ))),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Builtin::Mersenne => "mersenne",
            Builtin::Fermat => "fermat",
            Builtin::FactorialPlusOne => "factorial-plus-one",
            Builtin::Identity => "identity",
        };
        f.write_str(s)
    }
}

/// Declarative source of a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    /// Integer coefficients in ascending degree order.
    Polynomial(Vec<BigInt>),
    File(PathBuf),
    Builtin(Builtin),
    Smooth(PrimeSet),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    pub start_index: u64,
    pub count: u64,
}

impl SequenceSpec {
    pub fn new(kind: SequenceKind, start_index: u64, count: u64) -> Result<Self> {
        if start_index == 0 {
            return Err(Error::Validation("start index must be >= 1".into()));
        }
        if count == 0 {
            return Err(Error::Validation("count must be >= 1".into()));
        }
        if let SequenceKind::Polynomial(coeffs) = &kind {
            let trimmed = trim_poly(coeffs);
            if trimmed.len() < 2 {
                return Err(Error::Domain(
                    "polynomial must be non-constant (degree >= 1)".into(),
                ));
            }
            if trimmed.last().unwrap().sign() != Sign::Plus {
                return Err(Error::Domain(
                    "polynomial leading coefficient must be positive".into(),
                ));
            }
        }
        Ok(SequenceSpec { kind, start_index, count })
    }

    fn describe(&self) -> String {
        match &self.kind {
            SequenceKind::Polynomial(c) => {
                let cs: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("polynomial[{}]", cs.join(","))
            }
            SequenceKind::File(p) => format!("file:{}", p.display()),
            SequenceKind::Builtin(b) => format!("builtin:{b}"),
            SequenceKind::Smooth(s) => {
                let ps: Vec<String> = s.primes().iter().map(|p| p.to_string()).collect();
                format!("smooth{{{}}}", ps.join(","))
            }
        }
    }
}

/// A validated finite prefix of a sequence: strictly increasing positive
/// integers plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SequencePrefix {
    terms: Vec<BigUint>,
    origin: String,
    /// Set when a polynomial start index was raised into the region where
    /// the sequence is positive and strictly increasing.
    start_shifted_to: Option<u64>,
}

impl SequencePrefix {
    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term by 1-based sequence index.
    pub fn term(&self, k: u64) -> Option<&BigUint> {
        self.terms.get(k as usize - 1)
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn start_shifted_to(&self) -> Option<u64> {
        self.start_shifted_to
    }
}

/// Validates a raw term list into a prefix; the error names the first
/// offending 1-based index.
pub fn validate_increasing(terms: Vec<BigUint>, origin: String) -> Result<SequencePrefix> {
    for (i, t) in terms.iter().enumerate() {
        if t.is_zero() {
            return Err(Error::Validation(format!(
                "term at index {} must be >= 1",
                i + 1
            )));
        }
        if i > 0 && terms[i - 1] >= *t {
            return Err(Error::Validation(format!(
                "terms must be strictly increasing: violation at index {}",
                i + 1
            )));
        }
    }
    Ok(SequencePrefix {
        terms,
        origin,
        start_shifted_to: None,
    })
}

/// Materializes a spec into a validated prefix. Deterministic: identical
/// specs yield identical prefixes.
pub fn materialize(spec: &SequenceSpec) -> Result<SequencePrefix> {
    let spec = SequenceSpec::new(spec.kind.clone(), spec.start_index, spec.count)?;
    let origin = spec.describe();
    match &spec.kind {
        SequenceKind::Polynomial(coeffs) => materialize_polynomial(coeffs, spec.start_index, spec.count, origin),
        SequenceKind::File(path) => {
            let all = read_sequence_file(path)?;
            let start = spec.start_index as usize;
            if start > all.len() {
                return Err(Error::Validation(format!(
                    "start index {start} is beyond the {} terms in {}",
                    all.len(),
                    path.display()
                )));
            }
            let window: Vec<BigUint> = all
                .into_iter()
                .skip(start - 1)
                .take(spec.count as usize)
                .collect();
            validate_increasing(window, origin)
        }
        SequenceKind::Builtin(b) => materialize_builtin(*b, spec.start_index, spec.count, origin),
        SequenceKind::Smooth(s) => {
            let total = spec
                .start_index
                .checked_add(spec.count)
                .ok_or_else(|| Error::Overflow("start + count overflows".into()))?
                - 1;
            let all = smooth::first_smooth(s, total)?;
            let window: Vec<BigUint> = all.into_iter().skip(spec.start_index as usize - 1).collect();
            validate_increasing(window, origin)
        }
    }
}

fn trim_poly(coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut c = coeffs.to_vec();
    while c.last().map(|x| x.is_zero()).unwrap_or(false) {
        c.pop();
    }
    c
}

fn eval_poly(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Cauchy-style bound: all real roots have |x| <= 1 + max|a_i| / a_d.
fn root_bound(coeffs: &[BigInt]) -> BigInt {
    let lead = coeffs.last().unwrap().magnitude().clone();
    let max_abs = coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| c.magnitude().clone())
        .max()
        .unwrap_or_else(BigUint::zero);
    // ceil(max/lead) + 1
    let q = (&max_abs + &lead - BigUint::one()) / &lead;
    BigInt::from(q) + 1
}

fn materialize_polynomial(
    coeffs: &[BigInt],
    requested_start: u64,
    count: u64,
    origin: String,
) -> Result<SequencePrefix> {
    let p = trim_poly(coeffs);
    let dp = derivative(&p);
    let bound = root_bound(&p).max(root_bound(&dp));
    let bound = bound.max(BigInt::zero());

    // Least n0 beyond every integer where P or P' is non-positive; refine by
    // downward scan when the coefficient bound is small enough to walk.
    let n0_min: u64 = match bound.to_u64() {
        Some(b) if b <= SCAN_LIMIT => {
            let mut found: u64 = 0;
            let mut r = b;
            loop {
                let x = BigInt::from(r);
                if eval_poly(&p, &x) <= BigInt::zero() || eval_poly(&dp, &x) <= BigInt::zero() {
                    found = r + 1;
                    break;
                }
                if r == 0 {
                    break;
                }
                r -= 1;
            }
            found.max(1)
        }
        Some(b) => b + 1,
        None => {
            return Err(Error::Resource(
                "polynomial coefficient bound too large to locate a monotone start".into(),
            ))
        }
    };

    let start = requested_start.max(n0_min);
    let shifted = (start > requested_start).then_some(start);

    let mut terms = Vec::with_capacity(count as usize);
    for n in start..start + count {
        let v = eval_poly(&p, &BigInt::from(n));
        let v = v.to_biguint().ok_or_else(|| {
            Error::Domain(format!("polynomial is non-positive at n = {n}"))
        })?;
        terms.push(v);
    }
    let mut prefix = validate_increasing(terms, origin)?;
    prefix.start_shifted_to = shifted;
    Ok(prefix)
}

fn materialize_builtin(b: Builtin, start: u64, count: u64, origin: String) -> Result<SequencePrefix> {
    let end = start
        .checked_add(count)
        .ok_or_else(|| Error::Overflow("start + count overflows".into()))?;
    let terms: Vec<BigUint> = match b {
        Builtin::Identity => (start..end).map(BigUint::from).collect(),
        Builtin::Mersenne => {
            if end > 100_000 {
                return Err(Error::Resource("mersenne index too large".into()));
            }
            // j-th term is 2^(j+1) - 1, so terms start at 3
            (start..end)
                .map(|j| (BigUint::one() << (j + 1)) - BigUint::one())
                .collect()
        }
        Builtin::Fermat => {
            if end > 33 {
                return Err(Error::Resource(
                    "fermat index too large: terms double in bit length each step".into(),
                ));
            }
            // j-th term is F_{j-1} = 2^(2^(j-1)) + 1
            (start..end)
                .map(|j| (BigUint::one() << (1u64 << (j - 1))) + BigUint::one())
                .collect()
        }
        Builtin::FactorialPlusOne => {
            if end > 100_000 {
                return Err(Error::Resource("factorial index too large".into()));
            }
            let mut fact = BigUint::one();
            let mut terms = Vec::with_capacity(count as usize);
            for j in 1..end {
                fact *= BigUint::from(j);
                if j >= start {
                    terms.push(&fact + BigUint::one());
                }
            }
            terms
        }
    };
    validate_increasing(terms, origin)
}

/// Reads the sequence file format: UTF-8 text, one base-10 positive integer
/// per line, `#` comment lines and blank lines skipped.
pub fn read_sequence_file(path: &Path) -> Result<Vec<BigUint>> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut terms = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let v: BigUint = trimmed.parse().map_err(|_| {
            Error::Validation(format!(
                "{}:{}: not a base-10 positive integer: {trimmed:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        if v.is_zero() {
            return Err(Error::Validation(format!(
                "{}:{}: terms must be >= 1",
                path.display(),
                lineno + 1
            )));
        }
        terms.push(v);
    }
    Ok(terms)
}

/// Writes a prefix in the same one-integer-per-line format.
pub fn write_sequence_file(path: &Path, terms: &[BigUint]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    for t in terms {
        writeln!(f, "{t}")?;
    }
    Ok(())
}
