//! F-rationality in characteristic p via the degree criterion
//! `deg [−pnD] + deg (B_n)_red <= 1` for all `n >= 1`, where
//! `B_n = −p[−nD] + [−pnD]`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::divisor::{is_rational_singularity, NormalizedDivisor};
use crate::error::{Error, Result};
use crate::number::{is_prime, prime_factors};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BnRecord {
    pub n: u64,
    pub p: u64,
    /// `deg (B_n)_red`.
    pub support_size: u64,
    /// `deg [−pnD]`.
    pub deg_neg: i64,
    pub value: i64,
    /// `B_n` at each non-central point, in fraction order; `0` at the centre.
    pub coefficients: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FRationality {
    FRational,
    NotFRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FRationalVerdict {
    pub p: u64,
    pub outcome: FRationality,
    /// Smallest failing `n`.
    pub witness: Option<BnRecord>,
}

impl FRationalVerdict {
    pub fn is_f_rational(&self) -> bool {
        self.outcome == FRationality::FRational
    }
}

fn overflow() -> Error {
    Error::Overflow("p·n exceeds the supported integer range".into())
}

/// For `D = sP0 − Σ a_i P_i`: `[−nD]` has coefficient `⌊n·a_i⌋` at `P_i`
/// and `−ns` at `P0`, so `B_n` is `⌊pn·a_i⌋ − p⌊n·a_i⌋` at `P_i` and zero at
/// the centre; `deg [−pnD] = −pns + Σ ⌊pn·a_i⌋`.
pub fn criterion_value(d: &NormalizedDivisor, p: u64, n: u64) -> Result<BnRecord> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let pi = p as i128;
    let pn = pi.checked_mul(n as i128).ok_or_else(overflow)?;
    let mut deg_neg = pn
        .checked_mul(d.s() as i128)
        .ok_or_else(overflow)?
        .checked_neg()
        .ok_or_else(overflow)?;
    let mut coefficients = Vec::with_capacity(d.r());
    for f in d.fractions() {
        let top = pn.checked_mul(f.num() as i128).ok_or_else(overflow)?;
        let big = Integer::div_floor(&top, &(f.den() as i128));
        let small = Integer::div_floor(&(n as i128 * f.num() as i128), &(f.den() as i128));
        deg_neg += big;
        coefficients.push(i64::try_from(big - pi * small).map_err(|_| overflow())?);
    }
    let support_size = coefficients.iter().filter(|&&c| c != 0).count() as u64;
    let deg_neg = i64::try_from(deg_neg).map_err(|_| overflow())?;
    Ok(BnRecord {
        n,
        p,
        support_size,
        deg_neg,
        value: deg_neg + support_size as i64,
        coefficients,
    })
}

fn require_rational(d: &NormalizedDivisor) -> Result<()> {
    let v = is_rational_singularity(d)?;
    if v.is_rational() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{d} is not a rational singularity; the criterion does not apply"
        )))
    }
}

/// Scans `n = 1..=period`; `B_{n+N} = B_n` and the degree term drops by
/// `pN·deg D`, so later `n` cannot fail first. The scan also stops once
/// `r − pn·deg D < 2`, an upper bound on the criterion value.
pub fn is_f_rational(d: &NormalizedDivisor, p: u64) -> Result<FRationalVerdict> {
    require_rational(d)?;
    scan(d, p)
}

fn scan(d: &NormalizedDivisor, p: u64) -> Result<FRationalVerdict> {
    let big_n = d.period() as i128;
    let nd = d.period_degree();
    let slack = (d.r() as i128 - 2) * big_n;
    for n in 1..=d.period() {
        let rec = criterion_value(d, p, n)?;
        if rec.value >= 2 {
            return Ok(FRationalVerdict {
                p,
                outcome: FRationality::NotFRational,
                witness: Some(rec),
            });
        }
        let bound = (p as i128)
            .checked_mul(n as i128)
            .and_then(|x| x.checked_mul(nd));
        if matches!(bound, Some(v) if v > slack) {
            break;
        }
    }
    Ok(FRationalVerdict {
        p,
        outcome: FRationality::FRational,
        witness: None,
    })
}

/// Primes dividing some denominator; no other prime can fail.
pub fn candidate_primes(d: &NormalizedDivisor) -> BTreeSet<u64> {
    prime_factors(d.period()).into_iter().collect()
}

pub fn failing_primes(d: &NormalizedDivisor) -> Result<BTreeSet<u64>> {
    require_rational(d)?;
    let mut out = BTreeSet::new();
    for p in candidate_primes(d) {
        if !scan(d, p)?.is_f_rational() {
            out.insert(p);
        }
    }
    Ok(out)
}
