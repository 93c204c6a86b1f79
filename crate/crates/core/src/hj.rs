//! Hirzebruch–Jung continued fractions
//! `[[b1, ..., bm]] = b1 - 1/(b2 - 1/(... - 1/bm))` with integer entries `>= 2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::{ceil_rational, to_i64, Rational};

/// Entries of a Hirzebruch–Jung expansion; every entry is at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HjSequence(Vec<i64>);

impl HjSequence {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|&&b| b < 2) {
            return Err(Error::Domain(format!(
                "continued fraction entries must be >= 2, got {bad}"
            )));
        }
        Ok(HjSequence(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for HjSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]]")
    }
}

/// Ordered subsequence of expansion entries different from 2.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TSignature(Vec<i64>);

impl TSignature {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The unique expansion of `x > 1` with all entries `>= 2`.
pub fn hj_expand(x: &Rational) -> Result<HjSequence> {
    if *x <= Rational::one() {
        return Err(Error::Domain(format!("expansion needs x > 1, got {x}")));
    }
    let mut entries = Vec::new();
    let mut rest = x.clone();
    loop {
        let b = ceil_rational(&rest);
        entries.push(to_i64(&b, "continued fraction entry")?);
        let gap = Rational::from_integer(b) - &rest;
        if gap.is_zero() {
            break;
        }
        rest = gap.recip();
    }
    Ok(HjSequence(entries))
}

/// Evaluates right to left; every partial tail exceeds 1 so no division by
/// zero can occur.
pub fn hj_eval(seq: &HjSequence) -> Result<Rational> {
    hj_tails(seq).map(|tails| tails.into_iter().next().expect("nonempty"))
}

/// `e_j = [[b_j, ..., b_m]]` for every suffix, in order `j = 1..m`.
pub fn hj_tails(seq: &HjSequence) -> Result<Vec<Rational>> {
    if seq.is_empty() {
        return Err(Error::Domain("empty continued fraction".into()));
    }
    let mut tails = Vec::with_capacity(seq.len());
    let mut acc: Option<Rational> = None;
    for &b in seq.entries().iter().rev() {
        let b = Rational::from_integer(BigInt::from(b));
        let v = match acc {
            None => b,
            Some(prev) => b - prev.recip(),
        };
        tails.push(v.clone());
        acc = Some(v);
    }
    tails.reverse();
    Ok(tails)
}

pub fn t_signature(seq: &HjSequence) -> TSignature {
    TSignature(seq.entries().iter().copied().filter(|&b| b != 2).collect())
}

/// Two closed-form families of expansions with a known numerator and
/// denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `[[(2)^a, n, (2)^b]]`, requires `n >= 2`.
    TwoNTwo { a: u64, n: u64, b: u64 },
    /// `[[(2)^a, 3, (2)^b, 3, (2)^c]]`.
    TwoThreeTwoThreeTwo { a: u64, b: u64, c: u64 },
}

impl ClosedForm {
    /// The sequence the closed form describes.
    pub fn sequence(&self) -> Result<HjSequence> {
        let twos = |k: u64| std::iter::repeat_n(2, k as usize);
        let entries: Vec<i64> = match *self {
            ClosedForm::TwoNTwo { a, n, b } => {
                check_n(n)?;
                twos(a).chain([n as i64]).chain(twos(b)).collect()
            }
            ClosedForm::TwoThreeTwoThreeTwo { a, b, c } => twos(a)
                .chain([3])
                .chain(twos(b))
                .chain([3])
                .chain(twos(c))
                .collect(),
        };
        HjSequence::new(entries)
    }
}

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("closed form needs n >= 2, got {n}")));
    }
    Ok(())
}

/// Evaluates the closed-form fraction directly from its numerator and
/// denominator polynomials (no continued-fraction recursion).
pub fn hj_closed_form(kind: ClosedForm) -> Result<Rational> {
    let big = BigInt::from;
    let (num, den) = match kind {
        ClosedForm::TwoNTwo { a, n, b } => {
            check_n(n)?;
            let (a, n, b) = (big(a), big(n), big(b));
            let one = BigInt::one();
            let two = big(2);
            let num = ((&a + 1u32) * &n - (&two * &a + 1u32)) * &b + (&a + 1u32) * &n - &a;
            let den = (&a * &n - (&two * &a - &one)) * &b + &a * &n - (&a - &one);
            (num, den)
        }
        ClosedForm::TwoThreeTwoThreeTwo { a, b, c } => {
            let (a, b, c) = (big(a), big(b), big(c));
            let num = ((&a + 2u32) * &b + big(3) * &a + 5u32) * &c
                + (big(2) * &a + 4u32) * &b
                + big(5) * &a
                + 8u32;
            let den = ((&a + 1u32) * &b + big(3) * &a + 2u32) * &c
                + (big(2) * &a + 2u32) * &b
                + big(5) * &a
                + 3u32;
            (num, den)
        }
    };
    Ok(Rational::new(num, den))
}
