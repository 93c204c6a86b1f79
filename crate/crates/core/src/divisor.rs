//! Q-divisors on the projective line and the rational-singularity test.
//!
//! Every divisor is reduced to the form `D = s·P0 − Σ a_i·P_i` with
//! `0 < a_i < 1`; the points themselves carry no further information.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::number::{
    ceil_div, ceil_rational, format_rational, lcm, parse_rational, to_i64, Rational,
};

/// A Q-divisor `Σ coeff·P_label`; labels are opaque.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QDivisor {
    terms: BTreeMap<String, Rational>,
}

impl QDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff` to the coefficient at `label`, dropping the point if the
    /// sum becomes zero.
    pub fn add_term(&mut self, label: impl Into<String>, coeff: Rational) {
        let label = label.into();
        let sum = self.terms.remove(&label).unwrap_or_else(Rational::zero) + coeff;
        if !sum.is_zero() {
            self.terms.insert(label, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<String, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, label: &str) -> Option<&Rational> {
        self.terms.get(label)
    }

    pub fn degree(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, a| acc + a)
    }

    /// `deg [nD] = Σ ⌊n·a⌋` computed on the raw coefficients.
    pub fn round_down_degree(&self, n: i64) -> BigInt {
        let n = Rational::from_integer(BigInt::from(n));
        self.terms
            .values()
            .map(|a| (a * &n).floor().to_integer())
            .sum()
    }
}

impl FromIterator<(String, Rational)> for QDivisor {
    fn from_iter<I: IntoIterator<Item = (String, Rational)>>(iter: I) -> Self {
        let mut d = QDivisor::new();
        for (label, coeff) in iter {
            d.add_term(label, coeff);
        }
        d
    }
}

/// A reduced fraction `num/den` strictly between 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 || num <= 0 || num >= den {
            return Err(Error::Domain(format!(
                "fraction {num}/{den} is not strictly between 0 and 1"
            )));
        }
        let g = num.gcd(&den);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    /// `None` for 0; an error outside `[0, 1)` or when the parts exceed 64 bits.
    pub fn from_rational(x: &Rational) -> Result<Option<Self>> {
        if x.is_zero() {
            return Ok(None);
        }
        let num = to_i64(x.numer(), "numerator")?;
        let den = to_i64(x.denom(), "denominator")?;
        Fraction::new(num, den).map(Some)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// `⌈n·num/den⌉`.
    #[inline]
    pub(crate) fn ceil_mul(&self, n: i128) -> i128 {
        ceil_div(n * self.num as i128, self.den as i128)
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let x = parse_rational(s)?;
        Fraction::from_rational(&x)?.ok_or_else(|| Error::Domain("fraction must be nonzero".into()))
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `D = s·P0 − Σ a_i·P_i` with `0 < a_i < 1`. Fractions form a multiset:
/// equal values stay separate points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawNormalized", into = "RawNormalized")]
pub struct NormalizedDivisor {
    s: i64,
    fractions: Vec<Fraction>,
    period: i64,
}

#[derive(Serialize, Deserialize)]
struct RawNormalized {
    s: i64,
    fractions: Vec<Fraction>,
}

impl TryFrom<RawNormalized> for NormalizedDivisor {
    type Error = Error;

    fn try_from(raw: RawNormalized) -> Result<Self> {
        NormalizedDivisor::new(raw.s, raw.fractions)
    }
}

impl From<NormalizedDivisor> for RawNormalized {
    fn from(d: NormalizedDivisor) -> Self {
        RawNormalized {
            s: d.s,
            fractions: d.fractions,
        }
    }
}

impl NormalizedDivisor {
    pub fn new(s: i64, fractions: Vec<Fraction>) -> Result<Self> {
        let period = fractions.iter().try_fold(1i64, |acc, f| {
            lcm(acc, f.den).ok_or_else(|| Error::Overflow("period exceeds 64 bits".into()))
        })?;
        Ok(NormalizedDivisor {
            s,
            fractions,
            period,
        })
    }

    /// Builds from rational coefficients in `[0, 1)`; zeros are dropped.
    pub fn from_rationals(s: i64, fractions: &[Rational]) -> Result<Self> {
        let mut out = Vec::with_capacity(fractions.len());
        for x in fractions {
            if x.is_negative() || *x >= Rational::from_integer(1.into()) {
                return Err(Error::Domain(format!("coefficient {x} is outside [0, 1)")));
            }
            out.extend(Fraction::from_rational(x)?);
        }
        Self::new(s, out)
    }

    /// Shorthand for tests and fixtures: `(s, &[(num, den), ...])`.
    pub fn from_pairs(s: i64, pairs: &[(i64, i64)]) -> Result<Self> {
        let fr = pairs
            .iter()
            .map(|&(n, d)| Fraction::new(n, d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(s, fr)
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn fractions(&self) -> &[Fraction] {
        &self.fractions
    }

    /// Number of non-central points.
    pub fn r(&self) -> usize {
        self.fractions.len()
    }

    pub fn degree(&self) -> Rational {
        self.fractions
            .iter()
            .fold(Rational::from_integer(self.s.into()), |acc, f| {
                acc - f.to_rational()
            })
    }

    pub fn is_ample(&self) -> bool {
        self.degree().is_positive()
    }

    /// Smallest `N > 0` with `N·D` integral.
    pub fn period(&self) -> u64 {
        self.period as u64
    }

    /// `N·deg D` for `N = period`, an integer.
    pub(crate) fn period_degree(&self) -> i128 {
        let n = self.period as i128;
        self.fractions.iter().fold(self.s as i128 * n, |acc, f| {
            acc - f.num as i128 * (n / f.den as i128)
        })
    }

    /// The same divisor with fractions sorted by value.
    pub fn sorted(&self) -> NormalizedDivisor {
        let mut out = self.clone();
        out.fractions.sort();
        out
    }

    /// `(s, a_1, ..., a_r)` as written in the grammar of the CLI, e.g.
    /// `2 - 1/2 - 2/3`.
    pub fn to_expression(&self) -> String {
        let mut out = self.s.to_string();
        for f in &self.fractions {
            out.push_str(&format!(" - {f}"));
        }
        out
    }

    pub(crate) fn require_ample(&self) -> Result<()> {
        if self.is_ample() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "divisor {self} has degree {} <= 0 and is not ample",
                format_rational(&self.degree())
            )))
        }
    }
}

impl fmt::Display for NormalizedDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.s)?;
        if self.fractions.is_empty() {
            write!(f, " {{}}")?;
        } else {
            write!(f, " {{")?;
            for (i, x) in self.fractions.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

/// Moves every integer part onto a single central point: each coefficient
/// `a` contributes `⌈a⌉` to `s` and the fraction `⌈a⌉ − a` when nonzero.
pub fn normalize(d: &QDivisor) -> Result<NormalizedDivisor> {
    let mut s = BigInt::zero();
    let mut fractions = Vec::new();
    for a in d.terms().values() {
        let up = ceil_rational(a);
        let frac = Rational::from_integer(up.clone()) - a;
        s += up;
        fractions.extend(Fraction::from_rational(&frac)?);
    }
    NormalizedDivisor::new(to_i64(&s, "central coefficient")?, fractions)
}

/// `deg [nD] = n·s − Σ ⌈n·a_i⌉` for `n >= 1`.
pub fn deg_floor(d: &NormalizedDivisor, n: u64) -> i128 {
    let n = n as i128;
    d.fractions
        .iter()
        .fold(n * d.s as i128, |acc, f| acc - f.ceil_mul(n))
}

pub fn period(d: &NormalizedDivisor) -> u64 {
    d.period()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rationality {
    Rational,
    NotRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalityVerdict {
    pub outcome: Rationality,
    /// Smallest `n` with `deg [nD] <= -2`.
    pub witness_n: Option<u64>,
    pub witness_value: Option<i64>,
}

impl RationalityVerdict {
    pub fn is_rational(&self) -> bool {
        self.outcome == Rationality::Rational
    }
}

/// Rational singularity iff `deg [nD] >= -1` for every `n >= 1`.
///
/// Scans `n = 1..=period`, which is complete because
/// `deg [(n+N)D] = deg [nD] + N·deg D`. The scan stops earlier once
/// `n·deg D >= r − 1`, since `deg [nD] >= n·deg D − r`.
pub fn is_rational_singularity(d: &NormalizedDivisor) -> Result<RationalityVerdict> {
    d.require_ample()?;
    let big_n = d.period as i128;
    let nd = d.period_degree();
    let slack = (d.r() as i128 - 1) * big_n;
    for n in 1..=d.period() {
        let value = deg_floor(d, n);
        if value <= -2 {
            return Ok(RationalityVerdict {
                outcome: Rationality::NotRational,
                witness_n: Some(n),
                witness_value: Some(value as i64),
            });
        }
        if matches!((n as i128).checked_mul(nd), Some(v) if v >= slack) {
            break;
        }
    }
    Ok(RationalityVerdict {
        outcome: Rationality::Rational,
        witness_n: None,
        witness_value: None,
    })
}
