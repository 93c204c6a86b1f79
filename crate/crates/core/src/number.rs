//! Exact scalars and the integer rounding helpers shared by the other modules.
//!
//! [`Rational`] is an unbounded fraction kept in lowest terms with a positive
//! denominator. Floor and ceiling always round toward -inf and +inf
//! respectively, independent of sign.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `⌊a / b⌋` for `b > 0`.
#[inline]
pub fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    Integer::div_floor(&a, &b)
}

/// `⌈a / b⌉` for `b > 0`.
#[inline]
pub fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    -Integer::div_floor(&-a, &b)
}

pub fn lcm(a: i64, b: i64) -> Option<i64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / a.gcd(&b)).checked_mul(b).map(i64::abs)
}

/// Formats as `num/den`, including `/1` for integers.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `INT` or `INT/INT` (optional leading sign, surrounding whitespace
/// ignored).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::parse(0, format!("malformed numerator in {t:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::parse(0, format!("malformed denominator in {t:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(0, format!("zero denominator in {t:?}")));
    }
    Ok(Rational::new(num, den))
}

pub(crate) fn to_i64(x: &BigInt, what: &str) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(format!("{what} {x} exceeds 64 bits")))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| is_prime(n)).collect()
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn ceil_rational(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}
