//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. This module adds the small
//! amount of glue the rest of the crate needs: integer constructors,
//! factorials and the `"p/q"` string form used in all JSON output.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Serializes as `"p"` when the denominator is 1 and `"p/q"` otherwise.
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"p/q"` or a plain integer literal. The result is reduced.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// True when `r` is an integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Smallest positive integer vector proportional to `v` (entries rational),
/// keeping the sign pattern. Returns `None` for the zero vector.
pub fn primitive_integer_vector(v: &[Rational]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs();
    Some(ints.into_iter().map(|x| x / &g).collect())
}
