use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::{parse, to_string};
use crate::exact::Rational;

/// Commutative coefficient ring of operators.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    fn parse_scalar(s: &str) -> Result<Self>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn parse_scalar(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Polynomial in the formal parameter `λ` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LambdaPoly {
    /// `coeffs[k]` multiplies `λ^k`; no trailing zeros.
    coeffs: Vec<Rational>,
}

impl LambdaPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        LambdaPoly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `λ` itself.
    pub fn lambda() -> Self {
        Self::new(vec![<Rational as Zero>::zero(), <Rational as One>::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(<Rational as Zero>::zero(), |acc, c| acc * at + c)
    }
}

impl Scalar for LambdaPoly {
    fn zero() -> Self {
        LambdaPoly::default()
    }
    fn one() -> Self {
        Self::constant(<Rational as One>::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = <Rational as Zero>::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + other.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![<Rational as Zero>::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
    fn neg(&self) -> Self {
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn from_rational(r: Rational) -> Self {
        Self::constant(r)
    }

    /// Accepts sums of terms `c`, `c*λ`, `c*λ^k`, `λ^k`, `-λ`.
    fn parse_scalar(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("not a polynomial in λ: {s:?}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            if i > 0 && (ch == '+' || ch == '-') && !text[..i].ends_with('^') {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        let mut acc = Self::zero();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-<Rational as One>::one(), rest),
                None => (
                    <Rational as One>::one(),
                    term.strip_prefix('+').unwrap_or(term),
                ),
            };
            let (coef, power) = match body.split_once('λ') {
                None => (parse(body).map_err(|_| bad())?, 0usize),
                Some((c, p)) => {
                    let coef = match c {
                        "" => <Rational as One>::one(),
                        _ => parse(c.strip_suffix('*').ok_or_else(bad)?).map_err(|_| bad())?,
                    };
                    let power = match p {
                        "" => 1,
                        _ => p
                            .strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse()
                            .map_err(|_| bad())?,
                    };
                    (coef, power)
                }
            };
            let mut coeffs = vec![<Rational as Zero>::zero(); power + 1];
            coeffs[power] = sign * coef;
            acc = acc.add(&Self::new(coeffs));
        }
        Ok(acc)
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let text = to_string(c);
            let body = match text.strip_prefix('-') {
                Some(rest) => {
                    write!(f, "-")?;
                    rest.to_string()
                }
                None => {
                    if !first {
                        write!(f, "+")?;
                    }
                    text
                }
            };
            first = false;
            match k {
                0 => write!(f, "{body}")?,
                1 => write!(f, "{body}*λ")?,
                _ => write!(f, "{body}*λ^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
