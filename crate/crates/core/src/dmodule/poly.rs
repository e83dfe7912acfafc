use std::fmt;

use super::scalar::Scalar;
use crate::exact::Rational;

/// Polynomial in the Euler operator `D` with coefficients in `S`.
#[derive(Clone, PartialEq)]
pub struct DPoly<S> {
    /// `coeffs[k]` multiplies `D^k`; no trailing zeros.
    coeffs: Vec<S>,
}

impl<S: Scalar> DPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        DPoly { coeffs }
    }

    pub fn zero() -> Self {
        DPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// `a D + b`.
    pub fn linear(a: S, b: S) -> Self {
        Self::new(vec![b, a])
    }

    pub fn from_rationals(a: Rational, b: Rational) -> Self {
        Self::linear(S::from_rational(a), S::from_rational(b))
    }

    /// `(a D + b)(a D + b + 1) ... (a D + b + count - 1)`.
    pub fn pochhammer(a: Rational, b: Rational, count: u64) -> Self {
        (0..count).fold(Self::one(), |acc, j| {
            acc.mul(&Self::from_rationals(
                a.clone(),
                &b + Rational::from_integer(j.into()),
            ))
        })
    }

    /// `D (D - 1) ... (D - m + 1)`.
    pub fn falling(m: u64) -> Self {
        (0..m).fold(Self::one(), |acc, j| {
            acc.mul(&Self::from_rationals(
                Rational::from_integer(1.into()),
                -Rational::from_integer(j.into()),
            ))
        })
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `D`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, at: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc.mul(at).add(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = S::zero();
        Self::new(
            (0..n)
                .map(|k| {
                    self.coeffs
                        .get(k)
                        .unwrap_or(&z)
                        .add(other.coeffs.get(k).unwrap_or(&z))
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        DPoly {
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// `p(a D + b)`.
    pub fn compose_linear(&self, a: &S, b: &S) -> Self {
        let x = Self::linear(a.clone(), b.clone());
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(&x).add(&Self::constant(c.clone()))
        })
    }

    /// `p(D + by)`.
    pub fn shift(&self, by: i64) -> Self {
        if by == 0 {
            return self.clone();
        }
        self.compose_linear(
            &S::one(),
            &S::from_rational(Rational::from_integer(by.into())),
        )
    }

    /// Quotient and remainder of division by `D + s`.
    pub fn div_rem_linear(&self, s: i64) -> (Self, S) {
        if self.is_zero() {
            return (Self::zero(), S::zero());
        }
        let root = S::from_rational(Rational::from_integer((-s).into()));
        let n = self.coeffs.len();
        let mut q = vec![S::zero(); n - 1];
        let mut carry = S::zero();
        for k in (0..n).rev() {
            let value = self.coeffs[k].add(&carry.mul(&root));
            if k == 0 {
                return (Self::new(q), value);
            }
            q[k - 1] = value.clone();
            carry = value;
        }
        unreachable!()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DPoly<T> {
        DPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Scalar> fmt::Display for DPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*D"),
                _ => format!("({c})*D^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for DPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
