use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{rat, to_string, Rational};
use crate::error::{Error, Result};

/// An element of `Q[H] / (H^{dim+1})`: a truncated polynomial in the
/// hyperplane class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CohClass {
    coeffs: Vec<Rational>,
}

impl CohClass {
    pub fn zero(dim: usize) -> Self {
        CohClass {
            coeffs: vec![Rational::zero(); dim + 1],
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut s = Self::zero(dim);
        s.coeffs[0] = c;
        s
    }

    /// `H^power`, which is the zero class once `power > dim`.
    pub fn h_power(dim: usize, power: usize) -> Self {
        let mut s = Self::zero(dim);
        if power <= dim {
            s.coeffs[power] = Rational::one();
        }
        s
    }

    /// Builds a class from coefficients of `H^0, H^1, ...`; terms past `dim`
    /// are dropped and missing ones are zero.
    pub fn from_coeffs(dim: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut s = Self::zero(dim);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `H^m` (zero past the truncation).
    pub fn coeff(&self, m: usize) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CohClass {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::TruncationMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CohClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.dim();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse in the truncated ring.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.dim();
        let inv0 = c0.recip();
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0.clone();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                acc += &self.coeffs[k] * &out.coeffs[m - k];
            }
            out.coeffs[m] = -acc * &inv0;
        }
        Ok(out)
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "{}", to_string(c))?,
                1 => write!(f, "{}*H", to_string(c))?,
                _ => write!(f, "{}*H^{m}", to_string(c))?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// The operator impls panic on mismatched truncations; they are used where the
// dimension is fixed by construction. Use `try_add`/`try_mul` at boundaries.
impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        self.try_add(rhs).expect("cohomology truncation mismatch")
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        self + &(-rhs)
    }
}

impl Mul for &CohClass {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        self.try_mul(rhs).expect("cohomology truncation mismatch")
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass {
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

/// The linear form `a*H + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub a: Rational,
    pub b: Rational,
}

impl LinearForm {
    pub fn new(a: Rational, b: Rational) -> Self {
        LinearForm { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        LinearForm::new(rat(a), rat(b))
    }

    pub fn shifted(&self, by: i64) -> Self {
        LinearForm::new(self.a.clone(), &self.b + rat(by))
    }

    pub fn to_class(&self, dim: usize) -> CohClass {
        CohClass::from_coeffs(dim, [self.b.clone(), self.a.clone()])
    }
}

/// Rising product `x (x+1) ... (x+count-1)` in `Q[H]/(H^{dim+1})`.
pub fn pochhammer(x: &LinearForm, count: u64, dim: usize) -> CohClass {
    let mut acc = CohClass::one(dim);
    let mut factor = x.to_class(dim);
    for _ in 0..count {
        acc = &acc * &factor;
        factor.coeffs[0] += Rational::one();
    }
    acc
}
