use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use super::poly::DPoly;
use super::scalar::{LambdaPoly, Scalar};
use crate::error::{Error, Result};
use crate::exact::{QSeries, Rational, ScalarSeries};

/// Differential operator `sum_i z^i p_i(D)` with `D = z d/dz`, powers of `z`
/// kept on the left. `D z = z (D + 1)`.
#[derive(Clone, PartialEq)]
pub struct DiffOp<S> {
    terms: BTreeMap<i64, DPoly<S>>,
}

pub type RationalOp = DiffOp<Rational>;
pub type LambdaOp = DiffOp<LambdaPoly>;

impl<S: Scalar> DiffOp<S> {
    pub fn zero() -> Self {
        DiffOp {
            terms: BTreeMap::new(),
        }
    }

    /// `z^power p(D)`.
    pub fn term(power: i64, p: DPoly<S>) -> Self {
        let mut op = Self::zero();
        op.insert(power, p);
        op
    }

    pub fn one() -> Self {
        Self::term(0, DPoly::one())
    }

    pub fn z_pow(power: i64) -> Self {
        Self::term(power, DPoly::one())
    }

    /// The Euler operator.
    pub fn d() -> Self {
        Self::term(0, DPoly::linear(S::one(), S::zero()))
    }

    pub fn constant(c: S) -> Self {
        Self::term(0, DPoly::constant(c))
    }

    /// `d/dz = z^{-1} D`.
    pub fn partial() -> Self {
        Self::term(-1, DPoly::linear(S::one(), S::zero()))
    }

    /// `(-d/dz)^m = (-1)^m z^{-m} D (D-1) ... (D-m+1)`.
    pub fn neg_partial_pow(m: u64) -> Self {
        let p = DPoly::falling(m);
        let p = if m % 2 == 1 { p.neg() } else { p };
        Self::term(-(m as i64), p)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, DPoly<S>)>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (i, p)| acc.add(&Self::term(i, p)))
    }

    fn insert(&mut self, power: i64, p: DPoly<S>) {
        if p.is_zero() {
            self.terms.remove(&power);
        } else {
            self.terms.insert(power, p);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, DPoly<S>> {
        &self.terms
    }

    pub fn coeff(&self, power: i64) -> DPoly<S> {
        self.terms.get(&power).cloned().unwrap_or_else(DPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&i, p) in &other.terms {
            let sum = out.coeff(i).add(p);
            out.insert(i, sum);
        }
        out
    }

    pub fn neg(&self) -> Self {
        DiffOp {
            terms: self.terms.iter().map(|(&i, p)| (i, p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(&i, p)| (i, p.scale(c))))
    }

    /// Product in normal form: `(z^i p)(z^j q) = z^{i+j} p(D+j) q(D)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&i, p) in &self.terms {
            for (&j, q) in &other.terms {
                let prod = p.shift(j).mul(q);
                let sum = out.coeff(i + j).add(&prod);
                out.insert(i + j, sum);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `L'` with `D^s L' = self`; each `p_i` must be divisible by `(D+i)^s`.
    pub fn left_divide_power_of_d(&self, s: u32) -> Result<Self> {
        let mut out = Self::zero();
        for (&i, p) in &self.terms {
            let mut q = p.clone();
            for _ in 0..s {
                let (quot, rem) = q.div_rem_linear(i);
                if !rem.is_zero() {
                    return Err(Error::NotLeftDivisible {
                        power: i,
                        shift: i,
                        exponent: s,
                        remainder: rem.to_string(),
                    });
                }
                q = quot;
            }
            out.insert(i, q);
        }
        debug_assert!(Self::d().pow(s).mul(&out) == *self);
        Ok(out)
    }

    /// `L'` with `L' D = self`; each `p_i` must vanish at `D = 0`.
    pub fn right_divide_by_d(&self) -> Result<Self> {
        let mut out = Self::zero();
        for (&i, p) in &self.terms {
            let (q, rem) = p.div_rem_linear(0);
            if !rem.is_zero() {
                return Err(Error::NotLeftDivisible {
                    power: i,
                    shift: 0,
                    exponent: 1,
                    remainder: rem.to_string(),
                });
            }
            out.insert(i, q);
        }
        debug_assert!(out.mul(&Self::d()) == *self);
        Ok(out)
    }

    /// Rewrites the operator in `t = -1/z`: `z^i p(D_z)` becomes
    /// `(-1)^i t^{-i} p(-D_t)`.
    pub fn substitute_neg_inverse(&self) -> Self {
        let minus_one = S::one().neg();
        Self::from_terms(self.terms.iter().map(|(&i, p)| {
            let q = p.compose_linear(&minus_one, &S::zero());
            (-i, if i % 2 == 0 { q } else { q.neg() })
        }))
    }

    /// Multiplies on the left by the power of `z` that makes the lowest power 0.
    pub fn normalize_min_power(&self) -> (Self, i64) {
        match self.min_power() {
            None => (self.clone(), 0),
            Some(m) => (Self::z_pow(-m).mul(self), -m),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DiffOp<T> {
        DiffOp::from_terms(self.terms.iter().map(|(&i, p)| (i, p.map(&f))))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&i, p)| {
                let poly: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
                json!({"z": i, "poly": poly})
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Malformed(format!("operator JSON: {what}"));
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"terms\" array"))?;
        let mut out = Self::zero();
        for t in terms {
            let i = t
                .get("z")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad("term without integer \"z\""))?;
            let poly = t
                .get("poly")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("term without \"poly\" array"))?
                .iter()
                .map(|c| match c {
                    Value::String(s) => S::parse_scalar(s),
                    Value::Number(n) => S::parse_scalar(&n.to_string()),
                    _ => Err(bad("coefficient is not a string")),
                })
                .collect::<Result<Vec<S>>>()?;
            out = out.add(&Self::term(i, DPoly::new(poly)));
        }
        Ok(out)
    }
}

impl LambdaOp {
    /// Ring homomorphism `λ -> at`.
    pub fn specialize(&self, at: &Rational) -> RationalOp {
        self.map(|c| c.eval(at))
    }
}

impl RationalOp {
    /// `sum_i z^i p_i(D)` applied to a series: the `q^m` coefficient is
    /// `sum_i p_i(m - i) s_{m-i}`. The result is known through
    /// `order(s) - max(0, max i) - max(0, -min i)`.
    pub fn apply(&self, s: &ScalarSeries) -> Result<ScalarSeries> {
        let n = s.order() as i64;
        let (lo, hi) = match (self.min_power(), self.max_power()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Ok(QSeries::constant(<Rational as Zero>::zero(), s.order())),
        };
        let coeff_at = |m: i64| -> Rational {
            let mut acc = <Rational as Zero>::zero();
            for (&i, p) in &self.terms {
                let k = m - i;
                if (0..=n).contains(&k) {
                    acc += p.eval(&Rational::from_integer(k.into())) * s.coeff(k as usize);
                }
            }
            acc
        };
        // negative powers must not produce terms below q^0
        for m in lo.min(0)..0 {
            if !Zero::is_zero(&coeff_at(m)) {
                return Err(Error::LaurentUnderflow { power: m });
            }
        }
        let out_order = n - hi.max(0) - (-lo).max(0);
        if out_order < 0 {
            return Err(Error::LaurentUnderflow { power: lo });
        }
        Ok(QSeries::new((0..=out_order).map(coeff_at).collect()))
    }

    /// Power-series solution with constant term `c0` of an operator whose
    /// lowest power of `z` is 0: `c_m p_0(m) = -sum_{i>=1} p_i(m-i) c_{m-i}`.
    pub fn series_solution(&self, c0: &Rational, order: usize) -> Result<ScalarSeries> {
        if self.min_power() != Some(0) {
            return Err(Error::DegenerateOperator);
        }
        let p0 = &self.terms[&0];
        if !Zero::is_zero(&(p0.eval(&<Rational as Zero>::zero()) * c0)) {
            return Err(Error::DegenerateOperator);
        }
        let mut c = vec![c0.clone()];
        for m in 1..=order as i64 {
            let lead = p0.eval(&Rational::from_integer(m.into()));
            if Zero::is_zero(&lead) {
                return Err(Error::ResonantIndicialRoot { m: m as u64 });
            }
            let mut acc = <Rational as Zero>::zero();
            for (&i, p) in self.terms.range(1..=m) {
                let k = m - i;
                acc += p.eval(&Rational::from_integer(k.into())) * &c[k as usize];
            }
            c.push(-acc / lead);
        }
        Ok(QSeries::new(c))
    }
}

impl<S: Scalar> fmt::Display for DiffOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&i, p)| match i {
                0 => format!("[{p}]"),
                1 => format!("z*[{p}]"),
                _ => format!("z^{i}*[{p}]"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for DiffOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
