//! The I-series of a Fano complete intersection, its regularized fundamental
//! term and one-pointed descendant invariants.
//!
//! Conventions: `mu_j = H^j`, dual basis `H^{n-j} / delta` with
//! `delta = integral of H^n`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{
    exp_correction, factorial, factorial_q, pochhammer, CohClass, CohSeries, LinearForm, QSeries,
    Rational, ScalarSeries,
};
use crate::variety::Variety;

#[derive(Clone, Debug, PartialEq)]
pub struct ISeriesResult {
    pub alpha: Rational,
    /// `I-hat`: coefficient of `q^d` is the ratio of Pochhammer products.
    pub raw: CohSeries,
    /// `e^{-alpha q} I-hat`.
    pub corrected: CohSeries,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularizedPeriod {
    pub coeffs: Vec<Rational>,
}

impl RegularizedPeriod {
    pub fn to_series(&self) -> ScalarSeries {
        QSeries::new(self.coeffs.clone())
    }
}

/// `prod d_a! / prod w_a!` for index 1, zero otherwise.
pub fn alpha(v: &Variety) -> Rational {
    if v.index() != 1 {
        return Rational::zero();
    }
    let num: BigInt = v.degrees().iter().map(|&d| factorial(d)).product();
    let den: BigInt = v.weights().iter().map(|&w| factorial(w)).product();
    Rational::new(num, den)
}

/// `I-hat_d` in `Q[H]/(H^{n+1})`.
fn raw_coefficient(v: &Variety, d: u64, n: usize) -> CohClass {
    let mut num = CohClass::one(n);
    for &deg in v.degrees() {
        num = &num * &pochhammer(&LinearForm::from_ints(deg as i64, 1), d * deg, n);
    }
    let mut den = CohClass::one(n);
    for &w in v.weights() {
        den = &den * &pochhammer(&LinearForm::from_ints(w as i64, 1), d * w, n);
    }
    // the constant term of the denominator is a product of factorials
    &num * &den
        .invert()
        .expect("Pochhammer product has nonzero constant term")
}

pub fn iseries(v: &Variety, order: usize) -> ISeriesResult {
    let n = v.dim();
    let raw = QSeries::new(
        (0..=order as u64)
            .map(|d| raw_coefficient(v, d, n))
            .collect(),
    );
    let a = alpha(v);
    let corrected = raw.mul_scalar_series(&exp_correction(&a, order));
    ISeriesResult {
        alpha: a,
        raw,
        corrected,
    }
}

/// `prod_{i=0}^{l} (d_i d)! / prod_j (w_j d)!` with `d_0` the index.
pub fn regularized_closed_form(v: &Variety, d: u64) -> Rational {
    let num: BigInt = std::iter::once(v.index())
        .chain(v.degrees().iter().copied())
        .map(|x| factorial(x * d))
        .product();
    let den: BigInt = v.weights().iter().map(|&w| factorial(w * d)).product();
    Rational::new(num, den)
}

/// `a_d = (d_0 d)! * [H^0] I-hat_d`, checked against the closed form.
pub fn regularized(v: &Variety, order: usize) -> Result<RegularizedPeriod> {
    let d0 = v.index();
    let mut coeffs = Vec::with_capacity(order + 1);
    for d in 0..=order as u64 {
        let fundamental = raw_coefficient(v, d, 0).coeff(0);
        let a = factorial_q(d0 * d) * fundamental;
        let expected = regularized_closed_form(v, d);
        if a != expected {
            return Err(Error::InternalInconsistency(format!(
                "regularized coefficient {d}: {a} from the I-series, {expected} from the closed form"
            )));
        }
        coeffs.push(a);
    }
    Ok(RegularizedPeriod { coeffs })
}

/// `<tau_a H^c>_d` read off a precomputed I-series. Zero unless
/// `a = n + d_0 d - 2 - c`; `series` must reach degree `d`.
pub fn one_pointed_from(series: &ISeriesResult, v: &Variety, a: u64, c: usize, d: u64) -> Rational {
    let n = v.dim();
    let top = n as u64 + v.index() * d;
    if c > n || top < 2 + c as u64 || a != top - 2 - c as u64 {
        return Rational::zero();
    }
    v.h_degree() * series.corrected.coeff(d as usize).coeff(n - c)
}

pub fn one_pointed(v: &Variety, a: u64, c: usize, d: u64) -> Rational {
    one_pointed_from(&iseries(v, d as usize), v, a, c, d)
}
