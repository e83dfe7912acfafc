use std::fmt;

use num_traits::{One, Zero};

use super::cohomology::CohClass;
use super::rational::{factorial_q, to_string, Rational};
use crate::error::{Error, Result};

/// Coefficient ring of a truncated q-series.
///
/// Zero and one are produced from an existing element so that coefficient
/// types carrying a truncation (like [`CohClass`]) keep it.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_c(&self, other: &Self) -> Result<Self>;
    fn mul_c(&self, other: &Self) -> Result<Self>;
    fn neg_c(&self) -> Self;
    fn scale_c(&self, r: &Rational) -> Self;
    fn invert_c(&self) -> Result<Self>;
    /// Truncation key that must agree between operands.
    fn shape(&self) -> usize {
        0
    }
}

impl Coefficient for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn mul_c(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn neg_c(&self) -> Self {
        -self
    }
    fn scale_c(&self, r: &Rational) -> Self {
        self * r
    }
    fn invert_c(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::NotInvertible)
        } else {
            Ok(self.recip())
        }
    }
}

impl Coefficient for CohClass {
    fn zero_like(&self) -> Self {
        CohClass::zero(self.dim())
    }
    fn one_like(&self) -> Self {
        CohClass::one(self.dim())
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn mul_c(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }
    fn neg_c(&self) -> Self {
        -self
    }
    fn scale_c(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn invert_c(&self) -> Result<Self> {
        self.invert()
    }
    fn shape(&self) -> usize {
        self.dim()
    }
}

/// Power series `sum_{d <= order} c_d q^d`, known up to `O(q^{order+1})`.
#[derive(Clone, PartialEq)]
pub struct QSeries<C> {
    coeffs: Vec<C>,
}

pub type ScalarSeries = QSeries<Rational>;
pub type CohSeries = QSeries<CohClass>;

impl<C: Coefficient> QSeries<C> {
    /// Series from its coefficients `c_0..c_N`. Panics on an empty vector or
    /// on coefficients of different truncations.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the q^0 term");
        let shape = coeffs[0].shape();
        assert!(
            coeffs.iter().all(|c| c.shape() == shape),
            "series coefficients must share one truncation"
        );
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &C {
        &self.coeffs[d]
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn constant(c: C, order: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = c;
        QSeries { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.coeffs[0].shape(), other.coeffs[0].shape());
        if a == b {
            Ok(())
        } else {
            Err(Error::TruncationMismatch { left: a, right: b })
        }
    }

    /// Sum, truncated to the smaller order.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|d| self.coeffs[d].add_c(&other.coeffs[d]))
            .collect::<Result<_>>()?;
        Ok(QSeries { coeffs })
    }

    /// Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let mut coeffs = Vec::with_capacity(n + 1);
        for d in 0..=n {
            let mut acc = self.coeffs[0].zero_like();
            for e in 0..=d {
                let term = self.coeffs[e].mul_c(&other.coeffs[d - e])?;
                acc = acc.add_c(&term)?;
            }
            coeffs.push(acc);
        }
        Ok(QSeries { coeffs })
    }

    /// Multiplies every coefficient by a scalar series (`C`-module action of
    /// `Q[[q]]`), truncated to the smaller order.
    pub fn mul_scalar_series(&self, s: &ScalarSeries) -> Self {
        let n = self.order().min(s.order());
        let coeffs = (0..=n)
            .map(|d| {
                (0..=d).fold(self.coeffs[0].zero_like(), |acc, e| {
                    acc.add_c(&self.coeffs[e].scale_c(&s.coeffs[d - e]))
                        .expect("coefficients share one truncation")
                })
            })
            .collect();
        QSeries { coeffs }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c.scale_c(r)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coefficient::is_zero_coeff)
    }
}

/// Inverse of a series whose `q^0` coefficient is invertible: `s * t = 1` up
/// to the truncation of `s`.
pub fn series_invert<C: Coefficient>(s: &QSeries<C>) -> Result<QSeries<C>> {
    let c0_inv = s.coeffs[0].invert_c()?;
    let mut out: Vec<C> = Vec::with_capacity(s.coeffs.len());
    out.push(c0_inv.clone());
    for d in 1..=s.order() {
        let mut acc = s.coeffs[0].zero_like();
        for e in 1..=d {
            acc = acc.add_c(&s.coeffs[e].mul_c(&out[d - e])?)?;
        }
        out.push(acc.mul_c(&c0_inv)?.neg_c());
    }
    Ok(QSeries { coeffs: out })
}

/// `exp(-alpha q)` up to `q^order`.
pub fn exp_correction(alpha: &Rational, order: usize) -> ScalarSeries {
    let minus_alpha = -alpha;
    let mut power = Rational::one();
    let coeffs = (0..=order as u64)
        .map(|d| {
            let c = &power / factorial_q(d);
            power *= &minus_alpha;
            c
        })
        .collect();
    QSeries { coeffs }
}

impl<C: Coefficient> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl fmt::Display for ScalarSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(to_string).collect();
        write!(f, "[{}] + O(q^{})", terms.join(", "), self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, ratio};
    use proptest::prelude::*;

    fn scalar(v: &[Rational]) -> ScalarSeries {
        QSeries::new(v.to_vec())
    }

    #[test]
    fn inverse_examples() {
        let one = QSeries::constant(CohClass::one(2), 3);
        assert_eq!(series_invert(&one).unwrap(), one);

        let s = QSeries::new(vec![CohClass::from_coeffs(2, [rat(1), rat(1)])]);
        let t = series_invert(&s).unwrap();
        assert_eq!(
            t.coeff(0),
            &CohClass::from_coeffs(2, [rat(1), rat(-1), rat(1)])
        );

        let s = scalar(&[rat(2), rat(1), rat(0)]);
        assert_eq!(
            series_invert(&s).unwrap(),
            scalar(&[ratio(1, 2), ratio(-1, 4), ratio(1, 8)])
        );

        assert_eq!(
            series_invert(&scalar(&[rat(0), rat(1)])),
            Err(Error::NotInvertible)
        );
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            exp_correction(&rat(0), 3),
            scalar(&[rat(1), rat(0), rat(0), rat(0)])
        );
        assert_eq!(
            exp_correction(&rat(1), 2),
            scalar(&[rat(1), rat(-1), ratio(1, 2)])
        );
        assert_eq!(
            exp_correction(&rat(120), 2),
            scalar(&[rat(1), rat(-120), rat(7200)])
        );
    }

    #[test]
    fn mixed_truncations_rejected() {
        let a = QSeries::constant(CohClass::one(2), 2);
        let b = QSeries::constant(CohClass::one(3), 2);
        assert!(matches!(a.mul(&b), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn orders_truncate_to_min() {
        let a = scalar(&[rat(1), rat(1), rat(1)]);
        let b = scalar(&[rat(1), rat(2)]);
        assert_eq!(a.mul(&b).unwrap(), scalar(&[rat(1), rat(3)]));
    }

    fn arb_coh_series() -> impl Strategy<Value = CohSeries> {
        proptest::collection::vec(proptest::collection::vec(-9i64..10, 3), 4).prop_map(|rows| {
            QSeries::new(
                rows.into_iter()
                    .map(|r| CohClass::from_coeffs(2, r.into_iter().map(rat)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn series_ring_axioms(a in arb_coh_series(), b in arb_coh_series(), c in arb_coh_series()) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn invert_two_sided(a in arb_coh_series()) {
            prop_assume!(!a.coeff(0).coeff(0).is_zero());
            let inv = series_invert(&a).unwrap();
            let one = QSeries::constant(CohClass::one(2), a.order());
            prop_assert_eq!(a.mul(&inv).unwrap(), one.clone());
            prop_assert_eq!(inv.mul(&a).unwrap(), one);
        }

        #[test]
        fn results_stay_reduced(p in -50i64..50, q in 1i64..50, n in 0usize..6) {
            let s = exp_correction(&ratio(p, q), n);
            for c in s.coeffs() {
                let reduced = Rational::new(c.numer().clone(), c.denom().clone());
                prop_assert_eq!(&reduced, c);
                prop_assert!(c.denom() > &num_bigint::BigInt::from(0));
            }
        }
    }
}
