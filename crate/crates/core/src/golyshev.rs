//! D3 operators built from a counting matrix.
//!
//! `M^λ` has entries `a^λ_{kl} (-d/dz)^{l-k+1}` on and above the diagonal,
//! 1 on the subdiagonal and 0 below; `A^λ = A + λ 1`. The determinant of
//! `D 1 - M^λ` is expanded along the rightmost column with each entry kept to
//! the right of its minor, cleared of negative powers of `z` by a left factor
//! `z^m`, and divided by `D` on the right. Solutions are power series in
//! `t = -1/z`.

use num_traits::Zero;

use crate::dmodule::{DiffOp, LambdaOp, LambdaPoly, RationalOp, Scalar};
use crate::error::{Error, Result};
use crate::exact::{Rational, ScalarSeries};
use crate::gwcalc::CountingMatrix;

/// Which side of its minor a column entry is multiplied on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ProductOrder {
    /// `minor * entry`, the entry rightmost.
    #[default]
    MinorEntry,
    /// `entry * minor`.
    EntryMinor,
}

pub fn operator_matrix(a: &CountingMatrix) -> Vec<Vec<LambdaOp>> {
    (0..4)
        .map(|k| {
            (0..4)
                .map(|l| {
                    if k > l + 1 {
                        DiffOp::zero()
                    } else if k == l + 1 {
                        DiffOp::one()
                    } else {
                        let mut coeff = LambdaPoly::constant(a.a[k][l].clone());
                        if k == l {
                            coeff = coeff.add(&LambdaPoly::lambda());
                        }
                        DiffOp::neg_partial_pow((l + 1 - k) as u64).scale(&coeff)
                    }
                })
                .collect()
        })
        .collect()
}

/// Determinant expanded along the rightmost column:
/// `sum_k (-1)^{k+s-1} det(minor_k) m[k][s-1]` for size `s`.
pub fn right_det<S: Scalar>(m: &[Vec<DiffOp<S>>], order: ProductOrder) -> DiffOp<S> {
    let s = m.len();
    if s == 0 {
        return DiffOp::one();
    }
    if s == 1 {
        return m[0][0].clone();
    }
    let mut acc = DiffOp::zero();
    for k in 0..s {
        let entry = &m[k][s - 1];
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<DiffOp<S>>> = m
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, row)| row[..s - 1].to_vec())
            .collect();
        let det = right_det(&minor, order);
        let term = match order {
            ProductOrder::MinorEntry => det.mul(entry),
            ProductOrder::EntryMinor => entry.mul(&det),
        };
        acc = if (k + s - 1).is_multiple_of(2) {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct D3Family {
    /// `z^m det_right(D 1 - M^λ)`, with `m` the smallest shift making every
    /// power of `z` nonnegative.
    pub l_tilde: LambdaOp,
    pub laurent_shift: i64,
    /// `l * D = l_tilde`.
    pub l: LambdaOp,
}

pub fn d3_family(a: &CountingMatrix) -> Result<D3Family> {
    d3_family_with(a, ProductOrder::MinorEntry)
}

pub fn d3_family_with(a: &CountingMatrix, order: ProductOrder) -> Result<D3Family> {
    let mut m = operator_matrix(a);
    for (k, row) in m.iter_mut().enumerate() {
        for (l, entry) in row.iter_mut().enumerate() {
            *entry = if k == l {
                LambdaOp::d().sub(entry)
            } else {
                entry.neg()
            };
        }
    }
    let raw = right_det(&m, order);
    if raw.is_zero() {
        return Err(Error::D3NotDivisible("determinant vanishes".into()));
    }
    let (l_tilde, laurent_shift) = raw.normalize_min_power();
    let l = l_tilde
        .right_divide_by_d()
        .map_err(|e| Error::D3NotDivisible(e.to_string()))?;
    if l.mul(&LambdaOp::d()) != l_tilde {
        return Err(Error::InternalInconsistency(
            "l * D differs from l_tilde".into(),
        ));
    }
    Ok(D3Family {
        l_tilde,
        laurent_shift,
        l,
    })
}

impl D3Family {
    pub fn at(&self, lambda: &Rational) -> RationalOp {
        self.l.specialize(lambda)
    }

    /// Power series solution in `t = -1/z` with constant term 1.
    pub fn solve(&self, lambda: &Rational, order: usize) -> Result<ScalarSeries> {
        solve_in_t(&self.at(lambda), order)
    }
}

/// Solves `op f = 0` for `f = sum c_m t^m`, `t = -1/z`, `c_0 = 1`.
pub fn solve_in_t(op: &RationalOp, order: usize) -> Result<ScalarSeries> {
    let (in_t, _) = op.substitute_neg_inverse().normalize_min_power();
    in_t.series_solution(&Rational::from_integer(1.into()), order)
}

/// Candidates for the distinguished `λ`: 0, the matrix entries and their
/// negatives, and `extra` (with negatives).
pub fn lambda_candidates(a: &CountingMatrix, extra: &[Rational]) -> Vec<Rational> {
    let mut out = vec![<Rational as Zero>::zero()];
    for x in a.a.iter().flatten().chain(extra) {
        for y in [x.clone(), -x] {
            if !out.contains(&y) {
                out.push(y);
            }
        }
    }
    out
}

/// First candidate `λ` whose solution agrees with `target` through its order.
pub fn matching_lambda(
    family: &D3Family,
    target: &ScalarSeries,
    candidates: &[Rational],
) -> Result<Option<Rational>> {
    for lam in candidates {
        match family.solve(lam, target.order()) {
            Ok(s) if &s == target => return Ok(Some(lam.clone())),
            Ok(_) | Err(Error::ResonantIndicialRoot { .. }) | Err(Error::DegenerateOperator) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmodule::DPoly;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    type Op = RationalOp;

    fn v2() -> CountingMatrix {
        CountingMatrix::from_integers([
            [0, 48, 0, 2304],
            [1, 0, 160, 0],
            [0, 1, 0, 48],
            [0, 0, 1, 0],
        ])
    }

    #[test]
    fn operator_matrix_entries() {
        let m = operator_matrix(&v2());
        assert_eq!(m[1][0], LambdaOp::one());
        assert!(m[3][0].is_zero());
        let expected = DiffOp::neg_partial_pow(1).scale(&LambdaPoly::lambda());
        assert_eq!(m[0][0], expected);
        assert_eq!(
            m[0][1],
            DiffOp::neg_partial_pow(2).scale(&LambdaPoly::constant(rat(48)))
        );
    }

    #[test]
    fn small_right_determinants() {
        let d = Op::d();
        let one = Op::one();
        assert_eq!(right_det(&[vec![d.clone()]], ProductOrder::MinorEntry), d);
        let diag = vec![vec![d.clone(), Op::zero()], vec![Op::zero(), d.clone()]];
        assert_eq!(right_det(&diag, ProductOrder::MinorEntry), d.mul(&d));
        let m = vec![vec![d.clone(), one.neg()], vec![one.neg(), d.clone()]];
        assert_eq!(right_det(&m, ProductOrder::MinorEntry), d.mul(&d).sub(&one));
    }

    #[test]
    fn product_order_matters_for_noncommuting_entries() {
        let z = Op::z_pow(1);
        let d = Op::d();
        let m = vec![vec![d.clone(), z.clone()], vec![Op::one(), d.clone()]];
        let a = right_det(&m, ProductOrder::MinorEntry);
        let b = right_det(&m, ProductOrder::EntryMinor);
        assert_eq!(a, d.mul(&d).sub(&z));
        assert_eq!(b, d.mul(&d).sub(&z));
        let m = vec![vec![z.clone(), z.clone()], vec![d.clone(), d.clone()]];
        assert_ne!(
            right_det(&m, ProductOrder::MinorEntry),
            right_det(&m, ProductOrder::EntryMinor)
        );
    }

    #[test]
    fn structural_identity_and_regularized_period() {
        let fam = d3_family(&v2()).unwrap();
        assert_eq!(fam.l.mul(&LambdaOp::d()), fam.l_tilde);
        let s = fam.solve(&rat(0), 6).unwrap();
        // (4d)!/(d!)^4 in even degrees
        let expected = [1, 0, 24, 0, 2520, 0, 369600].map(rat);
        assert_eq!(s.coeffs(), &expected[..]);
    }

    #[test]
    fn specialization_commutes_with_shifting_the_matrix() {
        let fam = d3_family(&v2()).unwrap();
        let shifted = d3_family(&v2().shifted(&rat(5))).unwrap();
        assert_eq!(fam.at(&rat(5)), shifted.at(&rat(0)));
    }

    fn arb_upper() -> impl Strategy<Value = Vec<Vec<Op>>> {
        proptest::collection::vec((-2i64..3, proptest::collection::vec(-3i64..4, 0..3)), 6)
            .prop_map(|v| {
                let mut it = v.into_iter();
                let mut m = vec![vec![Op::zero(); 3]; 3];
                for (i, row) in m.iter_mut().enumerate() {
                    for entry in row.iter_mut().skip(i) {
                        let (p, c) = it.next().unwrap();
                        *entry = DiffOp::term(p, DPoly::new(c.into_iter().map(rat).collect()));
                    }
                }
                m
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn triangular_right_det_is_the_ordered_diagonal_product(m in arb_upper()) {
            let prod = m[0][0].mul(&m[1][1]).mul(&m[2][2]);
            prop_assert_eq!(right_det(&m, ProductOrder::MinorEntry), prod);
        }

        #[test]
        fn lambda_specialization_commutes(p in -20i64..20, q in 1i64..5) {
            let lam = ratio(p, q);
            let fam = d3_family(&v2()).unwrap();
            let direct = d3_family(&v2().shifted(&lam)).unwrap();
            prop_assert_eq!(fam.at(&lam), direct.at(&rat(0)));
        }
    }
}
