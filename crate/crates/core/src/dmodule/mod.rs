//! Differential operators in `z` (alias `q`) and `D = z d/dz` with
//! coefficients in `Q` or `Q[λ]`, and the Riemann-Roch type operator
//! annihilating the regularized I-series.

mod op;
mod poly;
mod scalar;

pub use op::{DiffOp, LambdaOp, RationalOp};
pub use poly::DPoly;
pub use scalar::{LambdaPoly, Scalar};

use crate::exact::rat;
use crate::variety::Variety;

/// `prod_i (w_i D - (w_i - 1))_{w_i} - z prod_{i=0}^{l} (d_i D + 1)_{d_i}`,
/// with `d_0` the index.
pub fn rr_operator(v: &Variety) -> RationalOp {
    let left = v.weights().iter().fold(DPoly::one(), |acc, &w| {
        acc.mul(&DPoly::pochhammer(rat(w as i64), rat(1 - w as i64), w))
    });
    let right = std::iter::once(v.index())
        .chain(v.degrees().iter().copied())
        .fold(DPoly::one(), |acc, d| {
            acc.mul(&DPoly::pochhammer(rat(d as i64), rat(1), d))
        });
    DiffOp::from_terms([(0, left), (1, right.neg())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::exact::{factorial, ratio, QSeries, Rational, ScalarSeries};
    use crate::iseries::regularized;
    use crate::variety::WeightedCI;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type P = DPoly<Rational>;

    fn p(c: &[i64]) -> P {
        P::new(c.iter().map(|&x| rat(x)).collect())
    }

    fn series(c: &[i64]) -> ScalarSeries {
        QSeries::new(c.iter().map(|&x| rat(x)).collect())
    }

    fn var(w: &[u64], d: &[u64]) -> Variety {
        WeightedCI::new(w.to_vec(), d.to_vec()).unwrap().into()
    }

    fn d() -> RationalOp {
        DiffOp::d()
    }

    fn z(i: i64) -> RationalOp {
        DiffOp::z_pow(i)
    }

    #[test]
    fn commutation() {
        assert_eq!(d().mul(&z(1)).sub(&z(1).mul(&d())), z(1));
        assert_eq!(d().mul(&z(1)), DiffOp::term(1, p(&[1, 1])));
        assert_eq!(DiffOp::partial().mul(&z(1)), DiffOp::term(0, p(&[1, 1])));
        assert_eq!(
            DiffOp::<Rational>::partial().pow(2),
            DiffOp::term(-2, p(&[0, -1, 1]))
        );
        assert_eq!(
            DiffOp::<Rational>::neg_partial_pow(2),
            DiffOp::<Rational>::partial().pow(2)
        );
    }

    #[test]
    fn application() {
        assert_eq!(d().apply(&series(&[1, 1, 1])).unwrap(), series(&[0, 1, 2]));
        assert_eq!(z(1).apply(&series(&[1, 0])).unwrap(), series(&[0]));
        assert_eq!(z(1).apply(&series(&[1, 0, 0])).unwrap(), series(&[0, 1]));
        assert_eq!(
            DiffOp::partial().apply(&series(&[1, 1, 1])),
            Ok(series(&[1, 2]))
        );
        assert_eq!(
            z(-1).apply(&series(&[1, 1])),
            Err(Error::LaurentUnderflow { power: -1 })
        );
    }

    #[test]
    fn exponential_solution() {
        let op = d().sub(&z(1));
        let s = op.series_solution(&rat(1), 5).unwrap();
        let expected: Vec<Rational> = (0..=5u64)
            .map(|n| Rational::new(BigInt::from(1), factorial(n)))
            .collect();
        assert_eq!(s.coeffs(), &expected[..]);
        let resonant = DiffOp::term(0, p(&[-2, 1])).sub(&z(1));
        assert_eq!(
            resonant.series_solution(&rat(0), 3),
            Err(Error::ResonantIndicialRoot { m: 2 })
        );
    }

    #[test]
    fn rr_operators_of_the_double_solids() {
        let l = rr_operator(&var(&[1, 1, 1, 1, 3], &[6]));
        let p0 = p(&[0, 0, 0, 0, 1])
            .mul(&P::linear(rat(3), rat(-2)))
            .mul(&P::linear(rat(3), rat(-1)))
            .mul(&P::linear(rat(3), rat(0)));
        let p1 = (1..=6).fold(P::linear(rat(1), rat(1)), |acc, j| {
            acc.mul(&P::linear(rat(6), rat(j)))
        });
        assert_eq!(l, DiffOp::from_terms([(0, p0), (1, p1.neg())]));

        let l = rr_operator(&var(&[1, 1, 1, 1, 2], &[4]));
        let p0 = p(&[0, 0, 0, 0, 1])
            .mul(&P::linear(rat(2), rat(-1)))
            .mul(&P::linear(rat(2), rat(0)));
        let p1 = P::linear(rat(2), rat(1))
            .mul(&P::linear(rat(2), rat(2)))
            .mul(&(1..=4).fold(P::one(), |acc, j| acc.mul(&P::linear(rat(4), rat(j)))));
        assert_eq!(l, DiffOp::from_terms([(0, p0), (1, p1.neg())]));
    }

    #[test]
    fn rr_operator_of_projective_complete_intersections() {
        // D^{N+1} - q prod d_i^{d_i} prod_j (D + j/d_i), here P^5 with degrees 2, 3
        let l = rr_operator(&var(&[1; 6], &[2, 3]));
        let mut p1 = P::constant(rat(4 * 27));
        for d in [2i64, 3] {
            for j in 1..=d {
                p1 = p1.mul(&P::linear(rat(1), ratio(j, d)));
            }
        }
        let d0 = 1;
        p1 = p1.mul(&P::linear(rat(d0), rat(1)));
        assert_eq!(
            l,
            DiffOp::from_terms([(0, p(&[0, 0, 0, 0, 0, 0, 1])), (1, p1.neg())])
        );
    }

    #[test]
    fn annihilates_the_regularized_series() {
        let v = var(&[1, 1, 1, 1, 3], &[6]);
        let reg = regularized(&v, 5).unwrap().to_series();
        let out = rr_operator(&v).apply(&reg).unwrap();
        assert!(out.is_zero());
        assert_eq!(out.order(), 4);
    }

    #[test]
    fn recursion_reproduces_closed_forms() {
        let v = var(&[1, 1, 1, 1, 2], &[4]);
        let s = rr_operator(&v).series_solution(&rat(1), 3).unwrap();
        assert_eq!(s.coeffs()[..3], [rat(1), rat(24), rat(2520)]);
        let v = var(&[1, 1, 1, 2, 3], &[6]);
        let s = rr_operator(&v).series_solution(&rat(1), 4).unwrap();
        assert_eq!(s, regularized(&v, 4).unwrap().to_series());
        assert_eq!(s.coeff(1), &rat(120));
    }

    #[test]
    fn left_division() {
        assert_eq!(
            DiffOp::<Rational>::d()
                .pow(2)
                .left_divide_power_of_d(1)
                .unwrap(),
            d()
        );
        let op = DiffOp::term(1, p(&[1, 1]));
        assert_eq!(op.left_divide_power_of_d(1).unwrap(), z(1));
        let l = rr_operator(&var(&[1, 1, 1, 1, 3], &[6]));
        let q = l.left_divide_power_of_d(1).unwrap();
        assert_eq!(d().mul(&q), l);
        assert!(matches!(
            z(1).left_divide_power_of_d(1),
            Err(Error::NotLeftDivisible { power: 1, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let l = rr_operator(&var(&[1, 1, 1, 1, 3], &[6]));
        assert_eq!(RationalOp::from_json(&l.to_json()).unwrap(), l);
        let lam: LambdaOp =
            DiffOp::term(-1, DPoly::linear(LambdaPoly::lambda(), LambdaPoly::one()));
        assert_eq!(LambdaOp::from_json(&lam.to_json()).unwrap(), lam);
        assert!(RationalOp::from_json(&serde_json::json!({"terms": [{"z": 0}]})).is_err());
    }

    #[test]
    fn substitution_is_an_involution_up_to_sign_conventions() {
        let l = rr_operator(&var(&[1, 1, 1, 1, 2], &[4]));
        assert_eq!(l.substitute_neg_inverse().substitute_neg_inverse(), l);
        // t = -1/z: z = -1/t and D_z = -D_t
        assert_eq!(z(1).substitute_neg_inverse(), z(-1).neg());
        assert_eq!(d().substitute_neg_inverse(), d().neg());
    }

    fn arb_op() -> impl Strategy<Value = RationalOp> {
        proptest::collection::vec((-2i64..3, proptest::collection::vec(-4i64..5, 0..3)), 0..3)
            .prop_map(|terms| DiffOp::from_terms(terms.into_iter().map(|(i, c)| (i, p(&c)))))
    }

    fn arb_nonneg_op() -> impl Strategy<Value = RationalOp> {
        proptest::collection::vec((0i64..3, proptest::collection::vec(-4i64..5, 0..3)), 0..3)
            .prop_map(|terms| DiffOp::from_terms(terms.into_iter().map(|(i, c)| (i, p(&c)))))
    }

    proptest! {
        #[test]
        fn associativity(a in arb_op(), b in arb_op(), c in arb_op()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn application_is_a_module_action(
            a in arb_nonneg_op(),
            b in arb_nonneg_op(),
            s in proptest::collection::vec(-9i64..9, 8),
        ) {
            let s = series(&s);
            let lhs = a.mul(&b).apply(&s).unwrap();
            let rhs = a.apply(&b.apply(&s).unwrap()).unwrap();
            let n = lhs.order().min(rhs.order());
            prop_assert_eq!(lhs.truncate(n), rhs.truncate(n));
        }

        #[test]
        fn left_division_round_trips(a in arb_op(), s in 0u32..3) {
            let prod = DiffOp::<Rational>::d().pow(s).mul(&a);
            let q = prod.left_divide_power_of_d(s).unwrap();
            prop_assert_eq!(DiffOp::<Rational>::d().pow(s).mul(&q), prod);
        }
    }
}
