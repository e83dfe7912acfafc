//! Multi-pointed genus-zero invariants `<tau_{a_1} H^{c_1}, ..., tau_{a_m} H^{c_m}>_d`
//! reconstructed from the one-pointed ones, and counting matrices of Fano
//! threefolds.
//!
//! Reduction order in [`Evaluator::evaluate`]: dimension filter, degree 0,
//! one point, string equation, divisor axiom, then the two relations that
//! move a cohomology class or a descendant from a target slot to a receiver
//! slot at the cost of lower-degree splittings.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{factorial_q, rat, Rational};
use crate::iseries::{iseries, one_pointed_from, ISeriesResult};
use crate::variety::Variety;

/// `tau_a H^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Insertion {
    pub a: u32,
    pub c: u32,
}

impl Insertion {
    pub fn new(a: u32, c: u32) -> Self {
        Insertion { a, c }
    }

    /// The primary insertion `H^c`.
    pub fn class(c: u32) -> Self {
        Insertion { a: 0, c }
    }

    fn weight(&self) -> u32 {
        self.a + self.c
    }
}

/// An invariant with its insertions in canonical (sorted) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantKey {
    insertions: Vec<Insertion>,
    pub d: u64,
}

impl InvariantKey {
    pub fn new(mut insertions: Vec<Insertion>, d: u64) -> Self {
        insertions.sort();
        InvariantKey { insertions, d }
    }

    pub fn insertions(&self) -> &[Insertion] {
        &self.insertions
    }
}

/// Memoizing evaluator for one variety.
pub struct Evaluator<'v> {
    v: &'v Variety,
    n: u32,
    index: u64,
    delta: Rational,
    delta_inv: Rational,
    series: ISeriesResult,
    memo: HashMap<InvariantKey, Rational>,
}

impl<'v> Evaluator<'v> {
    pub fn new(v: &'v Variety) -> Self {
        let delta = v.h_degree();
        Evaluator {
            v,
            n: v.dim() as u32,
            index: v.index(),
            delta_inv: delta.recip(),
            delta,
            series: iseries(v, 0),
            memo: HashMap::new(),
        }
    }

    pub fn clear_cache(&mut self) {
        self.memo.clear();
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    fn one_pointed(&mut self, ins: Insertion, d: u64) -> Rational {
        if self.series.corrected.order() < d as usize {
            self.series = iseries(self.v, d as usize);
        }
        one_pointed_from(&self.series, self.v, ins.a as u64, ins.c as usize, d)
    }

    pub fn evaluate(&mut self, key: &InvariantKey) -> Rational {
        if let Some(v) = self.memo.get(key) {
            return v.clone();
        }
        let value = self.compute(key.insertions(), key.d);
        self.memo.insert(key.clone(), value.clone());
        value
    }

    fn eval(&mut self, insertions: Vec<Insertion>, d: u64) -> Rational {
        self.evaluate(&InvariantKey::new(insertions, d))
    }

    fn compute(&mut self, ins: &[Insertion], d: u64) -> Rational {
        let n = self.n;
        let m = ins.len() as u64;
        if m == 0 || ins.iter().any(|x| x.c > n) {
            return Rational::zero();
        }
        let total: u64 = ins.iter().map(|x| x.weight() as u64).sum();
        if total + 3 != n as u64 + self.index * d + m {
            return Rational::zero();
        }
        if d == 0 {
            return self.degree_zero(ins);
        }
        if m == 1 {
            return self.one_pointed(ins[0], d);
        }
        if let Some(pos) = ins.iter().position(|x| *x == Insertion::class(0)) {
            return self.string_equation(ins, pos, d);
        }
        if let Some(pos) = ins.iter().position(|x| *x == Insertion::class(1)) {
            return self.divisor_axiom(ins, pos, d);
        }
        self.move_to_receiver(ins, d)
    }

    /// `<tau_{a_1} H^{c_1}, ..., tau_{a_m} H^{c_m}>_0 = (m-3)!/prod a_i! * delta`
    /// when `m >= 3` and `sum c_i = n` (the dimension filter then forces
    /// `sum a_i = m - 3`).
    fn degree_zero(&self, ins: &[Insertion]) -> Rational {
        let m = ins.len() as u64;
        if m < 3 || ins.iter().map(|x| x.c).sum::<u32>() != self.n {
            return Rational::zero();
        }
        let denom = ins
            .iter()
            .fold(Rational::one(), |acc, x| acc * factorial_q(x.a as u64));
        factorial_q(m - 3) / denom * &self.delta
    }

    fn string_equation(&mut self, ins: &[Insertion], pos: usize, d: u64) -> Rational {
        let rest: Vec<Insertion> = without(ins, pos);
        let mut acc = Rational::zero();
        for j in 0..rest.len() {
            if rest[j].a >= 1 {
                let mut r = rest.clone();
                r[j].a -= 1;
                acc += self.eval(r, d);
            }
        }
        acc
    }

    fn divisor_axiom(&mut self, ins: &[Insertion], pos: usize, d: u64) -> Rational {
        let rest: Vec<Insertion> = without(ins, pos);
        let mut acc = rat(d as i64) * self.eval(rest.clone(), d);
        for j in 0..rest.len() {
            if rest[j].a >= 1 {
                let mut r = rest.clone();
                r[j].a -= 1;
                r[j].c += 1;
                acc += self.eval(r, d);
            }
        }
        acc
    }

    /// Target: the lightest slot (by `a + c`, then position). Receiver: the
    /// heaviest. With `c_t >= 1` one `H` moves from the target to the
    /// receiver; otherwise one descendant does.
    fn move_to_receiver(&mut self, ins: &[Insertion], d: u64) -> Rational {
        let mut order: Vec<usize> = (0..ins.len()).collect();
        order.sort_by_key(|&i| (ins[i].weight(), i));
        let (t, r) = (order[0], order[order.len() - 1]);
        let (it, ir) = (ins[t], ins[r]);
        let others: Vec<Insertion> = (0..ins.len())
            .filter(|&i| i != t && i != r)
            .map(|i| ins[i])
            .collect();
        let with = |x: Insertion, y: Insertion| -> Vec<Insertion> {
            let mut v = vec![x, y];
            v.extend_from_slice(&others);
            v
        };
        let n = self.n;

        if it.c >= 1 {
            let moved = Insertion::new(it.a, it.c - 1);
            let mut acc = self.eval(with(Insertion::new(ir.a, ir.c + 1), moved), d);
            acc += rat(d as i64) * self.eval(with(Insertion::new(ir.a + 1, ir.c), moved), d);
            let mut split = Rational::zero();
            for (s1, s2) in subsets(&others) {
                // the receiver-side degree b1 runs over 0..d, weighted by b2 = d - b1
                for b1 in 0..d {
                    let b2 = d - b1;
                    for a in 0..=n {
                        let term = self.splitting(ir, &s1, moved, &s2, a, b1, b2);
                        if !term.is_zero() {
                            split += rat(b2 as i64) * term;
                        }
                    }
                }
            }
            acc - split * &self.delta_inv
        } else {
            let moved = Insertion::new(it.a - 1, it.c);
            let mut acc = -self.eval(with(Insertion::new(ir.a + 1, ir.c), moved), d);
            let mut split = Rational::zero();
            for (s1, s2) in subsets(&others) {
                for b1 in 0..=d {
                    for a in 0..=n {
                        split += self.splitting(ir, &s1, moved, &s2, a, b1, d - b1);
                    }
                }
            }
            acc += split * &self.delta_inv;
            acc
        }
    }

    /// `<receiver, S1, H^{n-a}>_{b1} <H^a, moved, S2>_{b2}`, evaluating a
    /// degree-0 factor first so that a vanishing one short-circuits the other.
    #[allow(clippy::too_many_arguments)]
    fn splitting(
        &mut self,
        receiver: Insertion,
        s1: &[Insertion],
        moved: Insertion,
        s2: &[Insertion],
        a: u32,
        b1: u64,
        b2: u64,
    ) -> Rational {
        let mut left = vec![receiver, Insertion::class(self.n - a)];
        left.extend_from_slice(s1);
        let mut right = vec![Insertion::class(a), moved];
        right.extend_from_slice(s2);
        if b1 == 0 {
            let x = self.eval(left, b1);
            if x.is_zero() {
                return x;
            }
            x * self.eval(right, b2)
        } else {
            let y = self.eval(right, b2);
            if y.is_zero() {
                return y;
            }
            self.eval(left, b1) * y
        }
    }

    /// Topological recursion on the first insertion:
    /// `<tau_{a_1} g_1, g_2, g_3>_d = sum <tau_{a_1 - 1} g_1, H^{n-a}/delta>_{b1} <H^a, g_2, g_3>_{b2}`.
    pub fn trr_reduce(&mut self, insertions: &[Insertion], d: u64) -> Result<Rational> {
        if insertions.len() != 3 || insertions[0].a == 0 {
            return Err(Error::TrrNotApplicable);
        }
        let first = Insertion::new(insertions[0].a - 1, insertions[0].c);
        let mut acc = Rational::zero();
        for b1 in 0..=d {
            for a in 0..=self.n {
                let x = self.eval(vec![first, Insertion::class(self.n - a)], b1);
                if x.is_zero() {
                    continue;
                }
                let y = self.eval(
                    vec![Insertion::class(a), insertions[1], insertions[2]],
                    d - b1,
                );
                acc += x * y;
            }
        }
        Ok(acc * &self.delta_inv)
    }
}

fn without(ins: &[Insertion], pos: usize) -> Vec<Insertion> {
    ins.iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, x)| *x)
        .collect()
}

/// All ordered partitions of `items` into two sub-multisets (by position).
fn subsets(items: &[Insertion]) -> Vec<(Vec<Insertion>, Vec<Insertion>)> {
    (0u32..1 << items.len())
        .map(|mask| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (i, x) in items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.push(*x);
                } else {
                    b.push(*x);
                }
            }
            (a, b)
        })
        .collect()
}

pub fn evaluate(v: &Variety, key: &InvariantKey) -> Rational {
    Evaluator::new(v).evaluate(key)
}

pub fn trr_reduce(v: &Variety, insertions: &[Insertion], d: u64) -> Result<Rational> {
    Evaluator::new(v).trr_reduce(insertions, d)
}

/// `a_ij = (j-i+1)/deg X * <K^{3-i}, K^j>_{j-i+1}`, subscripts anticanonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingMatrix {
    pub a: [[Rational; 4]; 4],
}

impl CountingMatrix {
    pub fn from_integers(rows: [[i64; 4]; 4]) -> Self {
        CountingMatrix {
            a: rows.map(|row| row.map(rat)),
        }
    }

    /// `a_ij = a_{3-j, 3-i}`.
    pub fn is_secondary_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.a[i][j] == self.a[3 - j][3 - i]))
    }

    /// `A + c * 1`.
    pub fn shifted(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for k in 0..4 {
            out.a[k][k] += c;
        }
        out
    }
}

pub fn counting_matrix(v: &Variety) -> Result<CountingMatrix> {
    if v.dim() != 3 {
        return Err(Error::NotAThreefold { dim: v.dim() });
    }
    let index = v.index() as i64;
    let deg = v.numerics()?.anticanonical_degree;
    let mut ev = Evaluator::new(v);
    let mut a: [[Rational; 4]; 4] = Default::default();
    for i in 0..4i64 {
        for j in 0..4i64 {
            let span = j - i + 1;
            a[i as usize][j as usize] = if span < 0 {
                Rational::zero()
            } else if span == 0 {
                Rational::one()
            } else if span % index != 0 {
                Rational::zero()
            } else {
                let key = InvariantKey::new(
                    vec![Insertion::class((3 - i) as u32), Insertion::class(j as u32)],
                    (span / index) as u64,
                );
                let k_power =
                    Rational::from_integer(num_bigint::BigInt::from(index).pow((3 - i + j) as u32));
                rat(span) / &deg * k_power * ev.evaluate(&key)
            };
        }
    }
    let m = CountingMatrix { a };
    if !m.is_secondary_symmetric() {
        return Err(Error::InternalInconsistency(format!(
            "counting matrix is not symmetric about the secondary diagonal: {:?}",
            m.a
        )));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::WeightedCI;
    use proptest::prelude::*;

    fn var(w: &[u64], d: &[u64]) -> Variety {
        WeightedCI::new(w.to_vec(), d.to_vec()).unwrap().into()
    }

    fn key(ins: &[(u32, u32)], d: u64) -> InvariantKey {
        InvariantKey::new(ins.iter().map(|&(a, c)| Insertion::new(a, c)).collect(), d)
    }

    #[test]
    fn basic_invariants() {
        let v2 = var(&[1, 1, 1, 1, 2], &[4]);
        assert_eq!(evaluate(&v2, &key(&[(0, 3), (0, 1)], 1)), rat(24));
        assert_eq!(evaluate(&v2, &key(&[(0, 1), (0, 1)], 1)), rat(0));
        assert_eq!(evaluate(&v2, &key(&[(0, 1), (0, 1), (0, 1)], 0)), rat(2));
        let v1 = var(&[1, 1, 1, 2, 3], &[6]);
        assert_eq!(evaluate(&v1, &key(&[(0, 1), (0, 1), (0, 1)], 0)), rat(1));
    }

    #[test]
    fn lines_through_a_point_of_the_cubic_threefold() {
        // six lines pass through a general point, each meeting H once, and
        // H^3 is three times the point class
        let v = var(&[1, 1, 1, 1, 1], &[3]);
        assert_eq!(evaluate(&v, &key(&[(0, 3), (0, 1)], 1)), rat(18));
        assert_eq!(evaluate(&v, &key(&[(0, 3)], 1)), rat(18));
    }

    #[test]
    fn trr_cross_checks() {
        let v = var(&[1, 1, 1, 1, 3], &[6]);
        let ins = [
            Insertion::new(1, 1),
            Insertion::class(1),
            Insertion::class(3),
        ];
        assert_eq!(
            trr_reduce(&v, &ins, 1).unwrap(),
            evaluate(&v, &InvariantKey::new(ins.to_vec(), 1))
        );
        let v = var(&[1, 1, 1, 1, 2], &[4]);
        let ins = [
            Insertion::new(1, 3),
            Insertion::class(1),
            Insertion::class(1),
        ];
        assert_eq!(
            trr_reduce(&v, &ins, 1).unwrap(),
            evaluate(&v, &InvariantKey::new(ins.to_vec(), 1))
        );
        assert_eq!(trr_reduce(&v, &ins[1..], 1), Err(Error::TrrNotApplicable));
        assert_eq!(
            trr_reduce(&v, &[ins[1], ins[0], ins[2]], 1),
            Err(Error::TrrNotApplicable)
        );
    }

    #[test]
    fn quartic_double_solid_matrix() {
        let m = counting_matrix(&var(&[1, 1, 1, 1, 2], &[4])).unwrap();
        assert_eq!(
            m,
            CountingMatrix::from_integers([
                [0, 48, 0, 2304],
                [1, 0, 160, 0],
                [0, 1, 0, 48],
                [0, 0, 1, 0]
            ])
        );
    }

    #[test]
    fn non_threefolds_are_rejected() {
        assert_eq!(
            counting_matrix(&var(&[1, 1, 1, 1, 1, 1], &[3])),
            Err(Error::NotAThreefold { dim: 4 })
        );
    }

    #[test]
    fn warm_and_cold_caches_agree() {
        let v = var(&[1, 1, 1, 2, 3], &[6]);
        let mut ev = Evaluator::new(&v);
        let k = key(&[(0, 3), (0, 3)], 2);
        let warm_up = ev.evaluate(&k);
        assert!(ev.cache_len() > 1);
        let warm = ev.evaluate(&k);
        ev.clear_cache();
        assert_eq!(ev.evaluate(&k), warm);
        assert_eq!(warm, warm_up);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn permutation_invariant(
            ins in proptest::collection::vec((0u32..2, 0u32..4), 2..5),
            d in 0u64..3,
            seed in any::<u64>(),
        ) {
            let v = var(&[1, 1, 1, 1, 2], &[4]);
            let list: Vec<Insertion> = ins.iter().map(|&(a, c)| Insertion::new(a, c)).collect();
            let mut shuffled = list.clone();
            let len = shuffled.len();
            shuffled.rotate_left((seed % len as u64) as usize);
            shuffled.swap(0, len - 1);
            // bypass the canonical ordering at the top level
            let mut ev = Evaluator::new(&v);
            let a = ev.compute(&list, d);
            let b = ev.compute(&shuffled, d);
            prop_assert_eq!(a, b);
        }
    }
}
