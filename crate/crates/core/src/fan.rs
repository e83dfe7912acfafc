//! Simplicial fans in `Z^m`: Q-factoriality, edge-divisor degrees of
//! Picard-rank-one fans, non-unimodular cones and the singular strata of
//! weighted projective spaces.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{primitive_integer_vector, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

/// A closed stratum `{x_i = 0 : i in vanishing_coordinates}` of a weighted
/// projective space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SingularStratum {
    pub vanishing_coordinates: Vec<usize>,
    pub dimension: i64,
}

impl Fan {
    pub fn new(rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        let m = rays
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidFan("no rays".into()))?;
        for (i, r) in rays.iter().enumerate() {
            if r.len() != m {
                return Err(Error::InvalidFan(format!(
                    "ray {i} has length {} != {m}",
                    r.len()
                )));
            }
            let g = r.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g == 0 {
                return Err(Error::InvalidFan(format!("ray {i} is zero")));
            }
            if g != 1 {
                return Err(Error::InvalidFan(format!("ray {i} is not primitive")));
            }
        }
        for (c, cone) in cones.iter().enumerate() {
            let set: BTreeSet<_> = cone.iter().collect();
            if set.len() != cone.len() {
                return Err(Error::InvalidFan(format!("cone {c} repeats a ray")));
            }
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!(
                    "cone {c} uses unknown ray {bad}"
                )));
            }
        }
        Ok(Fan { rays, cones })
    }

    /// Fan of `P(w_0, ..., w_{k-1})` built from a coordinate of weight 1:
    /// that coordinate gets the ray `-(sum of w_i e_i)` over the others,
    /// every other coordinate a standard basis vector. Maximal cones omit one
    /// ray each; ray `i` corresponds to coordinate `i`.
    pub fn weighted_projective(weights: &[u64]) -> Result<Self> {
        if weights.len() < 2 || weights.contains(&0) {
            return Err(Error::InvalidFan(
                "need at least two positive weights".into(),
            ));
        }
        let pivot = weights
            .iter()
            .position(|&w| w == 1)
            .ok_or_else(|| Error::InvalidFan("canonical fan needs a weight equal to 1".into()))?;
        let m = weights.len() - 1;
        let others: Vec<usize> = (0..weights.len()).filter(|&i| i != pivot).collect();
        let mut rays = vec![vec![0i64; m]; weights.len()];
        for (axis, &i) in others.iter().enumerate() {
            rays[i][axis] = 1;
            rays[pivot][axis] = -(weights[i] as i64);
        }
        let cones = (0..weights.len())
            .map(|skip| (0..weights.len()).filter(|&i| i != skip).collect())
            .collect();
        Fan::new(rays, cones)
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn ambient_dim(&self) -> usize {
        self.rays[0].len()
    }

    fn cone_rows(&self, cone: &[usize]) -> Vec<Vec<Rational>> {
        cone.iter()
            .map(|&i| {
                self.rays[i]
                    .iter()
                    .map(|&x| Rational::from_integer(x.into()))
                    .collect()
            })
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones
            .iter()
            .all(|c| rank(self.cone_rows(c)) == c.len())
    }

    /// Positive primitive relation `sum w_i ray_i = 0` of a Picard-rank-one
    /// fan, i.e. the degrees of the edge divisors with respect to the ample
    /// generator.
    pub fn edge_degrees(&self) -> Result<Vec<u64>> {
        let m = self.ambient_dim();
        let k = self.rays.len();
        // columns = rays; kernel of the m x k matrix
        let matrix: Vec<Vec<Rational>> = (0..m)
            .map(|row| {
                self.rays
                    .iter()
                    .map(|r| Rational::from_integer(r[row].into()))
                    .collect()
            })
            .collect();
        let kernel = kernel(matrix, k);
        if kernel.len() != 1 {
            return Err(Error::NotRankOne {
                kernel_dim: kernel.len(),
            });
        }
        let v = primitive_integer_vector(&kernel[0]).expect("kernel basis vector is nonzero");
        let sign = if v.iter().any(|x| x.is_positive()) {
            1
        } else {
            -1
        };
        let v: Vec<BigInt> = v.into_iter().map(|x| x * sign).collect();
        if v.iter().any(|x| !x.is_positive()) {
            return Err(Error::NotComplete);
        }
        Ok(v.iter()
            .map(|x| u64::try_from(x).expect("edge degree fits in u64"))
            .collect())
    }

    /// Multiplicity of a cone: the index of the sublattice spanned by its rays
    /// in its saturation, computed as the gcd of the maximal minors.
    pub fn cone_index(&self, cone: &[usize]) -> Result<BigInt> {
        let rows: Vec<Vec<i64>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        let r = rows.len();
        let m = self.ambient_dim();
        let mut g = BigInt::zero();
        for cols in combinations(m, r) {
            let sub: Vec<Vec<Rational>> = rows
                .iter()
                .map(|row| {
                    cols.iter()
                        .map(|&c| Rational::from_integer(row[c].into()))
                        .collect()
                })
                .collect();
            g = g.gcd(&determinant(sub).to_integer());
        }
        if g.is_zero() {
            return Err(Error::NotSimplicial);
        }
        Ok(g)
    }

    /// Maximal cones whose rays do not span a saturated sublattice, with their
    /// lattice index (> 1).
    pub fn nonunimodular_cones(&self) -> Result<Vec<(Vec<usize>, BigInt)>> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let mut out = Vec::new();
        for cone in &self.cones {
            let idx = self.cone_index(cone)?;
            if !idx.is_one() {
                out.push((cone.clone(), idx));
            }
        }
        Ok(out)
    }

    /// `H^m` on the toric variety, where `H` is the class with `D_i = w_i H`.
    /// Uses any full-dimensional cone: `D_{i_1}...D_{i_m} = 1/mult(cone)`.
    pub fn top_intersection(&self, weights: &[u64]) -> Result<Rational> {
        let m = self.ambient_dim();
        let cone = self
            .cones
            .iter()
            .find(|c| c.len() == m)
            .ok_or_else(|| Error::InvalidFan("no full-dimensional cone".into()))?;
        let idx = self.cone_index(cone)?;
        let prod: BigInt = cone.iter().map(|&i| BigInt::from(weights[i])).product();
        Ok(Rational::new(BigInt::one(), idx * prod))
    }
}

/// Singular strata of `P(w)`: for every inclusion-maximal set `J` of
/// coordinates whose weights share a common factor, the stratum where all
/// coordinates outside `J` vanish. Its dimension is `|J| - 1`.
pub fn wps_singular_strata(weights: &[u64]) -> Vec<SingularStratum> {
    let mut primes = BTreeSet::new();
    for &w in weights {
        primes.extend(prime_factors(w));
    }
    let supports: BTreeSet<BTreeSet<usize>> = primes
        .iter()
        .map(|&p| {
            (0..weights.len())
                .filter(|&i| weights[i].is_multiple_of(p))
                .collect()
        })
        .collect();
    let maximal: Vec<&BTreeSet<usize>> = supports
        .iter()
        .filter(|s| !supports.iter().any(|t| t != *s && s.is_subset(t)))
        .collect();
    let mut strata: Vec<SingularStratum> = maximal
        .into_iter()
        .map(|keep| SingularStratum {
            vanishing_coordinates: (0..weights.len()).filter(|i| !keep.contains(i)).collect(),
            dimension: keep.len() as i64 - 1,
        })
        .collect();
    strata.sort();
    strata
}

/// Dimension of the singular locus of `P(w)`, `-1` when it is empty.
pub fn wps_singular_dimension(weights: &[u64]) -> i64 {
    wps_singular_strata(weights)
        .iter()
        .map(|s| s.dimension)
        .max()
        .unwrap_or(-1)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Row-reduces in place; returns pivot columns.
fn row_reduce(a: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..cols {
                    let delta = &f * &a[row][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    pivots
}

fn rank(mut a: Vec<Vec<Rational>>) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    row_reduce(&mut a, cols).len()
}

fn kernel(mut a: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let pivots = row_reduce(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    #[test]
    fn simpliciality() {
        assert!(p2().is_simplicial());
        let square = Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert!(!square.is_simplicial());
        assert_eq!(square.nonunimodular_cones(), Err(Error::NotSimplicial));
        assert!(Fan::weighted_projective(&[1, 1, 1, 2, 3])
            .unwrap()
            .is_simplicial());
    }

    #[test]
    fn edge_degree_examples() {
        let f = Fan::new(
            vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![-1, -1, -2, -3],
            ],
            (0..5)
                .map(|s| (0..5).filter(|&i| i != s).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(f.edge_degrees().unwrap(), vec![1, 1, 2, 3, 1]);

        let pn = Fan::weighted_projective(&[1; 5]).unwrap();
        assert_eq!(pn.edge_degrees().unwrap(), vec![1; 5]);

        let f = Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        assert_eq!(f.edge_degrees().unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn edge_degree_errors() {
        let square = Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap();
        assert_eq!(
            square.edge_degrees(),
            Err(Error::NotRankOne { kernel_dim: 2 })
        );

        let half = Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![0, 2], vec![1, 2]],
        )
        .unwrap();
        assert_eq!(half.edge_degrees(), Err(Error::NotComplete));
    }

    #[test]
    fn invalid_fans() {
        assert!(Fan::new(vec![vec![2, 0]], vec![]).is_err());
        assert!(Fan::new(vec![vec![0, 0]], vec![]).is_err());
        assert!(Fan::new(vec![vec![1, 0]], vec![vec![0, 0]]).is_err());
        assert!(Fan::new(vec![vec![1, 0]], vec![vec![3]]).is_err());
    }

    #[test]
    fn nonunimodular_examples() {
        assert!(p2().nonunimodular_cones().unwrap().is_empty());

        let f = Fan::weighted_projective(&[1, 1, 1, 2, 3]).unwrap();
        let bad = f.nonunimodular_cones().unwrap();
        let omitted: Vec<(usize, BigInt)> = bad
            .iter()
            .map(|(cone, idx)| ((0..5).find(|i| !cone.contains(i)).unwrap(), idx.clone()))
            .collect();
        assert_eq!(omitted, vec![(3, BigInt::from(2)), (4, BigInt::from(3))]);

        let cone = Fan::new(vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap();
        assert_eq!(cone.cone_index(&[0, 1]).unwrap(), BigInt::from(2));
    }

    #[test]
    fn strata_examples() {
        assert_eq!(
            wps_singular_strata(&[1, 1, 1, 2, 3]),
            vec![
                SingularStratum {
                    vanishing_coordinates: vec![0, 1, 2, 3],
                    dimension: 0
                },
                SingularStratum {
                    vanishing_coordinates: vec![0, 1, 2, 4],
                    dimension: 0
                },
            ]
        );
        assert!(wps_singular_strata(&[1, 1, 1, 1, 1]).is_empty());
        assert_eq!(
            wps_singular_strata(&[1, 1, 2, 2, 2]),
            vec![SingularStratum {
                vanishing_coordinates: vec![0, 1],
                dimension: 2
            }]
        );
        // weights 2 and 6 share 2, weights 3 and 6 share 3
        assert_eq!(
            wps_singular_strata(&[1, 2, 3, 6]),
            vec![
                SingularStratum {
                    vanishing_coordinates: vec![0, 1],
                    dimension: 1
                },
                SingularStratum {
                    vanishing_coordinates: vec![0, 2],
                    dimension: 1
                },
            ]
        );
    }

    #[test]
    fn top_intersection_of_wps() {
        let f = Fan::weighted_projective(&[1, 1, 1, 2, 3]).unwrap();
        assert_eq!(
            f.top_intersection(&f.edge_degrees().unwrap()).unwrap(),
            Rational::new(1.into(), 6.into())
        );
    }
}
