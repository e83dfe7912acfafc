//! Descriptions of the geometric input: a complete intersection of
//! hypersurfaces in a weighted projective space or in a Q-factorial toric
//! variety of Picard rank one, and its numerical invariants.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::fan::{wps_singular_strata, Fan, SingularStratum};

/// Complete intersection of hypersurfaces of degrees `d_1..d_l` in
/// `P(w_1, ..., w_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCI {
    weights: Vec<u64>,
    degrees: Vec<u64>,
}

/// Complete intersection in a Q-factorial toric variety with Picard rank one,
/// described by the degrees of its edge divisors with respect to the ample
/// generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricCI {
    edge_degrees: Vec<u64>,
    degrees: Vec<u64>,
    dim_ambient: usize,
    /// `H^{dim_ambient}` on the ambient toric variety.
    ambient_volume: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variety {
    Weighted(WeightedCI),
    Toric(ToricCI),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyNumerics {
    /// `d_0 = sum w - sum d`; `-K_X = d_0 H`.
    pub index: u64,
    pub dim: usize,
    /// `delta = integral of H^n over X`.
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub h_degree: Rational,
    /// `(-K_X)^n = d_0^n delta`.
    #[serde(serialize_with = "crate::json::ser_rational")]
    pub anticanonical_degree: Rational,
}

fn numerics_of(
    weights: &[u64],
    degrees: &[u64],
    ambient_volume: &Rational,
) -> Result<VarietyNumerics> {
    let dim = weights.len() as i64 - 1 - degrees.len() as i64;
    if dim <= 0 {
        return Err(Error::NotAVariety { dim });
    }
    let index = weights.iter().sum::<u64>() as i64 - degrees.iter().sum::<u64>() as i64;
    if index <= 0 {
        return Err(Error::NotFano { index });
    }
    let dprod: BigInt = degrees.iter().map(|&d| BigInt::from(d)).product();
    let h_degree = ambient_volume * Rational::from_integer(dprod);
    let anticanonical_degree =
        &h_degree * Rational::from_integer(BigInt::from(index).pow(dim as u32));
    Ok(VarietyNumerics {
        index: index as u64,
        dim: dim as usize,
        h_degree,
        anticanonical_degree,
    })
}

fn check_positive(what: &str, v: &[u64]) -> Result<()> {
    if v.contains(&0) {
        Err(Error::InvalidVariety(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

fn wps_volume(weights: &[u64]) -> Rational {
    let prod: BigInt = weights.iter().map(|&w| BigInt::from(w)).product();
    Rational::new(BigInt::one(), prod)
}

impl WeightedCI {
    pub fn new(weights: Vec<u64>, degrees: Vec<u64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidVariety("need at least two weights".into()));
        }
        check_positive("weights", &weights)?;
        check_positive("degrees", &degrees)?;
        let v = WeightedCI { weights, degrees };
        v.numerics()?;
        Ok(v)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn numerics(&self) -> Result<VarietyNumerics> {
        numerics_of(&self.weights, &self.degrees, &wps_volume(&self.weights))
    }
}

impl ToricCI {
    /// From edge degrees directly. The ambient volume defaults to that of the
    /// weighted projective space with the same weights.
    pub fn new(edge_degrees: Vec<u64>, degrees: Vec<u64>, dim_ambient: usize) -> Result<Self> {
        if edge_degrees.len() != dim_ambient + 1 {
            return Err(Error::NotRankOne {
                kernel_dim: edge_degrees.len().saturating_sub(dim_ambient),
            });
        }
        check_positive("edge degrees", &edge_degrees)?;
        check_positive("degrees", &degrees)?;
        let ambient_volume = wps_volume(&edge_degrees);
        let v = ToricCI {
            edge_degrees,
            degrees,
            dim_ambient,
            ambient_volume,
        };
        v.numerics()?;
        Ok(v)
    }

    pub fn from_fan(fan: &Fan, degrees: Vec<u64>) -> Result<Self> {
        if !fan.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let edge_degrees = fan.edge_degrees()?;
        let ambient_volume = fan.top_intersection(&edge_degrees)?;
        check_positive("degrees", &degrees)?;
        let v = ToricCI {
            edge_degrees,
            degrees,
            dim_ambient: fan.ambient_dim(),
            ambient_volume,
        };
        v.numerics()?;
        Ok(v)
    }

    pub fn edge_degrees(&self) -> &[u64] {
        &self.edge_degrees
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn numerics(&self) -> Result<VarietyNumerics> {
        numerics_of(&self.edge_degrees, &self.degrees, &self.ambient_volume)
    }
}

impl Variety {
    /// Degrees of the ambient edge divisors (the weights, for `P(w)`).
    pub fn weights(&self) -> &[u64] {
        match self {
            Variety::Weighted(v) => v.weights(),
            Variety::Toric(v) => v.edge_degrees(),
        }
    }

    pub fn degrees(&self) -> &[u64] {
        match self {
            Variety::Weighted(v) => v.degrees(),
            Variety::Toric(v) => v.degrees(),
        }
    }

    pub fn numerics(&self) -> Result<VarietyNumerics> {
        match self {
            Variety::Weighted(v) => v.numerics(),
            Variety::Toric(v) => v.numerics(),
        }
    }

    /// Every constructed variety is Fano of positive dimension.
    pub fn index(&self) -> u64 {
        self.numerics().expect("validated on construction").index
    }

    pub fn dim(&self) -> usize {
        self.numerics().expect("validated on construction").dim
    }

    pub fn h_degree(&self) -> Rational {
        self.numerics().expect("validated on construction").h_degree
    }

    /// Codimension of the complete intersection in its ambient space.
    pub fn codim(&self) -> usize {
        self.degrees().len()
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let dim = self.dim();
        if dim < 3 {
            out.push(format!(
                "dimension {dim} < 3: results are the restricted I-series and invariants \
                 of the subring generated by H"
            ));
        }
        if let Variety::Toric(_) = self {
            out.push("toric input: Pic X = Z is assumed, not checked".into());
        }
        out
    }
}

impl From<WeightedCI> for Variety {
    fn from(v: WeightedCI) -> Self {
        Variety::Weighted(v)
    }
}

impl From<ToricCI> for Variety {
    fn from(v: ToricCI) -> Self {
        Variety::Toric(v)
    }
}

/// Double cover of `P(base_weights)` branched in a divisor of even degree
/// `2m`, realized as the hypersurface `y^2 = f` of degree `2m` in
/// `P(base_weights, m)`.
pub fn double_cover_model(base_weights: &[u64], branch_degree: u64) -> Result<WeightedCI> {
    if branch_degree == 0 {
        return Err(Error::InvalidVariety(
            "branch degree must be positive".into(),
        ));
    }
    if branch_degree % 2 == 1 {
        return Err(Error::OddBranchDegree(branch_degree));
    }
    let mut weights = base_weights.to_vec();
    weights.push(branch_degree / 2);
    WeightedCI::new(weights, vec![branch_degree])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NecessaryConditionReport {
    pub holds: bool,
    /// Degrees divisible by every weight (hypersurfaces that are Cartier).
    pub cartier_degrees: Vec<u64>,
    pub singular_strata: Vec<SingularStratum>,
    /// Dimension of the singular locus of the ambient space, -1 when smooth.
    pub singular_dimension: i64,
}

/// Necessary (not sufficient) condition for a general complete intersection
/// to miss the singular locus of `P(w)`: more Cartier hypersurfaces than the
/// dimension of the singular locus.
pub fn necessary_condition(v: &WeightedCI) -> NecessaryConditionReport {
    let cartier_degrees: Vec<u64> = v
        .degrees
        .iter()
        .copied()
        .filter(|d| v.weights.iter().all(|w| d % w == 0))
        .collect();
    let singular_strata = wps_singular_strata(&v.weights);
    let singular_dimension = singular_strata
        .iter()
        .map(|s| s.dimension)
        .max()
        .unwrap_or(-1);
    NecessaryConditionReport {
        holds: cartier_degrees.len() as i64 > singular_dimension,
        cartier_degrees,
        singular_strata,
        singular_dimension,
    }
}

impl VarietyNumerics {
    pub fn is_integral_degree(&self) -> bool {
        self.h_degree.denom().is_one() && !self.h_degree.is_zero()
    }
}

/// The variety JSON accepted by the CLI.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum VarietyInput {
    WeightedProjective {
        weights: Vec<u64>,
        #[serde(default)]
        degrees: Vec<u64>,
    },
    DoubleCover {
        weights: Vec<u64>,
        branch_degree: u64,
    },
    Toric {
        rays: Vec<Vec<i64>>,
        cones: Vec<Vec<usize>>,
        #[serde(default)]
        degrees: Vec<u64>,
    },
    ToricDegrees {
        edge_degrees: Vec<u64>,
        #[serde(default)]
        degrees: Vec<u64>,
        dim_ambient: usize,
    },
}

impl VarietyInput {
    pub fn build(self) -> Result<Variety> {
        Ok(match self {
            VarietyInput::WeightedProjective { weights, degrees } => {
                WeightedCI::new(weights, degrees)?.into()
            }
            VarietyInput::DoubleCover {
                weights,
                branch_degree,
            } => double_cover_model(&weights, branch_degree)?.into(),
            VarietyInput::Toric {
                rays,
                cones,
                degrees,
            } => ToricCI::from_fan(&Fan::new(rays, cones)?, degrees)?.into(),
            VarietyInput::ToricDegrees {
                edge_degrees,
                degrees,
                dim_ambient,
            } => ToricCI::new(edge_degrees, degrees, dim_ambient)?.into(),
        })
    }
}

/// Parses the variety JSON; syntax errors are reported as malformed input.
pub fn parse_variety(json: &str) -> Result<Variety> {
    let input: VarietyInput =
        serde_json::from_str(json).map_err(|e| Error::Malformed(e.to_string()))?;
    input.build()
}
