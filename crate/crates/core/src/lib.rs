//! Exact genus-zero Gromov-Witten computations for Fano complete
//! intersections in weighted projective spaces and Q-factorial toric
//! varieties of Picard rank one.
//!
//! The pipeline runs from a [`variety::Variety`] through its I-series
//! ([`iseries`]) to the Riemann-Roch type operator ([`dmodule`]), two-pointed
//! invariants and counting matrices ([`gwcalc`]) and the D3 operators built
//! from them ([`golyshev`]). All arithmetic is exact.

pub mod cli;
pub mod dmodule;
pub mod error;
pub mod exact;
pub mod fan;
pub mod golyshev;
pub mod gwcalc;
pub mod iseries;
pub mod json;
pub mod variety;

pub use error::{Error, Result};
