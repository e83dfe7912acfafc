//! Exact scalar and ring arithmetic: rationals, the truncated cohomology ring
//! `Q[H]/(H^{n+1})`, truncated q-series and Pochhammer products.

mod cohomology;
pub mod rational;
mod series;

pub use cohomology::{pochhammer, CohClass, LinearForm};
pub use rational::{factorial, factorial_q, rat, ratio, Rational};
pub use series::{exp_correction, series_invert, Coefficient, CohSeries, QSeries, ScalarSeries};
