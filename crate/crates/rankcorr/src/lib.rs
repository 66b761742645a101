//! Rank correlation estimators and their asymptotic theory for three
//! bivariate families.
//!
//! The crate has five layers:
//!
//! - [`rankstats`]: sample coefficients (Pearson, Spearman, Kendall, the
//!   weighted concordance coefficient r_n and its companion r~_n) over
//!   concomitant ranks, each with naive and O(n log n) paths.
//! - [`copulas`]: FGM, bivariate normal and bivariate Pareto models with
//!   distribution functions, copula surfaces, samplers and theoretical
//!   coefficients.
//! - [`quadrature`]: tensor Gauss–Legendre integration on the unit square
//!   plus cumulative quadrant tabulation.
//! - [`asymptotics`]: expected values and leading 1/n variance
//!   coefficients of the rank estimators, closed-form and by quadrature.
//! - [`montecarlo`]: seeded, thread-count-independent simulation runs that
//!   reproduce the reference tables.

pub mod asymptotics;
pub mod copulas;
pub mod error;
pub mod montecarlo;
pub mod normal;
pub mod quadrature;
pub mod rankstats;
pub mod reference;

pub use copulas::{BivariateModel, Coefficient, Family, Method, TheoreticalCoefficients};
pub use error::{Error, Result};
pub use rankstats::{
    concomitant_ranks, estimate_all, ConcomitantRanks, CorrelationEstimates, PairedSample,
    TiePolicy,
};
