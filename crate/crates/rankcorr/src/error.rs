//! Error type shared across the crate.

use thiserror::Error;

/// Coordinate of a paired sample, used in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    X,
    Y,
}

impl std::fmt::Display for Coordinate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coordinate::X => write!(f, "x"),
            Coordinate::Y => write!(f, "y"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Tied values found in one coordinate; rows are 0-based input positions.
    #[error("ties present in {coordinate}: rows {row_a} and {row_b} hold the same value {value}")]
    TiesPresent {
        coordinate: Coordinate,
        row_a: usize,
        row_b: usize,
        value: f64,
    },

    #[error("length mismatch: xs has {xs} entries, ys has {ys}")]
    LengthMismatch { xs: usize, ys: usize },

    #[error("sample too small: n = {n}, need n >= {min}")]
    SampleTooSmall { n: usize, min: usize },

    /// Zero variance in a coordinate; Pearson is undefined.
    #[error("degenerate sample: {coordinate} is constant")]
    DegenerateSample { coordinate: Coordinate },

    #[error("ranks are not a permutation of 1..={n}: {reason}")]
    InvalidRanks { n: usize, reason: String },

    #[error("parameter out of range for the {family} family: t = {t}, expected {expected}")]
    ParameterOutOfRange {
        family: &'static str,
        t: f64,
        expected: &'static str,
    },

    #[error("non-finite integrand at (u, v) = ({u}, {v})")]
    NonFiniteIntegrand { u: f64, v: f64 },

    /// Grid doubling stopped at the resolution cap without meeting the tolerance.
    #[error(
        "quadrature did not converge: |delta| = {delta:.3e} between m = {m_prev} and m = {m} (tolerance {tol:.1e})"
    )]
    QuadratureNotConverged {
        delta: f64,
        m_prev: usize,
        m: usize,
        tol: f64,
    },

    #[error("mismatched configuration: {0}")]
    MismatchedConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
