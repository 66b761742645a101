//! Seeded, parallel simulation experiments.
//!
//! Replication k of parameter index ti draws its own ChaCha stream
//! identified by (seed, ti, k), so results are bit-identical no matter how
//! the replications are scheduled across threads. Aggregation uses a fixed
//! pairwise reduction over the replication-ordered values for the same
//! reason.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copulas::{BivariateModel, Family};
use crate::error::{Error, Result};
use crate::quadrature::pairwise_sum;
use crate::rankstats::{estimate_all, CorrelationEstimates};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientId {
    Pearson,
    Spearman,
    Kendall,
    RNew,
    RTilde,
}

impl CoefficientId {
    pub const ALL: [CoefficientId; 5] = [
        CoefficientId::Pearson,
        CoefficientId::Spearman,
        CoefficientId::Kendall,
        CoefficientId::RNew,
        CoefficientId::RTilde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoefficientId::Pearson => "pearson",
            CoefficientId::Spearman => "spearman",
            CoefficientId::Kendall => "kendall",
            CoefficientId::RNew => "r_new",
            CoefficientId::RTilde => "r_tilde",
        }
    }

    fn extract(self, e: &CorrelationEstimates) -> f64 {
        match self {
            CoefficientId::Pearson => e.pearson,
            CoefficientId::Spearman => e.spearman,
            CoefficientId::Kendall => e.kendall,
            CoefficientId::RNew => e.r_new,
            CoefficientId::RTilde => e.r_tilde,
        }
    }
}

impl std::fmt::Display for CoefficientId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub family: Family,
    pub ts: Vec<f64>,
    /// Sample size per replication.
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub coefficients: Vec<CoefficientId>,
}

impl SimulationConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::SampleTooSmall { n: self.n, min: 2 });
        }
        if self.reps < 2 {
            return Err(Error::MismatchedConfig(format!(
                "reps = {} but the sample variance needs reps >= 2",
                self.reps
            )));
        }
        if self.ts.is_empty() {
            return Err(Error::MismatchedConfig("no parameter values".into()));
        }
        if self.coefficients.is_empty() {
            return Err(Error::MismatchedConfig("no coefficients requested".into()));
        }
        Ok(())
    }
}

/// Mean and unbiased sample variance of one coefficient at one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub t: f64,
    pub coefficient: CoefficientId,
    pub mean: f64,
    pub s2: f64,
    pub reps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationResult {
    pub family: Family,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub cells: Vec<Cell>,
    /// Not part of the reproducible payload.
    #[serde(skip)]
    pub wall_secs: f64,
}

impl SimulationResult {
    pub fn cell(&self, t: f64, coefficient: CoefficientId) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.t == t && c.coefficient == coefficient)
    }
}

/// The ChaCha stream for replication `rep` of parameter index `t_idx`:
/// key from the seed, stream id from the (t_idx, rep) counter pair.
pub fn rep_rng(seed: u64, t_idx: usize, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    debug_assert!(rep < (1 << 40));
    rng.set_stream(((t_idx as u64) << 40) | rep as u64);
    rng
}

/// Runs the experiment: per replication, draw a fresh sample from its own
/// substream and compute the requested coefficients.
pub fn run(config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let started = Instant::now();
    let mut cells = Vec::new();
    for (t_idx, &t) in config.ts.iter().enumerate() {
        let model = BivariateModel::new(config.family, t)?;
        let per_rep: Vec<CorrelationEstimates> = (0..config.reps)
            .into_par_iter()
            .map(|rep| {
                let mut rng = rep_rng(config.seed, t_idx, rep);
                let sample = model.sample(config.n, &mut rng);
                estimate_all(&sample)
            })
            .collect::<Result<Vec<_>>>()?;
        for &coefficient in &config.coefficients {
            let values: Vec<f64> = per_rep.iter().map(|e| coefficient.extract(e)).collect();
            let mean = pairwise_sum(&values) / values.len() as f64;
            let sq: Vec<f64> = values.iter().map(|&x| (x - mean) * (x - mean)).collect();
            let s2 = pairwise_sum(&sq) / (values.len() as f64 - 1.0);
            cells.push(Cell {
                t,
                coefficient,
                mean,
                s2,
                reps: config.reps,
            });
        }
    }
    Ok(SimulationResult {
        family: config.family,
        n: config.n,
        reps: config.reps,
        seed: config.seed,
        cells,
        wall_secs: started.elapsed().as_secs_f64(),
    })
}

/// A theoretical leading variance coefficient to compare a cell against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryValue {
    pub t: f64,
    pub coefficient: CoefficientId,
    /// c with Var ~ c / n.
    pub leading_coeff: f64,
}

/// Acceptance band for the ratio observed / theory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    /// Wide default that absorbs RNG-to-RNG variation.
    pub fn loose() -> Self {
        Band { lo: 0.8, hi: 1.25 }
    }

    /// Exact chi-squared interval for an S^2 ratio with reps - 1 degrees of
    /// freedom at the two-sided level `alpha`.
    pub fn chi_squared(reps: usize, alpha: f64) -> Self {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let nu = (reps - 1) as f64;
        let chi = ChiSquared::new(nu).expect("reps >= 2");
        Band {
            lo: chi.inverse_cdf(alpha / 2.0) / nu,
            hi: chi.inverse_cdf(1.0 - alpha / 2.0) / nu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub t: f64,
    pub coefficient: CoefficientId,
    pub observed_s2: f64,
    /// Leading coefficient scaled to the sample size: c / n.
    pub theory_var: f64,
    pub ratio: f64,
    pub in_band: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub band: Band,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn all_in_band(&self) -> bool {
        self.rows.iter().all(|r| r.in_band)
    }
}

/// Ratios observed S^2 / (c / n) per cell, flagged against the band.
pub fn compare_with_theory(
    result: &SimulationResult,
    theory: &[TheoryValue],
    band: Band,
) -> Result<ComparisonTable> {
    let mut rows = Vec::with_capacity(theory.len());
    for th in theory {
        let cell = result.cell(th.t, th.coefficient).ok_or_else(|| {
            Error::MismatchedConfig(format!(
                "no simulated cell for t = {}, coefficient {}",
                th.t, th.coefficient
            ))
        })?;
        let theory_var = th.leading_coeff / result.n as f64;
        let ratio = cell.s2 / theory_var;
        rows.push(ComparisonRow {
            t: th.t,
            coefficient: th.coefficient,
            observed_s2: cell.s2,
            theory_var,
            ratio,
            in_band: ratio >= band.lo && ratio <= band.hi,
        });
    }
    Ok(ComparisonTable { band, rows })
}
