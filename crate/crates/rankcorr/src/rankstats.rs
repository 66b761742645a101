//! Sample correlation coefficients over concomitant ranks.
//!
//! Sorting the pairs by x and ranking the y values in that order yields the
//! concomitant rank permutation. All rank coefficients here are functions of
//! that permutation alone, so they are invariant under strictly increasing
//! transforms of either coordinate.
//!
//! Kendall's coefficient and the weighted concordance sum `T_n` come in a
//! naive O(n^2) and a fast O(n log n) variant with identical outputs; the
//! unqualified entry points pick the naive path below [`FAST_PATH_MIN_N`]
//! where its constant factor wins.

use serde::{Deserialize, Serialize};

use crate::error::{Coordinate, Error, Result};

/// Below this length the O(n^2) loops beat the fast paths.
pub const FAST_PATH_MIN_N: usize = 64;

/// Raw paired observations.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

/// How to treat tied values when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Refuse tied samples (the distributional theory assumes none).
    #[default]
    Reject,
    /// Break ties deterministically by input order, equivalent to adding an
    /// input-order-scaled epsilon to each tied value. Reproducible; results
    /// on tied data are no longer exactly covered by the asymptotic theory.
    JitterInputOrder,
}

impl PairedSample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::SampleTooSmall {
                n: xs.len(),
                min: 2,
            });
        }
        Ok(Self { xs, ys })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// First tied pair in either coordinate, if any (x checked first).
    pub fn find_tie(&self) -> Option<(Coordinate, usize, usize, f64)> {
        find_duplicate(&self.xs)
            .map(|(a, b, v)| (Coordinate::X, a, b, v))
            .or_else(|| find_duplicate(&self.ys).map(|(a, b, v)| (Coordinate::Y, a, b, v)))
    }

    pub fn has_ties(&self) -> bool {
        self.find_tie().is_some()
    }
}

/// Indices of the first duplicated value (0-based input rows) and the value.
fn find_duplicate(values: &[f64]) -> Option<(usize, usize, f64)> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    for w in order.windows(2) {
        if values[w[0]] == values[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Some((a, b, values[a]));
        }
    }
    None
}

/// Ranks of the y concomitants in x-sorted order; a permutation of 1..=n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcomitantRanks {
    ranks: Vec<usize>,
}

impl ConcomitantRanks {
    /// Validates that `ranks` is a permutation of 1..=n with n >= 2.
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        if n < 2 {
            return Err(Error::SampleTooSmall { n, min: 2 });
        }
        let mut seen = vec![false; n + 1];
        for &r in &ranks {
            if r == 0 || r > n {
                return Err(Error::InvalidRanks {
                    n,
                    reason: format!("rank {r} outside 1..={n}"),
                });
            }
            if seen[r] {
                return Err(Error::InvalidRanks {
                    n,
                    reason: format!("rank {r} appears twice"),
                });
            }
            seen[r] = true;
        }
        Ok(Self { ranks })
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.ranks
    }

    /// Ranks after reversing the y order: r_i -> n + 1 - r_i.
    pub fn reversed_y(&self) -> Self {
        let n = self.ranks.len();
        Self {
            ranks: self.ranks.iter().map(|&r| n + 1 - r).collect(),
        }
    }
}

/// Concomitant ranks of a tie-free sample; rejects ties.
pub fn concomitant_ranks(sample: &PairedSample) -> Result<ConcomitantRanks> {
    concomitant_ranks_with_policy(sample, TiePolicy::Reject)
}

pub fn concomitant_ranks_with_policy(
    sample: &PairedSample,
    policy: TiePolicy,
) -> Result<ConcomitantRanks> {
    if policy == TiePolicy::Reject {
        if let Some((coordinate, row_a, row_b, value)) = sample.find_tie() {
            return Err(Error::TiesPresent {
                coordinate,
                row_a,
                row_b,
                value,
            });
        }
    }
    let n = sample.len();

    // Stable sorts break ties by input position, which is exactly the
    // jitter-by-input-order policy once ties are allowed through.
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by(|&a, &b| sample.xs[a].total_cmp(&sample.xs[b]));

    // Rank all y values once, then read them off in x order.
    let mut by_y: Vec<usize> = (0..n).collect();
    by_y.sort_by(|&a, &b| sample.ys[a].total_cmp(&sample.ys[b]));
    let mut y_rank = vec![0usize; n];
    for (rank0, &idx) in by_y.iter().enumerate() {
        y_rank[idx] = rank0 + 1;
    }

    let ranks = by_x.into_iter().map(|idx| y_rank[idx]).collect();
    Ok(ConcomitantRanks { ranks })
}

/// Sample Pearson correlation coefficient.
pub fn pearson(sample: &PairedSample) -> Result<f64> {
    let n = sample.len() as f64;
    let mean_x = sample.xs.iter().sum::<f64>() / n;
    let mean_y = sample.ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in sample.xs.iter().zip(&sample.ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateSample {
            coordinate: Coordinate::X,
        });
    }
    if syy == 0.0 {
        return Err(Error::DegenerateSample {
            coordinate: Coordinate::Y,
        });
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Kendall's coefficient: 4 * #(non-inversions) / (n(n-1)) - 1.
pub fn kendall(ranks: &ConcomitantRanks) -> f64 {
    if ranks.n() < FAST_PATH_MIN_N {
        kendall_naive(ranks)
    } else {
        kendall_fast(ranks)
    }
}

pub fn kendall_naive(ranks: &ConcomitantRanks) -> f64 {
    let r = &ranks.ranks;
    let n = r.len();
    let mut concordant = 0u64;
    for i in 1..n {
        for j in 0..i {
            if r[j] <= r[i] {
                concordant += 1;
            }
        }
    }
    kendall_from_concordant(concordant, n)
}

/// Counts inversions by merge sort; concordant pairs are the complement.
pub fn kendall_fast(ranks: &ConcomitantRanks) -> f64 {
    let n = ranks.n();
    let mut work: Vec<usize> = ranks.ranks.clone();
    let mut buf = vec![0usize; n];
    let inversions = merge_count(&mut work, &mut buf);
    let pairs = (n as u64) * (n as u64 - 1) / 2;
    kendall_from_concordant(pairs - inversions, n)
}

fn kendall_from_concordant(concordant: u64, n: usize) -> f64 {
    let pairs = (n as f64) * (n as f64 - 1.0);
    (4.0 * concordant as f64 / pairs - 1.0).clamp(-1.0, 1.0)
}

/// Bottom-up merge sort returning the number of inversions.
fn merge_count(data: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = data.len();
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo + width < n {
            let mid = lo + width;
            let hi = (mid + width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if data[i] <= data[j] {
                    buf[k] = data[i];
                    i += 1;
                } else {
                    buf[k] = data[j];
                    j += 1;
                    inversions += (mid - i) as u64;
                }
                k += 1;
            }
            buf[k..hi].copy_from_slice(if i < mid { &data[i..mid] } else { &data[j..hi] });
            data[lo..hi].copy_from_slice(&buf[lo..hi]);
            lo += 2 * width;
        }
        width *= 2;
    }
    inversions
}

/// Spearman's coefficient: 1 - 6 * sum d_i^2 / (n^3 - n), d_i = r_i - i.
pub fn spearman(ranks: &ConcomitantRanks) -> f64 {
    let n = ranks.n() as u128;
    let mut sum_d2 = 0u128;
    for (pos, &r) in ranks.ranks.iter().enumerate() {
        let i = pos as i64 + 1;
        let d = r as i64 - i;
        sum_d2 += (d * d) as u128;
    }
    let denom = n * n * n - n;
    (1.0 - 6.0 * (sum_d2 as f64) / (denom as f64)).clamp(-1.0, 1.0)
}

/// Maximum of the weighted concordance sum: n(n-1)(2n-1)/6.
pub fn weighted_t_max(n: usize) -> u128 {
    let n = n as u128;
    n * (n - 1) * (2 * n - 1) / 6
}

/// Weighted concordance sum `T_n`: pairs j < i with r_j <= r_i contribute
/// weight n - i + j (1-based positions), so neighbours weigh n - 1 and the
/// most distant pair weighs 1.
pub fn weighted_t(ranks: &ConcomitantRanks) -> u128 {
    if ranks.n() < FAST_PATH_MIN_N {
        weighted_t_naive(ranks)
    } else {
        weighted_t_fast(ranks)
    }
}

pub fn weighted_t_naive(ranks: &ConcomitantRanks) -> u128 {
    let r = &ranks.ranks;
    let n = r.len();
    let mut t = 0u128;
    for i in 1..n {
        for j in 0..i {
            if r[j] <= r[i] {
                // positions are 1-based: weight = n - (i+1) + (j+1)
                t += (n - i + j) as u128;
            }
        }
    }
    t
}

/// One pass over positions with two rank-indexed Fenwick accumulators:
/// the count of earlier j with r_j <= r_i and the sum of those positions j,
/// giving T_n = sum_i (n - i) * count_i + possum_i.
pub fn weighted_t_fast(ranks: &ConcomitantRanks) -> u128 {
    let r = &ranks.ranks;
    let n = r.len();
    let mut count = Fenwick::new(n);
    let mut possum = Fenwick::new(n);
    let mut t = 0u128;
    for (pos, &rank) in r.iter().enumerate() {
        let i = pos as u64 + 1;
        let c = count.prefix_sum(rank);
        let s = possum.prefix_sum(rank);
        t += (n as u64 - i) as u128 * c as u128 + s as u128;
        count.add(rank, 1);
        possum.add(rank, i);
    }
    t
}

/// The weighted rank correlation coefficient:
/// r_n = 12 T_n / (n(n-1)(2n-1)) - 1.
pub fn r_new(ranks: &ConcomitantRanks) -> f64 {
    r_new_from_t(weighted_t(ranks), ranks.n())
}

pub fn r_new_from_t(t: u128, n: usize) -> f64 {
    let denom = weighted_t_max(n) * 6;
    // 12 T - denom is exact in integers; one rounding on each f64 conversion.
    let num = 12i128 * t as i128 - denom as i128;
    ((num as f64) / (denom as f64)).clamp(-1.0, 1.0)
}

/// (3 tau - rho_S) / 2, from the same ranks.
pub fn r_tilde(ranks: &ConcomitantRanks) -> f64 {
    r_tilde_from(kendall(ranks), spearman(ranks))
}

pub fn r_tilde_from(kendall: f64, spearman: f64) -> f64 {
    (3.0 * kendall - spearman) / 2.0
}

/// All five coefficients from one ranking pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimates {
    pub pearson: f64,
    pub spearman: f64,
    pub kendall: f64,
    pub r_new: f64,
    pub r_tilde: f64,
    pub n: usize,
}

pub fn estimate_all(sample: &PairedSample) -> Result<CorrelationEstimates> {
    estimate_all_with_policy(sample, TiePolicy::Reject)
}

/// Rank coefficients honour the tie policy; Pearson always uses the raw
/// values (ties do not break it).
pub fn estimate_all_with_policy(
    sample: &PairedSample,
    policy: TiePolicy,
) -> Result<CorrelationEstimates> {
    let ranks = concomitant_ranks_with_policy(sample, policy)?;
    let pearson = pearson(sample)?;
    let spearman = spearman(&ranks);
    let kendall = kendall(&ranks);
    Ok(CorrelationEstimates {
        pearson,
        spearman,
        kendall,
        r_new: r_new(&ranks),
        r_tilde: r_tilde_from(kendall, spearman),
        n: sample.len(),
    })
}

/// Fenwick (binary indexed) tree over 1..=n with u64 entries.
struct Fenwick {
    data: Vec<u64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self {
            data: vec![0; n + 1],
        }
    }

    fn add(&mut self, mut i: usize, v: u64) {
        while i < self.data.len() {
            self.data[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over 1..=i.
    fn prefix_sum(&self, mut i: usize) -> u64 {
        let mut s = 0;
        while i > 0 {
            s += self.data[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}
