//! Tail risk measures of the aggregate loss and scaled-rank exports.
//!
//! Quantiles are upper order statistics without interpolation: the
//! p-quantile of N values is the `⌈pN⌉`-th smallest.

use crate::batch::{ModelDescriptor, ScenarioBatch};
use crate::error::{ensure_open_unit, Error, Result};
use crate::matrix::LossMatrix;

/// Solvency-style default risk levels.
pub const DEFAULT_ALPHA_LEVELS: [f64; 3] = [0.05, 0.01, 0.005];

// Absorbs representation error in p·N (e.g. 0.995 · 1e5 = 99500.00000000001).
const RANK_SLACK: f64 = 1e-9;

fn upper_rank(p: f64, n: usize) -> usize {
    ((p * n as f64 - RANK_SLACK).ceil() as usize).clamp(1, n)
}

/// Row sums `Σ_k Y_k` of a scenario matrix.
pub fn aggregate_sums(samples: &LossMatrix) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::Empty("scenario batch"));
    }
    Ok(samples.iter_rows().map(|r| r.iter().sum()).collect())
}

/// The `⌈pN⌉`-th smallest value (1-based).
pub fn empirical_quantile(values: &[f64], p: f64) -> Result<f64> {
    ensure_open_unit("p", p)?;
    if values.is_empty() {
        return Err(Error::Empty("quantile input"));
    }
    let k = upper_rank(p, values.len());
    let mut work = values.to_vec();
    let (_, v, _) = work.select_nth_unstable_by(k - 1, f64::total_cmp);
    Ok(*v)
}

/// Value at risk at level `alpha`: the `(1 − alpha)`-quantile of the sums.
pub fn var_estimate(sums: &[f64], alpha: f64) -> Result<f64> {
    ensure_open_unit("alpha", alpha)?;
    empirical_quantile(sums, 1.0 - alpha)
}

/// Mean of the `⌈alpha·N⌉` largest values.
pub fn expected_shortfall(sums: &[f64], alpha: f64) -> Result<f64> {
    ensure_open_unit("alpha", alpha)?;
    if sums.is_empty() {
        return Err(Error::Empty("expected shortfall input"));
    }
    let n = sums.len();
    let tail = upper_rank(alpha, n);
    let mut work = sums.to_vec();
    work.select_nth_unstable_by(n - tail, f64::total_cmp);
    Ok(work[n - tail..].iter().sum::<f64>() / tail as f64)
}

/// Denominator used to scale ranks into the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankScaling {
    /// `rank / (N + 1)`, strictly inside (0, 1)
    #[default]
    NPlusOne,
    /// `rank / N`
    N,
}

/// Column-wise ranks scaled into the unit interval (the empirical copula).
/// Ties keep input order.
pub fn scaled_ranks(samples: &LossMatrix) -> Result<LossMatrix> {
    scaled_ranks_with(samples, RankScaling::default())
}

pub fn scaled_ranks_with(samples: &LossMatrix, scaling: RankScaling) -> Result<LossMatrix> {
    if samples.is_empty() {
        return Err(Error::Empty("scenario batch"));
    }
    let (n, d) = (samples.rows(), samples.cols());
    let denom = match scaling {
        RankScaling::NPlusOne => n as f64 + 1.0,
        RankScaling::N => n as f64,
    };
    let mut out = vec![0.0; n * d];
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..d {
        order.sort_by(|&a, &b| {
            samples
                .get(a, k)
                .total_cmp(&samples.get(b, k))
                .then(a.cmp(&b))
        });
        for (rank, &i) in order.iter().enumerate() {
            out[i * d + k] = (rank + 1) as f64 / denom;
        }
    }
    LossMatrix::from_flat(n, d, out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskReport {
    pub alpha_levels: Vec<f64>,
    pub var_estimates: Vec<f64>,
    pub es_estimates: Vec<f64>,
    pub sample_count: usize,
    pub model: ModelDescriptor,
}

impl RiskReport {
    pub fn from_batch(batch: &ScenarioBatch, alpha_levels: &[f64]) -> Result<Self> {
        let sums = aggregate_sums(batch.samples())?;
        let mut sorted = sums;
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let mut var_estimates = Vec::with_capacity(alpha_levels.len());
        let mut es_estimates = Vec::with_capacity(alpha_levels.len());
        for &alpha in alpha_levels {
            ensure_open_unit("alpha", alpha)?;
            var_estimates.push(sorted[upper_rank(1.0 - alpha, n) - 1]);
            let tail = upper_rank(alpha, n);
            es_estimates.push(sorted[n - tail..].iter().sum::<f64>() / tail as f64);
        }
        Ok(Self {
            alpha_levels: alpha_levels.to_vec(),
            var_estimates,
            es_estimates,
            sample_count: n,
            model: batch.model().clone(),
        })
    }
}
