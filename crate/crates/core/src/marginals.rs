//! Parametric marginal loss models and their Q-Q regression fit.
//!
//! Both families are parametrized on the log scale: a lognormal risk has
//! `ln X ~ Normal(mu, sigma)`, a Fréchet risk has `ln X ~ Gumbel(mu, sigma)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_open_unit, ensure_positive, Error, Result};
use crate::special::{inv_normal_unchecked, normal_cdf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    LogNormal,
    Frechet,
}

impl Family {
    /// Quantile of the standardized log-scale law (normal or Gumbel).
    pub fn standard_quantile(self, p: f64) -> f64 {
        match self {
            Family::LogNormal => inv_normal_unchecked(p),
            Family::Frechet => -(-p.ln()).ln(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::LogNormal => "lognormal",
            Family::Frechet => "frechet",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lognormal" | "log-normal" => Ok(Family::LogNormal),
            "frechet" | "fréchet" => Ok(Family::Frechet),
            other => Err(Error::Config {
                field: "family",
                reason: format!("unknown family {other:?}, expected lognormal or frechet"),
            }),
        }
    }
}

/// Plotting positions `p_i` assigned to the i-th order statistic of n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlottingPosition {
    /// `i / (n + 1)`
    #[default]
    Weibull,
    /// `(i − 0.5) / n`
    Hazen,
}

impl PlottingPosition {
    pub fn position(self, i: usize, n: usize) -> f64 {
        match self {
            PlottingPosition::Weibull => i as f64 / (n as f64 + 1.0),
            PlottingPosition::Hazen => (i as f64 - 0.5) / n as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalModel {
    family: Family,
    mu: f64,
    sigma: f64,
}

impl MarginalModel {
    pub fn new(family: Family, mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Domain {
                name: "mu",
                value: mu,
                reason: "must be finite",
            });
        }
        ensure_positive("sigma", sigma)?;
        Ok(Self { family, mu, sigma })
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::LogNormal, mu, sigma)
    }

    pub fn frechet(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Frechet, mu, sigma)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        ensure_positive("x", x)?;
        Ok(self.cdf_unchecked(x))
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        ensure_open_unit("p", p)?;
        Ok(self.quantile_unchecked(p))
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        ensure_positive("x", x)?;
        Ok(self.density_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        let z = (x.ln() - self.mu) / self.sigma;
        match self.family {
            Family::LogNormal => normal_cdf(z),
            Family::Frechet => (-(-z).exp()).exp(),
        }
    }

    pub(crate) fn quantile_unchecked(&self, p: f64) -> f64 {
        (self.mu + self.sigma * self.family.standard_quantile(p)).exp()
    }

    pub(crate) fn density_unchecked(&self, x: f64) -> f64 {
        self.log_density_unchecked(x).exp()
    }

    pub(crate) fn log_density_unchecked(&self, x: f64) -> f64 {
        let lx = x.ln();
        let z = (lx - self.mu) / self.sigma;
        let log_scale = self.sigma.ln() + lx;
        match self.family {
            Family::LogNormal => -0.5 * z * z - 0.5 * (2.0 * std::f64::consts::PI).ln() - log_scale,
            Family::Frechet => -(-z).exp() - z - log_scale,
        }
    }
}

/// Fits `(mu, sigma)` by least squares of sorted log observations on the
/// family's standard quantiles at Weibull plotting positions.
pub fn fit_qq(observations: &[f64], family: Family) -> Result<MarginalModel> {
    fit_qq_with(observations, family, PlottingPosition::default())
}

pub fn fit_qq_with(
    observations: &[f64],
    family: Family,
    positions: PlottingPosition,
) -> Result<MarginalModel> {
    if observations.len() < 3 {
        return Err(Error::Degenerate(format!(
            "Q-Q fit needs at least 3 observations, got {}",
            observations.len()
        )));
    }
    let logs = sorted_logs(observations)?;
    let n = logs.len();
    let theoretical: Vec<f64> = (1..=n)
        .map(|i| family.standard_quantile(positions.position(i, n)))
        .collect();

    let mean_q = theoretical.iter().sum::<f64>() / n as f64;
    let mean_y = logs.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (q, y) in theoretical.iter().zip(&logs) {
        sxy += (q - mean_q) * (y - mean_y);
        sxx += (q - mean_q) * (q - mean_q);
        syy += (y - mean_y) * (y - mean_y);
    }
    if syy <= 0.0 {
        return Err(Error::Degenerate(
            "log observations have zero variance".to_string(),
        ));
    }
    let slope = sxy / sxx;
    if slope <= 0.0 {
        return Err(Error::Degenerate(format!("non-positive Q-Q slope {slope}")));
    }
    MarginalModel::new(family, mean_y - slope * mean_q, slope)
}

/// Q-Q pairs `(mu + sigma * q(p_i), ln x_(i))` on the log scale.
pub fn qq_points(samples: &[f64], model: &MarginalModel) -> Result<Vec<(f64, f64)>> {
    qq_points_with(samples, model, PlottingPosition::default())
}

pub fn qq_points_with(
    samples: &[f64],
    model: &MarginalModel,
    positions: PlottingPosition,
) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::Empty("Q-Q samples"));
    }
    let logs = sorted_logs(samples)?;
    let n = logs.len();
    Ok(logs
        .into_iter()
        .enumerate()
        .map(|(i, y)| {
            let q = model.family.standard_quantile(positions.position(i + 1, n));
            (model.mu + model.sigma * q, y)
        })
        .collect())
}

fn sorted_logs(values: &[f64]) -> Result<Vec<f64>> {
    let mut logs = Vec::with_capacity(values.len());
    for &x in values {
        ensure_positive("observation", x)?;
        logs.push(x.ln());
    }
    logs.sort_by(f64::total_cmp);
    Ok(logs)
}
