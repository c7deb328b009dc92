//! Randomized product-beta mixture scenario model.
//!
//! Observations `X_ki` are pushed to the unit cube with the fitted marginal
//! cdfs, `u_ki = F_k(X_ki)`. Around every transformed observation sits a
//! product of independent beta laws with parameters `(m + 1) u_ki` and
//! `(m + 1)(1 − u_ki)`, so component `i` has mean `u_i` and per-coordinate
//! variance `u_ki (1 − u_ki) / (m + 2)`. The mixture density on the cube is
//!
//! ```text
//! h(x) = (1/n) Σ_i Π_k b(x_k; (m+1) u_ki, (m+1)(1 − u_ki))
//! ```
//!
//! and the scenario density on the loss scale is
//! `g(y) = h(F_1(y_1), …, F_d(y_d)) · Π_k f_k(y_k)`, with cdf
//! `G(y) = H(F_1(y_1), …, F_d(y_d))`.
//!
//! Scenarios are drawn by picking a component uniformly, drawing the `d`
//! independent beta coordinates, and mapping each back through the marginal
//! quantile function.

use log::warn;

use crate::batch::{run_batch, ModelDescriptor, ScenarioBatch};
use crate::error::{ensure_positive, Error, Result};
use crate::grid::{DensityGrid, GridAxis};
use crate::marginals::MarginalModel;
use crate::matrix::LossMatrix;
use crate::rng::RandomStream;
use crate::special::{inc_beta_unchecked, ln_beta_unchecked};

/// Transformed observations are kept inside `[UNIT_CLAMP, 1 − UNIT_CLAMP]`.
pub const UNIT_CLAMP: f64 = 1e-12;

/// Beta density `x^(α−1) (1−x)^(β−1) / B(α, β)` for `0 < x < 1`.
pub fn beta_density(x: f64, alpha: f64, beta: f64) -> Result<f64> {
    ensure_positive("alpha", alpha)?;
    ensure_positive("beta", beta)?;
    check_interior("x", x)?;
    Ok(log_beta_density(x, alpha, beta, ln_beta_unchecked(alpha, beta)).exp())
}

fn log_beta_density(x: f64, alpha: f64, beta: f64, ln_norm: f64) -> f64 {
    (alpha - 1.0) * x.ln() + (beta - 1.0) * (-x).ln_1p() - ln_norm
}

fn check_interior(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: x,
            reason: "must lie strictly inside (0, 1)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct BetaParams {
    alpha: f64,
    beta: f64,
    ln_norm: f64,
}

#[derive(Debug, Clone)]
pub struct ScenarioModel {
    data: LossMatrix,
    marginals: Vec<MarginalModel>,
    m: f64,
    unit: LossMatrix,
    params: Vec<BetaParams>,
    clamped: Vec<(usize, usize)>,
}

impl ScenarioModel {
    pub fn build(data: LossMatrix, marginals: Vec<MarginalModel>, m: f64) -> Result<Self> {
        ensure_positive("m", m)?;
        if data.is_empty() {
            return Err(Error::Empty("observation matrix"));
        }
        if marginals.len() != data.cols() {
            return Err(Error::Dimension(format!(
                "{} marginals for {} risks",
                marginals.len(),
                data.cols()
            )));
        }
        let (n, d) = (data.rows(), data.cols());
        let mut unit = Vec::with_capacity(n * d);
        let mut params = Vec::with_capacity(n * d);
        let mut clamped = Vec::new();
        for (i, row) in data.iter_rows().enumerate() {
            for (k, (&x, marginal)) in row.iter().zip(&marginals).enumerate() {
                ensure_positive("observation", x)?;
                let raw = marginal.cdf_unchecked(x);
                let u = raw.clamp(UNIT_CLAMP, 1.0 - UNIT_CLAMP);
                if u != raw {
                    warn!("observation ({i}, {k}) = {x} maps to F = {raw:e}; clamped to {u:e}");
                    clamped.push((i, k));
                }
                let alpha = (m + 1.0) * u;
                let beta = (m + 1.0) * (1.0 - u);
                unit.push(u);
                params.push(BetaParams {
                    alpha,
                    beta,
                    ln_norm: ln_beta_unchecked(alpha, beta),
                });
            }
        }
        Ok(Self {
            unit: LossMatrix::from_flat(n, d, unit)?,
            data,
            marginals,
            m,
            params,
            clamped,
        })
    }

    pub fn data(&self) -> &LossMatrix {
        &self.data
    }

    pub fn marginals(&self) -> &[MarginalModel] {
        &self.marginals
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// The transformed observations `u_ki`.
    pub fn unit_data(&self) -> &LossMatrix {
        &self.unit
    }

    /// Cells `(i, k)` whose transform was clamped away from 0 or 1.
    pub fn clamped_cells(&self) -> &[(usize, usize)] {
        &self.clamped
    }

    pub fn n(&self) -> usize {
        self.data.rows()
    }

    pub fn d(&self) -> usize {
        self.data.cols()
    }

    /// Beta parameters `((m+1) u_ki, (m+1)(1 − u_ki))` of component `i`, risk `k`.
    pub fn beta_parameters(&self, i: usize, k: usize) -> (f64, f64) {
        let p = self.params[i * self.d() + k];
        (p.alpha, p.beta)
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor::ProductBeta {
            m: self.m,
            marginals: self.marginals.clone(),
        }
    }

    fn check_point(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.d() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, model has {}",
                u.len(),
                self.d()
            )));
        }
        Ok(())
    }

    /// Mixture density on the open unit cube.
    pub fn h_density(&self, u: &[f64]) -> Result<f64> {
        self.check_point(u)?;
        for &x in u {
            check_interior("u", x)?;
        }
        Ok(self.log_h_unchecked(u).exp())
    }

    fn log_h_unchecked(&self, u: &[f64]) -> f64 {
        let d = self.d();
        let logs: Vec<f64> = self
            .params
            .chunks_exact(d)
            .map(|component| {
                component
                    .iter()
                    .zip(u)
                    .map(|(p, &x)| log_beta_density(x, p.alpha, p.beta, p.ln_norm))
                    .sum()
            })
            .collect();
        log_sum_exp(&logs) - (self.n() as f64).ln()
    }

    /// Mixture cdf on the closed unit cube.
    pub fn h_cdf(&self, u: &[f64]) -> Result<f64> {
        self.check_point(u)?;
        for &x in u {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Domain {
                    name: "u",
                    value: x,
                    reason: "must lie in [0, 1]",
                });
            }
        }
        Ok(self.h_cdf_unchecked(u))
    }

    fn h_cdf_unchecked(&self, u: &[f64]) -> f64 {
        let d = self.d();
        let total: f64 = self
            .params
            .chunks_exact(d)
            .map(|component| {
                component
                    .iter()
                    .zip(u)
                    .map(|(p, &x)| inc_beta_unchecked(x, p.alpha, p.beta))
                    .product::<f64>()
            })
            .sum();
        (total / self.n() as f64).min(1.0)
    }

    fn to_unit(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(y)?;
        y.iter()
            .zip(&self.marginals)
            .map(|(&yk, f)| f.cdf(yk))
            .collect()
    }

    /// Scenario density on the loss scale.
    pub fn g_density(&self, y: &[f64]) -> Result<f64> {
        let u = self.to_unit(y)?;
        // Marginal cdfs saturate in floating point far in the tails; the
        // density there is zero to working precision.
        if u.iter().any(|&x| x <= 0.0 || x >= 1.0) {
            return Ok(0.0);
        }
        let log_marginals: f64 = y
            .iter()
            .zip(&self.marginals)
            .map(|(&yk, f)| f.log_density_unchecked(yk))
            .sum();
        Ok((self.log_h_unchecked(&u) + log_marginals).exp())
    }

    /// Scenario cdf on the loss scale.
    pub fn g_cdf(&self, y: &[f64]) -> Result<f64> {
        let u = self.to_unit(y)?;
        Ok(self.h_cdf_unchecked(&u))
    }

    /// One point of the mixture on the unit cube, with the chosen component.
    pub fn sample_unit(&self, stream: &mut RandomStream) -> (usize, Vec<f64>) {
        let mut out = vec![0.0; self.d()];
        let i = self.sample_unit_into(stream, &mut out);
        (i, out)
    }

    fn sample_unit_into(&self, stream: &mut RandomStream, out: &mut [f64]) -> usize {
        let i = uniform_index(stream, self.n());
        let d = self.d();
        for (z, p) in out.iter_mut().zip(&self.params[i * d..(i + 1) * d]) {
            *z = stream
                .sample_beta(p.alpha, p.beta)
                .expect("beta parameters validated at build time");
        }
        i
    }

    /// One scenario on the loss scale.
    pub fn sample_scenario(&self, stream: &mut RandomStream) -> Vec<f64> {
        let mut out = vec![0.0; self.d()];
        self.sample_scenario_into(stream, &mut out);
        out
    }

    fn sample_scenario_into(&self, stream: &mut RandomStream, out: &mut [f64]) {
        self.sample_unit_into(stream, out);
        for (z, f) in out.iter_mut().zip(&self.marginals) {
            *z = f.quantile_unchecked(*z);
        }
    }

    /// `count` scenarios split across `workers` derived streams.
    pub fn sample_batch(&self, count: usize, seed: u64, workers: usize) -> Result<ScenarioBatch> {
        run_batch(
            count,
            seed,
            workers,
            self.d(),
            self.descriptor(),
            |s, row| self.sample_scenario_into(s, row),
        )
    }

    /// `g_density` on `x × y` for a bivariate model.
    pub fn density_grid(&self, x: &GridAxis, y: &GridAxis) -> Result<DensityGrid> {
        if self.d() != 2 {
            return Err(Error::Dimension(format!(
                "density grids need d = 2, model has d = {}",
                self.d()
            )));
        }
        Ok(DensityGrid::evaluate(x, y, |a, b| {
            self.g_density(&[a, b]).expect("grid points are positive")
        }))
    }
}

/// Uniform index in `0..n` without modulo bias.
pub(crate) fn uniform_index(stream: &mut RandomStream, n: usize) -> usize {
    let n = n as u64;
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let v = stream.next_u64();
        if v < zone {
            return (v % n) as usize;
        }
    }
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}
