//! Mode-matched bivariate kernel density baseline.
//!
//! Each observation `(z1, z2)` carries the product of a lognormal kernel on
//! the first risk and a Fréchet kernel on the second, both with their mode
//! placed on the observation:
//!
//! ```text
//! k1(x, z, σ) = exp(−½ ((ln(x/z) − σ²)/σ)²) / (√(2π) σ x)
//! k2(x, z, α) = ((α+1)/x) (z/x)^α exp(−(1 + 1/α)(z/x)^α)
//! ```
//!
//! Both kernels have exact samplers:
//!
//! * `k1` is the lognormal law with log-mean `ln z + σ²` and log-sd `σ`, so
//!   `X = z exp(σ² + σN)` with `N` standard normal.
//! * Under `U = (z/x)^α` the `k2` density becomes `c e^(−cU)` with
//!   `c = 1 + 1/α`, i.e. `U ~ Exp(c)`. Inverting, `X = z (c/E)^(1/α)` with
//!   `E ~ Exp(1)`.

use std::f64::consts::PI;

use crate::batch::{run_batch, ModelDescriptor, ScenarioBatch};
use crate::error::{ensure_positive, Error, Result};
use crate::grid::{DensityGrid, GridAxis};
use crate::matrix::LossMatrix;
use crate::rng::RandomStream;
use crate::scenario::uniform_index;

pub const DEFAULT_SIGMA: f64 = 0.3;
pub const DEFAULT_ALPHA: f64 = 7.0;

pub fn k1_density(x: f64, z: f64, sigma: f64) -> Result<f64> {
    ensure_positive("x", x)?;
    ensure_positive("z", z)?;
    ensure_positive("sigma", sigma)?;
    Ok(log_k1(x, z, sigma).exp())
}

pub fn k2_density(x: f64, z: f64, alpha: f64) -> Result<f64> {
    ensure_positive("x", x)?;
    ensure_positive("z", z)?;
    ensure_positive("alpha", alpha)?;
    Ok(log_k2(x, z, alpha).exp())
}

fn log_k1(x: f64, z: f64, sigma: f64) -> f64 {
    let t = ((x / z).ln() - sigma * sigma) / sigma;
    -0.5 * t * t - 0.5 * (2.0 * PI).ln() - sigma.ln() - x.ln()
}

fn log_k2(x: f64, z: f64, alpha: f64) -> f64 {
    let log_ratio = (z / x).ln();
    let power = (alpha * log_ratio).exp();
    (alpha + 1.0).ln() - x.ln() + alpha * log_ratio - (1.0 + 1.0 / alpha) * power
}

#[derive(Debug, Clone)]
pub struct KernelModel {
    data: LossMatrix,
    sigma: f64,
    alpha: f64,
}

impl KernelModel {
    pub fn new(data: LossMatrix, sigma: f64, alpha: f64) -> Result<Self> {
        ensure_positive("sigma", sigma)?;
        ensure_positive("alpha", alpha)?;
        if data.cols() != 2 {
            return Err(Error::Dimension(format!(
                "the kernel baseline is bivariate, data has {} columns",
                data.cols()
            )));
        }
        if data.rows() == 0 {
            return Err(Error::Empty("observation matrix"));
        }
        for &v in data.as_slice() {
            ensure_positive("observation", v)?;
        }
        Ok(Self { data, sigma, alpha })
    }

    pub fn with_defaults(data: LossMatrix) -> Result<Self> {
        Self::new(data, DEFAULT_SIGMA, DEFAULT_ALPHA)
    }

    pub fn data(&self) -> &LossMatrix {
        &self.data
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor::Kernel {
            sigma: self.sigma,
            alpha: self.alpha,
        }
    }

    pub fn kernel_density(&self, x: f64, y: f64) -> Result<f64> {
        ensure_positive("x", x)?;
        ensure_positive("y", y)?;
        let total: f64 = self
            .data
            .iter_rows()
            .map(|r| (log_k1(x, r[0], self.sigma) + log_k2(y, r[1], self.alpha)).exp())
            .sum();
        Ok(total / self.data.rows() as f64)
    }

    pub fn sample_kernel(&self, stream: &mut RandomStream) -> (f64, f64) {
        let mut out = [0.0; 2];
        self.sample_into(stream, &mut out);
        (out[0], out[1])
    }

    fn sample_into(&self, stream: &mut RandomStream, out: &mut [f64]) {
        let i = uniform_index(stream, self.data.rows());
        let row = self.data.row(i);
        let n = stream.sample_normal();
        out[0] = row[0] * (self.sigma * self.sigma + self.sigma * n).exp();
        let c = 1.0 + 1.0 / self.alpha;
        let e = stream.sample_exponential(1.0).expect("unit rate");
        out[1] = row[1] * ((c / e).ln() / self.alpha).exp();
    }

    pub fn sample_batch(&self, count: usize, seed: u64, workers: usize) -> Result<ScenarioBatch> {
        run_batch(count, seed, workers, 2, self.descriptor(), |s, row| {
            self.sample_into(s, row)
        })
    }

    pub fn density_grid(&self, x: &GridAxis, y: &GridAxis) -> Result<DensityGrid> {
        Ok(DensityGrid::evaluate(x, y, |a, b| {
            self.kernel_density(a, b).expect("grid points are positive")
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset;
    use crate::oracle::integrate;

    fn mass_log_scale(f: impl Fn(f64) -> f64, center: f64) -> f64 {
        let g = |t: f64| f(t.exp()) * t.exp();
        integrate(&g, center - 12.0, center + 12.0, 1e-13)
    }

    #[test]
    fn kernels_normalize() {
        for &(z, s) in &[(1.0, 0.3), (5.0, 0.3)] {
            let m = mass_log_scale(|x| k1_density(x, z, s).unwrap(), f64::ln(z));
            assert!((m - 1.0).abs() < 1e-8, "k1({z},{s}): {m}");
        }
        for &(z, a) in &[(1.0, 7.0), (2.0, 7.0)] {
            let m = mass_log_scale(|x| k2_density(x, z, a).unwrap(), f64::ln(z));
            assert!((m - 1.0).abs() < 1e-8, "k2({z},{a}): {m}");
        }
    }

    #[test]
    fn k2_normalizes_under_power_substitution() {
        // u = (z/x)^α turns the integral into ∫ c e^{-cu} du
        let (z, a) = (2.0, 7.0);
        let g = |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let x = z * u.powf(-1.0 / a);
            k2_density(x, z, a).unwrap() * x / (a * u)
        };
        let m = integrate(&g, 0.0, 60.0, 1e-13);
        assert!((m - 1.0).abs() < 1e-8, "{m}");
    }

    #[test]
    fn kernel_values_at_the_mode() {
        let (z, s, a) = (1.7, 0.3, 7.0);
        let k1 = (-0.5f64 * s * s).exp() / ((2.0 * PI).sqrt() * s * z);
        assert!((k1_density(z, z, s).unwrap() - k1).abs() < 1e-14);
        let k2 = (a + 1.0) / z * (-(1.0 + 1.0 / a)).exp();
        assert!((k2_density(z, z, a).unwrap() - k2).abs() < 1e-14);
    }

    fn grid_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> f64 {
        let n = ((hi - lo) / step) as usize;
        (0..=n)
            .map(|i| lo + step * i as f64)
            .map(|x| (x, f(x)))
            .fold((lo, f64::MIN), |b, v| if v.1 > b.1 { v } else { b })
            .0
    }

    fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        while b - a > tol {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            if f(c) > f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn kernel_modes_sit_on_the_data_point() {
        let step = 1e-4;
        for &z in &[0.5, 1.0, 2.679] {
            let m1 = grid_argmax(|x| k1_density(x, z, 0.3).unwrap(), 0.05, 3.0 * z, step);
            assert!((m1 - z).abs() <= step);
            let m2 = grid_argmax(|x| k2_density(x, z, 7.0).unwrap(), 0.05, 3.0 * z, step);
            assert!((m2 - z).abs() <= step);
            let g1 = golden_max(|x| k1_density(x, z, 0.3).unwrap(), 0.2 * z, 3.0 * z, 1e-9);
            let g2 = golden_max(|x| k2_density(x, z, 7.0).unwrap(), 0.2 * z, 3.0 * z, 1e-9);
            assert!((g1 - z).abs() < 1e-6 * z);
            assert!((g2 - z).abs() < 1e-6 * z);
        }
    }

    #[test]
    fn kernel_arguments_validated() {
        assert!(k1_density(0.0, 1.0, 0.3).is_err());
        assert!(k1_density(1.0, 1.0, 0.0).is_err());
        assert!(k2_density(1.0, -1.0, 7.0).is_err());
        assert!(KernelModel::new(dataset::table1(), 0.0, 7.0).is_err());
        let three = LossMatrix::from_rows(&[[1.0, 1.0, 1.0]]).unwrap();
        assert!(KernelModel::new(three, 0.3, 7.0).is_err());
        let model = KernelModel::with_defaults(dataset::table1()).unwrap();
        assert!(model.kernel_density(0.0, 1.0).is_err());
    }

    #[test]
    fn single_point_density_is_product() {
        let data = LossMatrix::from_rows(&[[1.3, 0.9]]).unwrap();
        let model = KernelModel::new(data, 0.3, 7.0).unwrap();
        for &(x, y) in &[(0.5, 0.5), (1.3, 0.9), (4.0, 2.0)] {
            let want = k1_density(x, 1.3, 0.3).unwrap() * k2_density(y, 0.9, 7.0).unwrap();
            assert!((model.kernel_density(x, y).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn density_matches_naive_evaluator() {
        let model = KernelModel::with_defaults(dataset::table1()).unwrap();
        let mut s = RandomStream::new(31);
        for _ in 0..100 {
            let x = (1.2 * s.sample_normal()).exp();
            let y = (0.3 * s.sample_normal()).exp();
            let mut naive = 0.0;
            for row in dataset::TABLE1 {
                let (z1, z2) = (row[0], row[1]);
                let a = 1.0 / ((2.0 * PI).sqrt() * 0.3 * x)
                    * (-0.5 * (((x / z1).ln() - 0.09) / 0.3).powi(2)).exp();
                let r = z2 / y;
                let b = 8.0 / y * r.powi(7) * (-(1.0 + 1.0 / 7.0) * r.powi(7)).exp();
                naive += a * b;
            }
            naive /= 20.0;
            let fast = model.kernel_density(x, y).unwrap();
            assert!(
                (fast - naive).abs() <= 1e-12 * naive.max(1.0),
                "{fast} vs {naive}"
            );
        }
    }

    #[test]
    fn density_is_mixture_over_observations() {
        let model = KernelModel::with_defaults(dataset::table1()).unwrap();
        let (x, y) = (1.4, 1.1);
        let parts: f64 = (0..20)
            .map(|i| {
                let row = LossMatrix::from_rows(&[dataset::TABLE1[i]]).unwrap();
                KernelModel::with_defaults(row)
                    .unwrap()
                    .kernel_density(x, y)
                    .unwrap()
            })
            .sum();
        assert!((model.kernel_density(x, y).unwrap() - parts / 20.0).abs() < 1e-14);
    }

    #[test]
    fn density_integrates_to_one() {
        let model = KernelModel::with_defaults(dataset::table1()).unwrap();
        let inner = |t: f64| {
            let x = t.exp();
            let g = |v: f64| model.kernel_density(x, v.exp()).unwrap() * v.exp();
            integrate(&g, -3.0, 4.0, 1e-9) * x
        };
        let mass = integrate(&inner, -6.0, 5.0, 1e-7);
        assert!((mass - 1.0).abs() < 1e-4, "{mass}");
    }

    /// One-sample KS distance of draws against a cdf.
    fn ks_one_sample(draws: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
        draws.sort_by(f64::total_cmp);
        let n = draws.len() as f64;
        draws
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn samplers_match_quadrature_cdfs() {
        let data = LossMatrix::from_rows(&[[1.3, 0.9]]).unwrap();
        let model = KernelModel::new(data, 0.3, 7.0).unwrap();
        let mut s = RandomStream::new(32);
        let n = 100_000;
        let (mut xs, mut ys): (Vec<f64>, Vec<f64>) =
            (0..n).map(|_| model.sample_kernel(&mut s)).unzip();
        // cdf oracle from quadrature on a fine table, linearly interpolated
        let table = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
            let k = 4000;
            let mut acc = 0.0;
            let mut pts = vec![(lo, 0.0)];
            let h = (hi - lo) / k as f64;
            for j in 0..k {
                let a = lo + h * j as f64;
                acc += integrate(f, a, a + h, 1e-14);
                pts.push((a + h, acc));
            }
            pts
        };
        let interp = |pts: &[(f64, f64)], x: f64| {
            let idx = pts.partition_point(|p| p.0 < x).clamp(1, pts.len() - 1);
            let (x0, y0) = pts[idx - 1];
            let (x1, y1) = pts[idx];
            (y0 + (y1 - y0) * (x - x0) / (x1 - x0)).clamp(0.0, 1.0)
        };
        let t1 = table(
            &|x: f64| {
                if x > 0.0 {
                    k1_density(x, 1.3, 0.3).unwrap()
                } else {
                    0.0
                }
            },
            0.0,
            12.0,
        );
        let t2 = table(
            &|x: f64| {
                if x > 0.0 {
                    k2_density(x, 0.9, 7.0).unwrap()
                } else {
                    0.0
                }
            },
            0.0,
            12.0,
        );
        let crit = 1.628 / (n as f64).sqrt();
        let d1 = ks_one_sample(&mut xs, |x| interp(&t1, x));
        let d2 = ks_one_sample(&mut ys, |x| interp(&t2, x));
        assert!(d1 < crit, "k1 D = {d1}");
        assert!(d2 < crit, "k2 D = {d2}");
    }

    #[test]
    fn sampled_mode_near_data_point() {
        let data = LossMatrix::from_rows(&[[1.0, 1.0]]).unwrap();
        let model = KernelModel::new(data, 0.3, 7.0).unwrap();
        let mut s = RandomStream::new(33);
        let width = 0.05;
        let mut hist = [[0usize; 80]; 2];
        for _ in 0..1_000_000 {
            let (x, y) = model.sample_kernel(&mut s);
            for (h, v) in hist.iter_mut().zip([x, y]) {
                let b = (v / width) as usize;
                if b < 80 {
                    h[b] += 1;
                }
            }
        }
        for h in &hist {
            let peak = (0..80).max_by_key(|&b| h[b]).unwrap();
            let center = (peak as f64 + 0.5) * width;
            assert!((center - 1.0).abs() <= 2.0 * width, "peak at {center}");
        }
    }

    #[test]
    fn batch_is_deterministic() {
        let model = KernelModel::with_defaults(dataset::table1()).unwrap();
        let a = model.sample_batch(3000, 5, 3).unwrap();
        let b = model.sample_batch(3000, 5, 3).unwrap();
        assert_eq!(a, b);
        assert!(a
            .samples()
            .as_slice()
            .iter()
            .all(|&v| v > 0.0 && v.is_finite()));
        assert_eq!(a.model().label(), "kernel");
    }

    #[test]
    fn grid_is_pointwise() {
        let model = KernelModel::with_defaults(dataset::table1()).unwrap();
        let x = GridAxis::linear(0.5, 3.0, 3).unwrap();
        let y = GridAxis::linear(0.7, 1.5, 3).unwrap();
        let grid = model.density_grid(&x, &y).unwrap();
        for (i, &a) in grid.x.iter().enumerate() {
            for (j, &b) in grid.y.iter().enumerate() {
                assert_eq!(grid.at(i, j), model.kernel_density(a, b).unwrap());
            }
        }
    }
}
