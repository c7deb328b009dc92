#![allow(dead_code)]

use std::f64::consts::PI;

use product_beta::{dataset, fit_qq, Family, LossMatrix, MarginalModel};

pub const SEEDS: [u64; 3] = [1, 2, 3];

pub const REFERENCE_M: [f64; 6] = [15.0, 20.0, 25.0, 30.0, 50.0, 100.0];
/// Rows alpha = 0.05, 0.01, 0.005; columns m = 15..100 then the kernel.
pub const REFERENCE_VAR: [[f64; 7]; 3] = [
    [13.987, 12.978, 12.347, 12.016, 11.341, 10.908, 11.754],
    [40.637, 31.235, 26.989, 23.966, 19.498, 16.580, 17.272],
    [60.752, 44.270, 36.410, 30.846, 23.390, 18.864, 19.087],
];

pub fn fitted_marginals() -> Vec<MarginalModel> {
    let data = dataset::table1();
    vec![
        fit_qq(&data.column(0), Family::LogNormal).unwrap(),
        fit_qq(&data.column(1), Family::Frechet).unwrap(),
    ]
}

/// Stirling series after shifting the argument past 20.
pub fn ln_gamma(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut z = x;
    while z < 20.0 {
        shift += z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z2 * z2 * z)
        - 1.0 / (1680.0 * z2 * z2 * z2 * z);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

pub fn beta_pdf(x: f64, a: f64, b: f64) -> f64 {
    let ln_norm = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b);
    (ln_norm + (a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln()).exp()
}

pub fn marginal_cdf(f: &MarginalModel, y: f64) -> f64 {
    let z = (y.ln() - f.mu()) / f.sigma();
    match f.family() {
        Family::LogNormal => 0.5 * libm::erfc(-z / 2f64.sqrt()),
        Family::Frechet => (-(-z).exp()).exp(),
    }
}

pub fn marginal_pdf(f: &MarginalModel, y: f64) -> f64 {
    let z = (y.ln() - f.mu()) / f.sigma();
    let standard = match f.family() {
        Family::LogNormal => (-0.5 * z * z).exp() / (2.0 * PI).sqrt(),
        Family::Frechet => (-z - (-z).exp()).exp(),
    };
    standard / (f.sigma() * y)
}

/// Direct double loop over observations and coordinates.
pub fn naive_h(unit_data: &LossMatrix, m: f64, u: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..unit_data.rows() {
        let mut prod = 1.0;
        for (k, &x) in u.iter().enumerate() {
            let p = unit_data.get(i, k);
            prod *= beta_pdf(x, (m + 1.0) * p, (m + 1.0) * (1.0 - p));
        }
        total += prod;
    }
    total / unit_data.rows() as f64
}

pub fn naive_unit_data(data: &LossMatrix, marginals: &[MarginalModel]) -> LossMatrix {
    let mut values = Vec::new();
    for row in data.iter_rows() {
        for (k, &x) in row.iter().enumerate() {
            values.push(marginal_cdf(&marginals[k], x));
        }
    }
    LossMatrix::from_flat(data.rows(), data.cols(), values).unwrap()
}

pub fn naive_g(data: &LossMatrix, marginals: &[MarginalModel], m: f64, y: &[f64]) -> f64 {
    let unit = naive_unit_data(data, marginals);
    let u: Vec<f64> = y
        .iter()
        .zip(marginals)
        .map(|(&v, f)| marginal_cdf(f, v))
        .collect();
    let jacobian: f64 = y
        .iter()
        .zip(marginals)
        .map(|(&v, f)| marginal_pdf(f, v))
        .product();
    naive_h(&unit, m, &u) * jacobian
}

pub fn k1(x: f64, z: f64, sigma: f64) -> f64 {
    let t = ((x / z).ln() - sigma * sigma) / sigma;
    (-0.5 * t * t).exp() / ((2.0 * PI).sqrt() * sigma * x)
}

pub fn k2(x: f64, z: f64, alpha: f64) -> f64 {
    let r = (z / x).powf(alpha);
    (alpha + 1.0) / x * r * (-(1.0 + 1.0 / alpha) * r).exp()
}

pub fn naive_kernel(data: &LossMatrix, sigma: f64, alpha: f64, x: f64, y: f64) -> f64 {
    let total: f64 = data
        .iter_rows()
        .map(|r| k1(x, r[0], sigma) * k2(y, r[1], alpha))
        .sum();
    total / data.rows() as f64
}

/// Composite Simpson rule with `panels` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for j in 1..panels {
        s += f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `∫ f(x) dx` over `(0, ∞)` via `x = e^t` on `[t_lo, t_hi]`.
pub fn integrate_positive(f: impl Fn(f64) -> f64, t_lo: f64, t_hi: f64, panels: usize) -> f64 {
    simpson(|t| f(t.exp()) * t.exp(), t_lo, t_hi, panels)
}

/// Cdf tabulated by cumulative trapezoids on a log grid, read by linear
/// interpolation.
pub struct TabulatedCdf {
    t: Vec<f64>,
    cdf: Vec<f64>,
}

impl TabulatedCdf {
    pub fn new(pdf: impl Fn(f64) -> f64, t_lo: f64, t_hi: f64, steps: usize) -> Self {
        let h = (t_hi - t_lo) / steps as f64;
        let t: Vec<f64> = (0..=steps).map(|j| t_lo + j as f64 * h).collect();
        let g: Vec<f64> = t.iter().map(|&s| pdf(s.exp()) * s.exp()).collect();
        let mut cdf = vec![0.0; t.len()];
        for j in 1..t.len() {
            cdf[j] = cdf[j - 1] + 0.5 * h * (g[j - 1] + g[j]);
        }
        Self { t, cdf }
    }

    pub fn total(&self) -> f64 {
        *self.cdf.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = x.ln();
        if s <= self.t[0] {
            return 0.0;
        }
        let h = self.t[1] - self.t[0];
        let j = ((s - self.t[0]) / h) as usize;
        if j + 1 >= self.t.len() {
            return self.total();
        }
        let w = (s - self.t[j]) / h;
        self.cdf[j] * (1.0 - w) + self.cdf[j + 1] * w
    }
}

pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max)
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic Kolmogorov critical value at the 1% level.
pub const KS_1PCT: f64 = 1.628;

pub fn ks_one_sample_critical(n: usize) -> f64 {
    KS_1PCT / (n as f64).sqrt()
}

pub fn ks_two_sample_critical(n: usize, m: usize) -> f64 {
    KS_1PCT * ((n + m) as f64 / (n * m) as f64).sqrt()
}
