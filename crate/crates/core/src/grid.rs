//! Evaluation grids for bivariate density contours.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    points: Vec<f64>,
}

impl GridAxis {
    /// `points` equally spaced values from `lo` to `hi` inclusive.
    pub fn linear(lo: f64, hi: f64, points: usize) -> Result<Self> {
        check_range(lo, hi, points)?;
        let step = (hi - lo) / (points - 1) as f64;
        Self::from_points((0..points).map(|i| lo + step * i as f64).collect())
    }

    /// `points` geometrically spaced values from `lo` to `hi` inclusive.
    pub fn log(lo: f64, hi: f64, points: usize) -> Result<Self> {
        check_range(lo, hi, points)?;
        let (a, b) = (lo.ln(), hi.ln());
        let step = (b - a) / (points - 1) as f64;
        Self::from_points((0..points).map(|i| (a + step * i as f64).exp()).collect())
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Config {
                field: "resolution",
                reason: format!("need at least 2 grid points, got {}", points.len()),
            });
        }
        if points.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::Config {
                field: "range",
                reason: "grid points must be positive and finite".to_string(),
            });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_range(lo: f64, hi: f64, points: usize) -> Result<()> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Config {
            field: "range",
            reason: format!("need 0 < lo < hi, got [{lo}, {hi}]"),
        });
    }
    if points < 2 {
        return Err(Error::Config {
            field: "resolution",
            reason: format!("need at least 2 grid points, got {points}"),
        });
    }
    Ok(())
}

/// Density values on `x × y`, row-major with one row per x value.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub(crate) fn evaluate(x: &GridAxis, y: &GridAxis, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(x.len() * y.len());
        for &xi in x.points() {
            for &yj in y.points() {
                values.push(f(xi, yj));
            }
        }
        Self {
            x: x.points().to_vec(),
            y: y.points().to_vec(),
            values,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.y.len() + j]
    }
}
