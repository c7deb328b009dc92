use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::kernel::{DEFAULT_ALPHA, DEFAULT_SIGMA};
use crate::marginals::{Family, PlottingPosition};
use crate::risk::DEFAULT_ALPHA_LEVELS;

pub const DEFAULT_M_VALUES: [f64; 6] = [15.0, 20.0, 25.0, 30.0, 50.0, 100.0];
pub const DEFAULT_VAR_SIMS: usize = 100_000;
pub const DEFAULT_SIMULATE_SIMS: usize = 10_000;
pub const DEFAULT_DIAGNOSTIC_SIMS: usize = 5_000;
pub const DEFAULT_GRID_RESOLUTION: usize = 100;
/// Marginal mass left outside each default grid axis, split over both tails.
pub const DEFAULT_GRID_TAIL_MASS: f64 = 1e-4;

/// How a risk column is referred to in a family override.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    /// 1-based column position
    Index(usize),
}

impl ColumnRef {
    pub fn parse(s: &str) -> Self {
        match s.trim().parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.trim().to_string()),
        }
    }

    pub(crate) fn matches(&self, position: usize, name: &str) -> bool {
        match self {
            ColumnRef::Name(n) => n == name,
            ColumnRef::Index(i) => *i == position + 1,
        }
    }
}

impl std::fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnRef::Name(n) => write!(f, "{n:?}"),
            ColumnRef::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
}

impl std::str::FromStr for AxisRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config {
            field: "range",
            reason: format!("expected LO:HI with 0 < LO < HI, got {s:?}"),
        };
        let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(bad());
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub x_range: Option<AxisRange>,
    pub y_range: Option<AxisRange>,
    pub resolution: usize,
    pub log_spacing: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            x_range: None,
            y_range: None,
            resolution: DEFAULT_GRID_RESOLUTION,
            log_spacing: false,
        }
    }
}

/// Settings shared by every pipeline command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `None` selects the bundled two-risk table.
    pub input: Option<PathBuf>,
    pub families: Vec<(ColumnRef, Family)>,
    pub m_values: Vec<f64>,
    pub kernel_sigma: f64,
    pub kernel_alpha: f64,
    /// Include the kernel baseline in multi-model commands (`var`, `qq`).
    pub include_kernel: bool,
    /// Use the kernel baseline instead of the product-beta model in
    /// single-model commands (`simulate`, `density-grid`, `copula`).
    pub use_kernel: bool,
    /// Overrides the per-command default simulation count.
    pub sims: Option<usize>,
    pub alpha_levels: Vec<f64>,
    pub seed: u64,
    pub workers: usize,
    pub out_dir: PathBuf,
    pub plotting: PlottingPosition,
    pub grid: GridConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            families: Vec::new(),
            m_values: DEFAULT_M_VALUES.to_vec(),
            kernel_sigma: DEFAULT_SIGMA,
            kernel_alpha: DEFAULT_ALPHA,
            include_kernel: true,
            use_kernel: false,
            sims: None,
            alpha_levels: DEFAULT_ALPHA_LEVELS.to_vec(),
            seed: 20_181_016,
            workers: 1,
            out_dir: PathBuf::from("out"),
            plotting: PlottingPosition::default(),
            grid: GridConfig::default(),
        }
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Config {
        field,
        reason: reason.into(),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() {
            return Err(invalid("m", "at least one value is required"));
        }
        if let Some(m) = self.m_values.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(invalid("m", format!("{m} is not a positive number")));
        }
        if !(self.kernel_sigma > 0.0 && self.kernel_sigma.is_finite()) {
            return Err(invalid(
                "kernel-sigma",
                format!("{} is not positive", self.kernel_sigma),
            ));
        }
        if !(self.kernel_alpha > 0.0 && self.kernel_alpha.is_finite()) {
            return Err(invalid(
                "kernel-alpha",
                format!("{} is not positive", self.kernel_alpha),
            ));
        }
        if self.sims == Some(0) {
            return Err(invalid("sims", "must be at least 1"));
        }
        if self.alpha_levels.is_empty() {
            return Err(invalid("alpha", "at least one risk level is required"));
        }
        if let Some(a) = self.alpha_levels.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(invalid("alpha", format!("{a} is outside (0, 1)")));
        }
        if self.workers == 0 {
            return Err(invalid("workers", "must be at least 1"));
        }
        if self.grid.resolution < 2 {
            return Err(invalid("resolution", "must be at least 2"));
        }
        Ok(())
    }

    pub fn sims_or(&self, default: usize) -> usize {
        self.sims.unwrap_or(default)
    }

    /// Family for column `position` named `name`: the last matching override,
    /// else `default`.
    pub fn family_for(&self, position: usize, name: &str, default: Family) -> Family {
        self.families
            .iter()
            .rev()
            .find(|(col, _)| col.matches(position, name))
            .map(|(_, f)| *f)
            .unwrap_or(default)
    }
}
