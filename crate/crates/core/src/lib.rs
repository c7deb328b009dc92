pub mod app;
pub mod batch;
pub mod dataset;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod marginals;
pub mod matrix;
pub mod risk;
pub mod rng;
pub mod scenario;
pub mod special;

#[cfg(test)]
mod oracle;

pub use batch::{ModelDescriptor, ScenarioBatch};
pub use error::{Error, Result};
pub use grid::{DensityGrid, GridAxis};
pub use kernel::KernelModel;
pub use marginals::{fit_qq, Family, MarginalModel, PlottingPosition};
pub use matrix::LossMatrix;
pub use risk::RiskReport;
pub use rng::RandomStream;
pub use scenario::ScenarioModel;
