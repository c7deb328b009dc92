//! Scenario batches and the deterministic parallel batch runner.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::marginals::MarginalModel;
use crate::matrix::LossMatrix;
use crate::rng::RandomStream;

/// Which model produced a batch.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelDescriptor {
    ProductBeta {
        m: f64,
        marginals: Vec<MarginalModel>,
    },
    Kernel {
        sigma: f64,
        alpha: f64,
    },
}

impl ModelDescriptor {
    pub fn label(&self) -> String {
        match self {
            ModelDescriptor::ProductBeta { m, .. } => format!("m={m}"),
            ModelDescriptor::Kernel { .. } => "kernel".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioBatch {
    samples: LossMatrix,
    seed: u64,
    workers: usize,
    model: ModelDescriptor,
}

impl ScenarioBatch {
    pub fn samples(&self) -> &LossMatrix {
        &self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn model(&self) -> &ModelDescriptor {
        &self.model
    }

    pub fn len(&self) -> usize {
        self.samples.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.rows() == 0
    }

    pub fn dims(&self) -> usize {
        self.samples.cols()
    }
}

/// Number of scenarios assigned to `worker`: `count / workers`, with the
/// remainder spread over the lowest-numbered workers.
pub fn worker_share(count: usize, workers: usize, worker: usize) -> usize {
    count / workers + usize::from(worker < count % workers)
}

/// Runs `count` draws of a `dims`-dimensional sampler split across
/// `workers` streams derived from `seed`. Rows are concatenated in worker
/// order, so the result depends only on `(seed, workers)`.
pub(crate) fn run_batch<F>(
    count: usize,
    seed: u64,
    workers: usize,
    dims: usize,
    model: ModelDescriptor,
    sample: F,
) -> Result<ScenarioBatch>
where
    F: Fn(&mut RandomStream, &mut [f64]) + Sync,
{
    if count == 0 {
        return Err(Error::Config {
            field: "count",
            reason: "must be at least 1".to_string(),
        });
    }
    if workers == 0 {
        return Err(Error::Config {
            field: "workers",
            reason: "must be at least 1".to_string(),
        });
    }
    let chunks: Vec<Vec<f64>> = (0..workers)
        .into_par_iter()
        .map(|j| {
            let share = worker_share(count, workers, j);
            let mut stream = RandomStream::derive(seed, j as u64);
            let mut out = vec![0.0; share * dims];
            for row in out.chunks_exact_mut(dims) {
                sample(&mut stream, row);
            }
            out
        })
        .collect();
    let values = chunks.concat();
    Ok(ScenarioBatch {
        samples: LossMatrix::from_flat(count, dims, values)?,
        seed,
        workers,
        model,
    })
}
