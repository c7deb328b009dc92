use std::fmt::Write as _;
use std::path::PathBuf;

use crate::app::config::{
    AxisRange, RunConfig, DEFAULT_DIAGNOSTIC_SIMS, DEFAULT_GRID_TAIL_MASS, DEFAULT_SIMULATE_SIMS,
    DEFAULT_VAR_SIMS,
};
use crate::app::io::{load_csv, parse_csv, write_atomic, CsvDoc, Dataset};
use crate::batch::ScenarioBatch;
use crate::dataset::TABLE1_CSV;
use crate::error::{Error, Result};
use crate::grid::{DensityGrid, GridAxis};
use crate::kernel::KernelModel;
use crate::marginals::{fit_qq_with, qq_points_with, Family, MarginalModel};
use crate::risk::{scaled_ranks, RiskReport};
use crate::scenario::ScenarioModel;

/// File written by a command plus a human-readable summary for stdout.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub path: PathBuf,
    pub summary: String,
}

/// Input table with fitted marginals.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub dataset: Dataset,
    pub marginals: Vec<MarginalModel>,
}

const BUNDLED_FAMILIES: [Family; 2] = [Family::LogNormal, Family::Frechet];

pub fn prepare(config: &RunConfig) -> Result<Prepared> {
    config.validate()?;
    let (dataset, bundled) = match &config.input {
        Some(path) => (load_csv(path)?, false),
        None => (parse_csv(TABLE1_CSV)?, true),
    };
    for (col, _) in &config.families {
        if !(0..dataset.names.len()).any(|k| col.matches(k, &dataset.names[k])) {
            return Err(Error::Config {
                field: "family",
                reason: format!("no column {col} in the input"),
            });
        }
    }
    let mut marginals = Vec::with_capacity(dataset.names.len());
    for (k, name) in dataset.names.iter().enumerate() {
        let default = if bundled {
            BUNDLED_FAMILIES[k]
        } else {
            Family::LogNormal
        };
        let family = config.family_for(k, name, default);
        let fitted =
            fit_qq_with(&dataset.data.column(k), family, config.plotting).map_err(|e| {
                Error::Column {
                    column: name.clone(),
                    source: Box::new(e),
                }
            })?;
        marginals.push(fitted);
    }
    Ok(Prepared { dataset, marginals })
}

impl Prepared {
    pub fn scenario_model(&self, m: f64) -> Result<ScenarioModel> {
        ScenarioModel::build(self.dataset.data.clone(), self.marginals.clone(), m)
    }

    pub fn kernel_model(&self, config: &RunConfig) -> Result<KernelModel> {
        KernelModel::new(
            self.dataset.data.clone(),
            config.kernel_sigma,
            config.kernel_alpha,
        )
    }

    /// Batch from the first `m`, or from the kernel baseline if selected.
    fn single_batch(&self, config: &RunConfig, count: usize) -> Result<ScenarioBatch> {
        if config.use_kernel {
            self.kernel_model(config)?
                .sample_batch(count, config.seed, config.workers)
        } else {
            self.scenario_model(config.m_values[0])?.sample_batch(
                count,
                config.seed,
                config.workers,
            )
        }
    }

    /// One batch per `m`, then the kernel baseline when enabled and d = 2.
    fn all_batches(&self, config: &RunConfig, count: usize) -> Result<Vec<ScenarioBatch>> {
        let mut out = Vec::new();
        for &m in &config.m_values {
            out.push(
                self.scenario_model(m)?
                    .sample_batch(count, config.seed, config.workers)?,
            );
        }
        if config.include_kernel && self.dataset.data.cols() == 2 {
            out.push(self.kernel_model(config)?.sample_batch(
                count,
                config.seed,
                config.workers,
            )?);
        }
        Ok(out)
    }
}

fn run_meta(doc: &mut CsvDoc, config: &RunConfig, sims: usize) {
    doc.meta("seed", config.seed);
    doc.meta("workers", config.workers);
    doc.meta("sims", sims);
}

fn marginal_meta(doc: &mut CsvDoc, prepared: &Prepared) {
    for (name, mm) in prepared.dataset.names.iter().zip(&prepared.marginals) {
        doc.meta(
            &format!("marginal {name}"),
            format!("{} mu={} sigma={}", mm.family(), mm.mu(), mm.sigma()),
        );
    }
}

fn batch_meta(doc: &mut CsvDoc, batch: &ScenarioBatch) {
    doc.meta("model", batch.model().label());
    if let crate::batch::ModelDescriptor::Kernel { sigma, alpha } = batch.model() {
        doc.meta("kernel-sigma", sigma);
        doc.meta("kernel-alpha", alpha);
    }
}

fn output(config: &RunConfig, file: &str, doc: CsvDoc, summary: String) -> Result<CommandOutput> {
    let path = config.out_dir.join(file);
    write_atomic(&path, &doc.finish())?;
    Ok(CommandOutput { path, summary })
}

pub fn cmd_fit(config: &RunConfig) -> Result<CommandOutput> {
    let prepared = prepare(config)?;
    let mut doc = CsvDoc::new("fit");
    doc.meta("plotting-position", format!("{:?}", config.plotting));
    doc.row(["risk", "family", "mu", "sigma"]);
    let mut summary = format!(
        "{:<8} {:<10} {:>12} {:>12}\n",
        "risk", "family", "mu", "sigma"
    );
    for (name, mm) in prepared.dataset.names.iter().zip(&prepared.marginals) {
        doc.row([
            name.clone(),
            mm.family().to_string(),
            mm.mu().to_string(),
            mm.sigma().to_string(),
        ]);
        let _ = writeln!(
            summary,
            "{:<8} {:<10} {:>12.6} {:>12.6}",
            name,
            mm.family().to_string(),
            mm.mu(),
            mm.sigma()
        );
    }
    output(config, "marginals.csv", doc, summary)
}

pub fn cmd_var(config: &RunConfig) -> Result<CommandOutput> {
    let prepared = prepare(config)?;
    let sims = config.sims_or(DEFAULT_VAR_SIMS);
    let batches = prepared.all_batches(config, sims)?;
    let reports = batches
        .iter()
        .map(|b| RiskReport::from_batch(b, &config.alpha_levels))
        .collect::<Result<Vec<_>>>()?;

    let mut doc = CsvDoc::new("var");
    run_meta(&mut doc, config, sims);
    marginal_meta(&mut doc, &prepared);
    if batches.iter().any(|b| b.model().label() == "kernel") {
        doc.meta("kernel-sigma", config.kernel_sigma);
        doc.meta("kernel-alpha", config.kernel_alpha);
    }
    let labels: Vec<String> = reports.iter().map(|r| r.model.label()).collect();
    doc.row(
        ["measure".to_string(), "alpha".to_string()]
            .into_iter()
            .chain(labels.iter().cloned()),
    );

    let mut summary = format!("{:<10}", "measure");
    for l in &labels {
        let _ = write!(summary, " {l:>10}");
    }
    summary.push('\n');
    for (measure, pick) in [("VaR", 0usize), ("ES", 1usize)] {
        for (j, &alpha) in config.alpha_levels.iter().enumerate() {
            let values: Vec<f64> = reports
                .iter()
                .map(|r| {
                    if pick == 0 {
                        r.var_estimates[j]
                    } else {
                        r.es_estimates[j]
                    }
                })
                .collect();
            doc.row(
                [measure.to_string(), alpha.to_string()]
                    .into_iter()
                    .chain(values.iter().map(f64::to_string)),
            );
            let _ = write!(summary, "{:<10}", format!("{measure} {alpha}"));
            for v in &values {
                let _ = write!(summary, " {v:>10.3}");
            }
            summary.push('\n');
        }
    }
    output(config, "var.csv", doc, summary)
}

pub fn cmd_simulate(config: &RunConfig) -> Result<CommandOutput> {
    let prepared = prepare(config)?;
    let sims = config.sims_or(DEFAULT_SIMULATE_SIMS);
    let batch = prepared.single_batch(config, sims)?;
    let mut doc = CsvDoc::new("simulate");
    run_meta(&mut doc, config, sims);
    batch_meta(&mut doc, &batch);
    marginal_meta(&mut doc, &prepared);
    doc.row(prepared.dataset.names.iter());
    for row in batch.samples().iter_rows() {
        doc.row(row.iter());
    }
    let summary = format!("{} scenarios from {}\n", batch.len(), batch.model().label());
    output(config, "scenarios.csv", doc, summary)
}

fn axis(range: AxisRange, points: usize, log: bool) -> Result<GridAxis> {
    if log {
        GridAxis::log(range.lo, range.hi, points)
    } else {
        GridAxis::linear(range.lo, range.hi, points)
    }
}

fn default_range(marginal: &MarginalModel) -> Result<AxisRange> {
    let tail = DEFAULT_GRID_TAIL_MASS / 2.0;
    Ok(AxisRange {
        lo: marginal.quantile(tail)?,
        hi: marginal.quantile(1.0 - tail)?,
    })
}

pub fn cmd_density_grid(config: &RunConfig) -> Result<CommandOutput> {
    let prepared = prepare(config)?;
    if prepared.dataset.data.cols() != 2 {
        return Err(Error::Dimension(format!(
            "density grid needs two risks, got {}",
            prepared.dataset.data.cols()
        )));
    }
    let g = &config.grid;
    let xr = match g.x_range {
        Some(r) => r,
        None => default_range(&prepared.marginals[0])?,
    };
    let yr = match g.y_range {
        Some(r) => r,
        None => default_range(&prepared.marginals[1])?,
    };
    let x = axis(xr, g.resolution, g.log_spacing)?;
    let y = axis(yr, g.resolution, g.log_spacing)?;
    let (grid, label): (DensityGrid, String) = if config.use_kernel {
        let model = prepared.kernel_model(config)?;
        (model.density_grid(&x, &y)?, model.descriptor().label())
    } else {
        let model = prepared.scenario_model(config.m_values[0])?;
        (model.density_grid(&x, &y)?, model.descriptor().label())
    };

    let mut doc = CsvDoc::new("density-grid");
    doc.meta("model", &label);
    if config.use_kernel {
        doc.meta("kernel-sigma", config.kernel_sigma);
        doc.meta("kernel-alpha", config.kernel_alpha);
    }
    marginal_meta(&mut doc, &prepared);
    doc.meta("spacing", if g.log_spacing { "log" } else { "linear" });
    doc.meta("x-range", format!("{}:{}", xr.lo, xr.hi));
    doc.meta("y-range", format!("{}:{}", yr.lo, yr.hi));
    doc.row(std::iter::once("x\\y".to_string()).chain(grid.y.iter().map(f64::to_string)));
    for (i, xi) in grid.x.iter().enumerate() {
        let values = (0..grid.y.len()).map(|j| grid.at(i, j).to_string());
        doc.row(std::iter::once(xi.to_string()).chain(values));
    }
    let peak = grid.values.iter().cloned().fold(0.0, f64::max);
    let summary = format!(
        "{}x{} grid of {label} density, peak {peak:.4}\n",
        grid.x.len(),
        grid.y.len()
    );
    output(config, "density_grid.csv", doc, summary)
}

pub fn cmd_copula(config: &RunConfig) -> Result<CommandOutput> {
    let prepared = prepare(config)?;
    let sims = config.sims_or(DEFAULT_DIAGNOSTIC_SIMS);
    let batch = prepared.single_batch(config, sims)?;
    let simulated = scaled_ranks(batch.samples())?;
    let observed = scaled_ranks(&prepared.dataset.data)?;

    let mut doc = CsvDoc::new("copula");
    run_meta(&mut doc, config, sims);
    batch_meta(&mut doc, &batch);
    doc.meta("rank-scaling", "rank/(N+1)");
    doc.row(std::iter::once("block").chain(prepared.dataset.names.iter().map(String::as_str)));
    for (block, ranks) in [("simulated", &simulated), ("observed", &observed)] {
        for row in ranks.iter_rows() {
            doc.row(std::iter::once(block.to_string()).chain(row.iter().map(f64::to_string)));
        }
    }
    let summary = format!(
        "{} simulated and {} observed rank pairs from {}\n",
        simulated.rows(),
        observed.rows(),
        batch.model().label()
    );
    output(config, "copula.csv", doc, summary)
}

pub fn cmd_qq(config: &RunConfig) -> Result<CommandOutput> {
    let prepared = prepare(config)?;
    let sims = config.sims_or(DEFAULT_DIAGNOSTIC_SIMS);
    let batches = prepared.all_batches(config, sims)?;

    let mut doc = CsvDoc::new("qq");
    run_meta(&mut doc, config, sims);
    marginal_meta(&mut doc, &prepared);
    doc.meta("scale", "log");
    doc.row(["source", "risk", "theoretical", "empirical"]);
    let mut sources: Vec<(String, &crate::matrix::LossMatrix)> =
        vec![("observed".to_string(), &prepared.dataset.data)];
    for b in &batches {
        sources.push((b.model().label(), b.samples()));
    }
    let mut summary = String::new();
    for (label, data) in &sources {
        let mut worst: f64 = 0.0;
        for (k, (name, mm)) in prepared
            .dataset
            .names
            .iter()
            .zip(&prepared.marginals)
            .enumerate()
        {
            for (q, e) in qq_points_with(&data.column(k), mm, config.plotting)? {
                worst = worst.max((q - e).abs());
                doc.row([label.clone(), name.clone(), q.to_string(), e.to_string()]);
            }
        }
        let _ = writeln!(summary, "{label:<10} max |log deviation| {worst:.4}");
    }
    output(config, "qq.csv", doc, summary)
}
