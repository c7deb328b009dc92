use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use product_beta::app::{self, AxisRange, ColumnRef, GridConfig, RunConfig};
use product_beta::{Error, Family};

#[derive(Parser)]
#[command(
    name = "pbscen",
    version,
    about = "Product-beta mixture scenario generator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the marginals by Q-Q regression
    Fit(Common),
    /// Simulate loss scenarios
    Simulate(Common),
    /// VaR and ES of the aggregate loss for each m and the kernel baseline
    Var(Common),
    /// Evaluate the bivariate scenario density on a grid
    DensityGrid(Common),
    /// Scaled ranks of simulated and observed losses
    Copula(Common),
    /// Q-Q points of observed and simulated losses against the fitted marginals
    Qq(Common),
}

#[derive(Args)]
struct Common {
    /// Loss table CSV (header of risk names); defaults to the bundled table
    #[arg(long)]
    input: Option<PathBuf>,
    /// Marginal family per column, e.g. X2=frechet or 2=frechet
    #[arg(long, value_parser = parse_family)]
    family: Vec<(ColumnRef, Family)>,
    /// Mixture parameter m (repeatable)
    #[arg(long)]
    m: Vec<f64>,
    #[arg(long, default_value_t = product_beta::kernel::DEFAULT_SIGMA)]
    kernel_sigma: f64,
    #[arg(long, default_value_t = product_beta::kernel::DEFAULT_ALPHA)]
    kernel_alpha: f64,
    /// Use the kernel baseline (simulate, density-grid, copula)
    #[arg(long)]
    kernel: bool,
    /// Leave the kernel baseline out (var, qq)
    #[arg(long)]
    no_kernel: bool,
    /// Number of simulated scenarios
    #[arg(long)]
    sims: Option<usize>,
    /// Tail level (repeatable)
    #[arg(long)]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = RunConfig::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Grid x range LO:HI
    #[arg(long)]
    x_range: Option<AxisRange>,
    /// Grid y range LO:HI
    #[arg(long)]
    y_range: Option<AxisRange>,
    /// Grid points per axis
    #[arg(long, default_value_t = app::config::DEFAULT_GRID_RESOLUTION)]
    resolution: usize,
    /// Log-spaced grid axes
    #[arg(long)]
    log_grid: bool,
}

fn parse_family(s: &str) -> Result<(ColumnRef, Family), String> {
    let (col, fam) = s
        .split_once('=')
        .ok_or_else(|| format!("expected COLUMN=FAMILY, got {s:?}"))?;
    let family: Family = fam.parse().map_err(|e: Error| e.to_string())?;
    Ok((ColumnRef::parse(col), family))
}

impl Common {
    fn into_config(self) -> RunConfig {
        let defaults = RunConfig::default();
        RunConfig {
            input: self.input,
            families: self.family,
            m_values: if self.m.is_empty() {
                defaults.m_values
            } else {
                self.m
            },
            kernel_sigma: self.kernel_sigma,
            kernel_alpha: self.kernel_alpha,
            include_kernel: !self.no_kernel,
            use_kernel: self.kernel,
            sims: self.sims,
            alpha_levels: if self.alpha.is_empty() {
                defaults.alpha_levels
            } else {
                self.alpha
            },
            seed: self.seed,
            workers: self.workers,
            out_dir: self.out,
            plotting: defaults.plotting,
            grid: GridConfig {
                x_range: self.x_range,
                y_range: self.y_range,
                resolution: self.resolution,
                log_spacing: self.log_grid,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(c) => app::cmd_fit(&c.into_config()),
        Command::Simulate(c) => app::cmd_simulate(&c.into_config()),
        Command::Var(c) => app::cmd_var(&c.into_config()),
        Command::DensityGrid(c) => app::cmd_density_grid(&c.into_config()),
        Command::Copula(c) => app::cmd_copula(&c.into_config()),
        Command::Qq(c) => app::cmd_qq(&c.into_config()),
    };
    match result {
        Ok(out) => {
            print!("{}", out.summary);
            println!("wrote {}", out.path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pbscen: {e}");
            ExitCode::FAILURE
        }
    }
}
