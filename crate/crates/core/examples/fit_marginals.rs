//! Fit lognormal and Fréchet marginals to the bundled losses by Q-Q regression.

use product_beta::marginals::{fit_qq_with, PlottingPosition};
use product_beta::{dataset, Family};

fn main() -> product_beta::Result<()> {
    let data = dataset::table1();
    let families = [Family::LogNormal, Family::Frechet];

    println!(
        "{:<4} {:<10} {:<8} {:>10} {:>10}",
        "risk", "family", "plot", "mu", "sigma"
    );
    for (k, family) in families.into_iter().enumerate() {
        for positions in [PlottingPosition::Weibull, PlottingPosition::Hazen] {
            let fit = fit_qq_with(&data.column(k), family, positions)?;
            println!(
                "{:<4} {:<10} {:<8} {:>10.6} {:>10.6}",
                dataset::RISK_NAMES[k],
                family.to_string(),
                format!("{positions:?}"),
                fit.mu(),
                fit.sigma()
            );
        }
    }

    let fit = fit_qq_with(&data.column(1), Family::Frechet, PlottingPosition::Weibull)?;
    println!(
        "\nX2 quantiles: median {:.4}, 99.5% {:.4}",
        fit.quantile(0.5)?,
        fit.quantile(0.995)?
    );
    Ok(())
}
