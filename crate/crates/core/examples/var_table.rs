//! VaR and expected shortfall of the aggregate loss across m and the kernel baseline.

use product_beta::risk::DEFAULT_ALPHA_LEVELS;
use product_beta::{dataset, fit_qq, Family, KernelModel, RiskReport, ScenarioModel};

const SIMS: usize = 100_000;
const SEED: u64 = 1;

fn main() -> product_beta::Result<()> {
    let data = dataset::table1();
    let marginals = vec![
        fit_qq(&data.column(0), Family::LogNormal)?,
        fit_qq(&data.column(1), Family::Frechet)?,
    ];

    let mut reports = Vec::new();
    for m in [15.0, 20.0, 25.0, 30.0, 50.0, 100.0, 1e4] {
        let model = ScenarioModel::build(data.clone(), marginals.clone(), m)?;
        reports.push(RiskReport::from_batch(
            &model.sample_batch(SIMS, SEED, 4)?,
            &DEFAULT_ALPHA_LEVELS,
        )?);
    }
    let kernel = KernelModel::with_defaults(data)?;
    reports.push(RiskReport::from_batch(
        &kernel.sample_batch(SIMS, SEED, 4)?,
        &DEFAULT_ALPHA_LEVELS,
    )?);

    print!("{:<10}", "");
    for r in &reports {
        print!(" {:>9}", r.model.label());
    }
    println!();
    for (j, alpha) in DEFAULT_ALPHA_LEVELS.iter().enumerate() {
        print!("{:<10}", format!("VaR {alpha}"));
        for r in &reports {
            print!(" {:>9.3}", r.var_estimates[j]);
        }
        println!();
    }
    for (j, alpha) in DEFAULT_ALPHA_LEVELS.iter().enumerate() {
        print!("{:<10}", format!("ES {alpha}"));
        for r in &reports {
            print!(" {:>9.3}", r.es_estimates[j]);
        }
        println!();
    }
    Ok(())
}
