//! Q-Q comparison of simulated log losses against the fitted marginals.

use product_beta::marginals::qq_points;
use product_beta::{dataset, fit_qq, Family, KernelModel, ScenarioModel};

fn main() -> product_beta::Result<()> {
    let data = dataset::table1();
    let marginals = vec![
        fit_qq(&data.column(0), Family::LogNormal)?,
        fit_qq(&data.column(1), Family::Frechet)?,
    ];
    let pb =
        ScenarioModel::build(data.clone(), marginals.clone(), 30.0)?.sample_batch(5_000, 4, 1)?;
    let kb = KernelModel::with_defaults(data.clone())?.sample_batch(5_000, 4, 1)?;

    for (k, fit) in marginals.iter().enumerate() {
        println!("{} ({}):", dataset::RISK_NAMES[k], fit.family());
        println!(
            "  {:<8} {:>12} {:>12} {:>12}",
            "source", "q 50%", "q 99%", "max"
        );
        for (label, samples) in [
            ("data", data.column(k)),
            ("m=30", pb.samples().column(k)),
            ("kernel", kb.samples().column(k)),
        ] {
            let pts = qq_points(&samples, fit)?;
            let at = |p: f64| pts[((p * pts.len() as f64) as usize).min(pts.len() - 1)];
            let last = pts[pts.len() - 1];
            println!(
                "  {label:<8} {:>12} {:>12} {:>12}",
                format!("{:.2}/{:.2}", at(0.5).0, at(0.5).1),
                format!("{:.2}/{:.2}", at(0.99).0, at(0.99).1),
                format!("{:.2}/{:.2}", last.0, last.1)
            );
        }
    }
    println!("\ncells are theoretical/empirical log quantiles");
    Ok(())
}
