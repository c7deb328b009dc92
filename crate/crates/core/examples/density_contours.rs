//! Scenario density on a grid for contour plots, with a coarse text rendering.

use product_beta::{dataset, fit_qq, Family, GridAxis, KernelModel, ScenarioModel};

fn render(title: &str, values: &[f64], nx: usize, ny: usize) {
    const SHADES: &[u8] = b" .:-=+*#%@";
    let peak = values.iter().cloned().fold(0.0, f64::max);
    println!("{title} (peak {peak:.3})");
    for j in (0..ny).rev() {
        let line: String = (0..nx)
            .map(|i| {
                let level = (values[i * ny + j] / peak).sqrt();
                SHADES[((level * 9.0).round() as usize).min(9)] as char
            })
            .collect();
        println!("  |{line}");
    }
    println!();
}

fn main() -> product_beta::Result<()> {
    let data = dataset::table1();
    let marginals = vec![
        fit_qq(&data.column(0), Family::LogNormal)?,
        fit_qq(&data.column(1), Family::Frechet)?,
    ];
    let x = GridAxis::log(0.05, 15.0, 60)?;
    let y = GridAxis::log(0.6, 3.5, 24)?;

    for m in [15.0, 50.0] {
        let model = ScenarioModel::build(data.clone(), marginals.clone(), m)?;
        let grid = model.density_grid(&x, &y)?;
        render(&format!("g, m={m}"), &grid.values, x.len(), y.len());
    }
    let grid = KernelModel::with_defaults(data)?.density_grid(&x, &y)?;
    render("kernel", &grid.values, x.len(), y.len());
    Ok(())
}
