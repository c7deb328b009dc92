//! The mode-matched lognormal x Fréchet kernel density and its exact sampler.

use product_beta::kernel::{k1_density, k2_density};
use product_beta::{dataset, KernelModel, RandomStream};

fn main() -> product_beta::Result<()> {
    let model = KernelModel::with_defaults(dataset::table1())?;
    let (sigma, alpha) = (model.sigma(), model.alpha());

    // each kernel peaks at its observation
    let z = 2.0;
    for x in [1.8, 1.9, 2.0, 2.1, 2.2] {
        println!(
            "x={x:.1}  k1={:.5}  k2={:.5}",
            k1_density(x, z, sigma)?,
            k2_density(x, z, alpha)?
        );
    }

    println!(
        "\ndensity at (1.0, 1.0): {:.5}",
        model.kernel_density(1.0, 1.0)?
    );
    println!(
        "density at (9.951, 2.679): {:.5}",
        model.kernel_density(9.951, 2.679)?
    );

    let mut stream = RandomStream::new(11);
    let draws: Vec<(f64, f64)> = (0..50_000)
        .map(|_| model.sample_kernel(&mut stream))
        .collect();
    let max_x = draws.iter().map(|d| d.0).fold(0.0, f64::max);
    let max_y = draws.iter().map(|d| d.1).fold(0.0, f64::max);
    println!("\n50000 draws: max X1 {max_x:.3}, max X2 {max_y:.3}");
    Ok(())
}
