//! Draw scenarios from the product-beta mixture and compare them with the data.

use product_beta::risk::aggregate_sums;
use product_beta::{dataset, fit_qq, Family, RandomStream, ScenarioModel};

fn main() -> product_beta::Result<()> {
    let data = dataset::table1();
    let marginals = vec![
        fit_qq(&data.column(0), Family::LogNormal)?,
        fit_qq(&data.column(1), Family::Frechet)?,
    ];
    let model = ScenarioModel::build(data.clone(), marginals, 30.0)?;

    // one scenario at a time, showing the chosen mixture component
    let mut stream = RandomStream::new(7);
    for _ in 0..5 {
        let (i, u) = model.sample_unit(&mut stream);
        println!(
            "component {:>2}  u = ({:.3}, {:.3})  data u = ({:.3}, {:.3})",
            i + 1,
            u[0],
            u[1],
            model.unit_data().get(i, 0),
            model.unit_data().get(i, 1)
        );
    }

    // a parallel batch; identical for a given seed and worker count
    let batch = model.sample_batch(10_000, 2018, 4)?;
    let sums = aggregate_sums(batch.samples())?;
    let mean = sums.iter().sum::<f64>() / sums.len() as f64;
    let max = sums.iter().cloned().fold(0.0, f64::max);
    let data_max = aggregate_sums(&data)?.into_iter().fold(0.0, f64::max);
    println!(
        "\n{} scenarios: mean sum {mean:.3}, max sum {max:.3} (data max {data_max:.3})",
        batch.len()
    );
    for row in batch.samples().iter_rows().take(5) {
        println!("  {:>8.4} {:>8.4}", row[0], row[1]);
    }
    Ok(())
}
