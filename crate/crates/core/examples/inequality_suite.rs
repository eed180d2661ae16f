//! Runs the convolution and embedding inequality suite and the peakon
//! equality witness, the same checks as `dgh lemmas`.

use dghlab::analysis::{run_inequality_suite, SuiteConfig};
use dghlab::{Grid, Parameters};

fn main() -> dghlab::Result<()> {
    let grid = Grid::new(20.0, 2048)?;
    let params = Parameters::camassa_holm(1.0)?;
    let config = SuiteConfig {
        random_fields: 20,
        ..SuiteConfig::default()
    };
    let report = run_inequality_suite(&grid, &params, &config, 1)?;

    let mut worst: Vec<_> = report.rows.iter().collect();
    worst.sort_by(|a, b| a.min_gap.total_cmp(&b.min_gap));
    println!("{} gap fields, worst five:", report.rows.len());
    for r in worst.iter().take(5) {
        println!("  {:<22} {:<14} min gap {:>10.3e}", r.field, r.inequality, r.min_gap);
    }
    println!("peakon witness:");
    for w in &report.witness.rows {
        println!(
            "  N = {:>5}: |gap| {:.3e} / {:.3e}",
            w.n_points, w.minus_equality_gap, w.plus_equality_gap
        );
    }
    println!(
        "observed order {:?}, passed = {}",
        report.witness.observed_order, report.passed
    );
    Ok(())
}
