//! Wave breaking for `u0 = -a x e^{-x^2/2}` in the Camassa-Holm limit.
//!
//! The criterion predicts breaking before `2/a`; the solver detects it when
//! the slope falls below -1e4.
//!
//! ```text
//! cargo run --release --example breaking_time
//! ```

use dghlab::analysis::check_criterion_dgh;
use dghlab::evolution::{simulate, SolverConfig};
use dghlab::{Grid, NonlocalOperator, Parameters, Preset, State};

fn main() -> dghlab::Result<()> {
    let params = Parameters::camassa_holm(1.0)?;
    let grid = Grid::new(20.0, 4096)?;
    let op = NonlocalOperator::new(&grid, &params);

    println!("{:>6} {:>12} {:>12} {:>8}", "a", "time_bound", "t_detect", "steps");
    for a in [0.5, 1.0, 2.0, 4.0] {
        let u0 = Preset::gaussian_derivative(a).evaluate(&grid, &params)?;
        let verdict = check_criterion_dgh(&u0, &params);
        let (_, report) = simulate(&State::single(0.0, u0), &SolverConfig::with_t_max(10.0), &op)?;
        println!(
            "{a:>6} {:>12.6} {:>12.6} {:>8}",
            verdict.time_bound.unwrap_or(f64::NAN),
            report.t_detect.unwrap_or(f64::NAN),
            report.steps
        );
    }
    Ok(())
}
