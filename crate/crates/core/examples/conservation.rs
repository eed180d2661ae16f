//! Drift of the conserved functionals E and F over a smooth run.

use dghlab::evolution::{simulate, SolverConfig};
use dghlab::{Grid, NonlocalOperator, Parameters, Preset, State};

fn main() -> dghlab::Result<()> {
    let grid = Grid::new(20.0, 2048)?;
    for params in [Parameters::camassa_holm(1.0)?, Parameters::new(1.5, 0.4, 0.7, 1.0)?] {
        let op = NonlocalOperator::new(&grid, &params);
        let u0 = Preset::gaussian_bump(1.0).evaluate(&grid, &params)?;
        let (trajectory, _) = simulate(&State::single(0.0, u0), &SolverConfig::with_t_max(2.0), &op)?;
        let first = trajectory.initial().diagnostics;
        let drift = |pick: fn(&dghlab::evolution::Diagnostics) -> f64| {
            trajectory
                .records()
                .iter()
                .map(|r| ((pick(&r.diagnostics) - pick(&first)) / pick(&first)).abs())
                .fold(0.0, f64::max)
        };
        println!(
            "alpha={} gamma={} c0={}: E = {:.10}, drift {:.2e}; F = {:.10}, drift {:.2e}",
            params.alpha(),
            params.gamma(),
            params.c0(),
            first.energy_e,
            drift(|d| d.energy_e),
            first.energy_f,
            drift(|d| d.energy_f)
        );
    }
    Ok(())
}
