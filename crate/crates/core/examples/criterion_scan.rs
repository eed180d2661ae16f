//! Scans initial data for the local blowup criterion
//! `alpha u0'(x0) + |u0(x0) + k| < 0` and prints where it is met.

use dghlab::analysis::check_criterion_dgh;
use dghlab::{Grid, Parameters, Preset};

fn main() -> dghlab::Result<()> {
    let grid = Grid::new(20.0, 4096)?;
    let data = [
        ("gaussian_derivative(1)", Preset::gaussian_derivative(1.0)),
        ("gaussian_derivative(3)", Preset::gaussian_derivative(3.0)),
        ("gaussian_bump(1)", Preset::gaussian_bump(1.0)),
        ("gaussian_bump(-1)", Preset::gaussian_bump(-1.0)),
    ];
    for (alpha, gamma, c0) in [(1.0, 0.0, 0.0), (1.0, 1.0, 1.0), (0.5, -0.2, 0.8)] {
        let params = Parameters::new(alpha, gamma, c0, 1.0)?;
        println!(
            "alpha = {alpha}, gamma = {gamma}, c0 = {c0}  (k = {}, lambda = {})",
            params.k(),
            params.lambda()
        );
        for (name, preset) in &data {
            let v = check_criterion_dgh(&preset.evaluate(&grid, &params)?, &params);
            let bound = v.time_bound.map_or("-".to_string(), |t| format!("{t:.4}"));
            println!(
                "  {name:<24} holds={:<5} x0={:>8.4} margin={:>8.4} bound={bound}",
                v.holds, v.x0_best, v.margin
            );
        }
    }
    Ok(())
}
