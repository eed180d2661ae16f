//! Two-component system with a vacuum point: `rho_tilde0 = -e^{-x^2}` makes
//! `rho = 0` at the origin, where `u0 = -x e^{-x^2/2}` is steepest.

use dghlab::analysis::{check_criterion_dgh2, DEFAULT_RHO_TOL};
use dghlab::characteristics::advect;
use dghlab::evolution::{simulate, SolverConfig};
use dghlab::{Field, Grid, NonlocalOperator, Parameters, Preset, State};

fn main() -> dghlab::Result<()> {
    let params = Parameters::camassa_holm(1.0)?;
    let grid = Grid::new(20.0, 4096)?;
    let op = NonlocalOperator::new(&grid, &params);
    let u0 = Preset::gaussian_derivative(1.0).evaluate(&grid, &params)?;
    let rho0 = Field::from_fn(&grid, |x| -(-x * x).exp());

    let verdict = check_criterion_dgh2(&u0, &rho0, &params, DEFAULT_RHO_TOL)?;
    println!(
        "criterion holds = {}, time bound = {:?}",
        verdict.holds, verdict.time_bound
    );

    let state = State::two_component(0.0, u0, rho0)?;
    let (trajectory, report) = simulate(&state, &SolverConfig::with_t_max(5.0), &op)?;
    println!("trigger {:?} at t = {:?}", report.trigger, report.t_detect);

    for x0 in [0.0, 1.0] {
        let path = advect(&trajectory, &op, x0)?;
        let worst = path
            .points
            .iter()
            .filter_map(|p| p.rho_invariant_residual)
            .fold(0.0, |m: f64, r| m.max(r.abs()));
        println!("x0 = {x0}: largest (rho_tilde + 1) q_x residual {worst:.2e}");
    }
    Ok(())
}
