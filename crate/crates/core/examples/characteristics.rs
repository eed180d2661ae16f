//! Follows particle paths through a breaking run and prints the slope `g`,
//! the weighted functionals `A` (increasing) and `B` (decreasing), and `q_x`.

use dghlab::analysis::check_criterion_dgh;
use dghlab::characteristics::advect;
use dghlab::evolution::{simulate, SolverConfig, RESOLVED_TAIL};
use dghlab::{Grid, NonlocalOperator, Parameters, Preset, State};

fn main() -> dghlab::Result<()> {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0)?;
    let grid = Grid::new(20.0, 4096)?;
    let op = NonlocalOperator::new(&grid, &params);
    let u0 = Preset::gaussian_derivative(1.0).evaluate(&grid, &params)?;
    let x0 = check_criterion_dgh(&u0, &params).x0_best;
    let (trajectory, report) = simulate(&State::single(0.0, u0), &SolverConfig::with_t_max(5.0), &op)?;
    println!("t_detect = {:?}; following x0 = {x0:.4}", report.t_detect);

    let path = advect(&trajectory, &op, x0)?;
    let resolved = trajectory.resolved(RESOLVED_TAIL).len();
    println!("{:>8} {:>12} {:>12} {:>12} {:>10}", "t", "g", "A", "B", "q_x");
    for (i, p) in path.points.iter().enumerate().step_by(20) {
        let mark = if i < resolved { "" } else { "  (under-resolved)" };
        println!(
            "{:>8.4} {:>12.4e} {:>12.6} {:>12.6} {:>10.4e}{mark}",
            p.t(),
            p.g(),
            p.a_weighted.value().unwrap_or(f64::NAN),
            p.b_weighted.value().unwrap_or(f64::NAN),
            p.sample.q_x
        );
    }
    Ok(())
}
