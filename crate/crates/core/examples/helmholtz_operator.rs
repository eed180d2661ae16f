//! The Green kernel `p(x) = e^{-|x|/alpha} / (2 alpha)` and the operators
//! `Q = (1 - alpha^2 d_xx)^{-1}` and `d_x Q` built from it.

use dghlab::helmholtz::{green_kernel, green_kernel_mass};
use dghlab::{Field, Grid, NonlocalOperator, Parameters};

fn main() -> dghlab::Result<()> {
    let params = Parameters::camassa_holm(1.0)?;
    println!(
        "p(0) = {}, mass over [-20, 20] = {:.12}",
        green_kernel(0.0, &params),
        green_kernel_mass(&params, 20.0, 10_000)
    );

    let grid = Grid::new(20.0, 1024)?;
    let op = NonlocalOperator::new(&grid, &params);
    let f = Field::from_fn(&grid, |x| (-x * x).exp());
    let q = op.apply_q(&f);

    // p * f - f = alpha^2 (p * f)''
    let residual = q
        .zip_map(&f, |a, b| a - b)?
        .zip_map(&q.second_derivative(), |a, b| a - params.alpha().powi(2) * b)?
        .max_abs();
    println!("Helmholtz residual {residual:.2e}");

    let (minus, plus) = op.one_sided_convolutions(&f);
    println!(
        "integrals: f {:.6}, Qf {:.6}, minus {:.6}, plus {:.6}",
        f.integral(),
        q.integral(),
        minus.integral(),
        plus.integral()
    );
    for x in [-2.0, 0.0, 2.0] {
        println!(
            "x = {x:>4}: Qf = {:.6}, dQf = {:.6}",
            q.interpolate(x),
            op.apply_dq(&f).interpolate(x)
        );
    }
    Ok(())
}
