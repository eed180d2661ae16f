//! Conserved functionals and norms.

use crate::grid::Field;
use crate::params::Parameters;
use crate::state::State;

fn trapezoid(field: &Field, integrand: impl Fn(f64, f64) -> f64) -> f64 {
    let ux = field.derivative();
    field.grid().dx()
        * field
            .values()
            .iter()
            .zip(ux.values())
            .map(|(&u, &d)| integrand(u, d))
            .sum::<f64>()
}

/// `E = 1/2 int (u^2 + alpha^2 u_x^2)`, plus `1/2 int rho_tilde^2` for two-component states.
pub fn energy_e(state: &State, params: &Parameters) -> f64 {
    let a2 = params.alpha() * params.alpha();
    let mut e = 0.5 * trapezoid(&state.u, |u, d| u * u + a2 * d * d);
    if let Some(rho) = &state.rho_tilde {
        e += 0.5 * rho.values().iter().map(|r| r * r).sum::<f64>() * rho.grid().dx();
    }
    e
}

/// `F = 1/2 int (u^3 + alpha^2 u u_x^2 + c0 u^2 - gamma u_x^2)`.
///
/// For two-component states the density terms are `2 u rho_tilde + u rho_tilde^2`.
///
/// Products are evaluated on a grid refined by 2 so the cubic terms are
/// integrated without aliasing.
pub fn energy_f(state: &State, params: &Parameters) -> f64 {
    let grid = state.u.grid();
    let a2 = params.alpha() * params.alpha();
    let (c0, gamma) = (params.c0(), params.gamma());
    let ux = state.u.derivative();
    let u_fine = grid.upsample(state.u.values(), 2);
    let ux_fine = grid.upsample(ux.values(), 2);
    let rho_fine = state.rho_tilde.as_ref().map(|r| grid.upsample(r.values(), 2));
    let h = grid.dx() / 2.0;
    let mut total = 0.0;
    for j in 0..u_fine.len() {
        let (u, d) = (u_fine[j], ux_fine[j]);
        let mut v = u * u * u + a2 * u * d * d + c0 * u * u - gamma * d * d;
        if let Some(r) = &rho_fine {
            let r = r[j];
            v += u * r * r + 2.0 * u * r;
        }
        total += v;
    }
    0.5 * h * total
}

/// `||u||_{H^1_alpha} = sqrt(int u^2 + alpha^2 u_x^2)`.
pub fn h_alpha_norm(u: &Field, params: &Parameters) -> f64 {
    let a2 = params.alpha() * params.alpha();
    trapezoid(u, |v, d| v * v + a2 * d * d).sqrt()
}

pub fn l2_norm(f: &Field) -> f64 {
    (f.values().iter().map(|v| v * v).sum::<f64>() * f.grid().dx()).sqrt()
}
