//! Right-hand sides of the nonlocal transport forms.
//!
//! One component:
//!   u_t = -(u + lambda) u_x - d_x p * (alpha^2/2 u_x^2 + u^2 + 2k u)
//! Two components:
//!   u_t   = -(u + lambda) u_x - d_x p * (alpha^2/2 u_x^2 + u^2 + 2k u + rho^2/2 + rho)
//!   rho_t = -u rho_x - u_x rho - u_x
//!
//! Every product is formed from 2/3-truncated inputs and the resulting
//! tendency is truncated again, so quadratic aliasing never reaches the
//! retained band.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::helmholtz::NonlocalOperator;
use crate::state::State;

/// Tendencies plus the spectra the slope tracers need.
pub(crate) struct Evaluation {
    pub du: Vec<f64>,
    pub drho: Option<Vec<f64>>,
    pub u_hat: Vec<Complex64>,
    pub rho_hat: Option<Vec<Complex64>>,
    /// Spectrum of `p * F` with `F` the full nonlocal flux.
    pub smoothed_flux_hat: Vec<Complex64>,
}

fn filtered(grid: &Grid, values: &[f64]) -> (Vec<Complex64>, Vec<f64>, Vec<f64>) {
    let mut hat = grid.spectrum(values);
    grid.dealias(&mut hat);
    let deriv = grid.synthesize(grid.differentiate_spectrum(&hat));
    let smooth = grid.synthesize(hat.clone());
    (hat, smooth, deriv)
}

pub(crate) fn evaluate(op: &NonlocalOperator, u: &[f64], rho: Option<&[f64]>) -> Evaluation {
    let grid = op.grid();
    let params = op.params();
    let half_a2 = 0.5 * params.alpha() * params.alpha();
    let two_k = 2.0 * params.k();
    let lambda = params.lambda();

    let (u_hat, u_f, ux) = filtered(grid, u);
    let rho_parts = rho.map(|r| filtered(grid, r));

    let mut flux: Vec<f64> = u_f
        .iter()
        .zip(&ux)
        .map(|(&v, &d)| half_a2 * d * d + v * v + two_k * v)
        .collect();
    if let Some((_, ref r, _)) = rho_parts {
        for (f, &rv) in flux.iter_mut().zip(r) {
            *f += 0.5 * rv * rv + rv;
        }
    }
    let transport: Vec<f64> = u_f.iter().zip(&ux).map(|(&v, &d)| (v + lambda) * d).collect();

    let flux_hat = grid.spectrum(&flux);
    let nonlocal = op.dq_spectrum(&flux_hat);
    let mut du_hat = grid.spectrum(&transport);
    for (c, n) in du_hat.iter_mut().zip(&nonlocal) {
        *c = -*c - n;
    }
    grid.dealias(&mut du_hat);
    let du = grid.synthesize(du_hat);

    let (drho, rho_hat) = match rho_parts {
        Some((r_hat, r_f, r_x)) => {
            let tendency: Vec<f64> = (0..u_f.len())
                .map(|j| -u_f[j] * r_x[j] - ux[j] * r_f[j] - ux[j])
                .collect();
            let mut t_hat = grid.spectrum(&tendency);
            grid.dealias(&mut t_hat);
            (Some(grid.synthesize(t_hat)), Some(r_hat))
        }
        None => (None, None),
    };

    Evaluation {
        du,
        drho,
        u_hat,
        rho_hat,
        smoothed_flux_hat: op.q_spectrum(&flux_hat),
    }
}

/// Tendency `u_t` of the one-component DGH equation.
pub fn dgh_rhs(u: &Field, op: &NonlocalOperator) -> Field {
    let e = evaluate(op, u.values(), None);
    Field::from_raw(op.grid(), e.du)
}

/// Tendencies `(u_t, rho_t)` of the two-component system.
pub fn dgh2_rhs(state: &State, op: &NonlocalOperator) -> Result<(Field, Field)> {
    let rho = state.rho_tilde.as_ref().ok_or(Error::MissingDensity)?;
    let e = evaluate(op, state.u.values(), Some(rho.values()));
    let drho = e.drho.expect("density tendency present when density given");
    Ok((Field::from_raw(op.grid(), e.du), Field::from_raw(op.grid(), drho)))
}
