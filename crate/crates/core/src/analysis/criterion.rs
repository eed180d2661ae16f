//! Local-in-space blowup criteria and the explicit breaking-time bound.
//!
//! One component: breaking is guaranteed if some `x0` has
//! `alpha u0'(x0) + |u0(x0) + k| < 0`, and then
//! `T* < 2 / sqrt(u0'(x0)^2 - (u0(x0) + k)^2 / alpha^2)`.
//! Two components (`gamma = 0`): the same with `k = c0 / 2`, plus
//! `rho_tilde0(x0) = -1` at the same point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, Interpolant};
use crate::params::Parameters;

pub const DEFAULT_RHO_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub holds: bool,
    /// Grid node minimizing the margin.
    pub x0_node: f64,
    /// Refined minimizer (equal to `x0_node` when refinement does not improve).
    pub x0_best: f64,
    /// `alpha u0'(x0) + |u0(x0) + k|`; the criterion holds iff this is negative.
    pub margin: f64,
    pub u0_at_x0: f64,
    pub slope_at_x0: f64,
    pub k: f64,
    pub time_bound: Option<f64>,
    pub rho_condition_met: Option<bool>,
}

/// `2 / sqrt(u0'^2 - (u0 + k)^2 / alpha^2)`, defined when the criterion holds at the point.
pub fn breaking_time_bound(u0: f64, slope: f64, k: f64, alpha: f64) -> Option<f64> {
    let shifted = (u0 + k) / alpha;
    let h0_sq = slope * slope - shifted * shifted;
    (alpha * slope + (u0 + k).abs() < 0.0 && h0_sq > 0.0).then(|| 2.0 / h0_sq.sqrt())
}

fn margin_of(u: f64, slope: f64, k: f64, alpha: f64) -> f64 {
    alpha * slope + (u + k).abs()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f(x_node + delta)` over `delta` in `[-h, h]`.
fn golden_section(f: impl Fn(f64) -> f64, h: f64, iterations: usize) -> (f64, f64) {
    let (mut a, mut b) = (-h, h);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Scans all nodes for the minimizer of `alpha u0' + |u0 + k|`, then refines
/// over the two cells around it by golden-section search on the spectral interpolant.
pub fn check_criterion_dgh(u0: &Field, params: &Parameters) -> CriterionVerdict {
    let alpha = params.alpha();
    let k = params.k();
    let slope = u0.derivative();
    let grid = u0.grid();
    let margins: Vec<f64> = u0
        .values()
        .iter()
        .zip(slope.values())
        .map(|(&u, &d)| margin_of(u, d, k, alpha))
        .collect();
    let j = margins
        .iter()
        .enumerate()
        .fold(
            (0, f64::INFINITY),
            |(bj, bm), (j, &m)| if m < bm { (j, m) } else { (bj, bm) },
        )
        .0;
    let x_node = grid.node(j);
    let (mut x0, mut u_x0, mut s_x0, mut margin) = (x_node, u0.values()[j], slope.values()[j], margins[j]);

    let u_interp = Interpolant::new(u0);
    let s_interp = u_interp.derivative();
    let (delta, refined) = golden_section(
        |delta| margin_of(u_interp.eval(x_node + delta), s_interp.eval(x_node + delta), k, alpha),
        grid.dx(),
        60,
    );
    if refined < margin {
        x0 = x_node + delta;
        u_x0 = u_interp.eval(x0);
        s_x0 = s_interp.eval(x0);
        margin = margin_of(u_x0, s_x0, k, alpha);
    }

    let holds = margin < 0.0;
    CriterionVerdict {
        holds,
        x0_node: x_node,
        x0_best: x0,
        margin,
        u0_at_x0: u_x0,
        slope_at_x0: s_x0,
        k,
        time_bound: if holds {
            breaking_time_bound(u_x0, s_x0, k, alpha)
        } else {
            None
        },
        rho_condition_met: None,
    }
}

/// Two-component criterion. Candidates are the nodes with `|rho_tilde0 + 1| <= rho_tol`;
/// the margin is minimized over them with `k = c0 / 2`.
pub fn check_criterion_dgh2(u0: &Field, rho0: &Field, params: &Parameters, rho_tol: f64) -> Result<CriterionVerdict> {
    if params.gamma() != 0.0 {
        return Err(Error::NonzeroGamma(params.gamma()));
    }
    if !u0.same_grid(rho0) {
        return Err(Error::GridMismatch);
    }
    let alpha = params.alpha();
    let k = 0.5 * params.c0();
    let slope = u0.derivative();
    let grid = u0.grid();
    let best = |filter: &dyn Fn(usize) -> bool| {
        (0..grid.n_points())
            .filter(|&j| filter(j))
            .map(|j| (j, margin_of(u0.values()[j], slope.values()[j], k, alpha)))
            .fold(None, |acc: Option<(usize, f64)>, (j, m)| match acc {
                Some((_, bm)) if bm <= m => acc,
                _ => Some((j, m)),
            })
    };
    let candidate = best(&|j| (rho0.values()[j] + 1.0).abs() <= rho_tol);
    let rho_met = candidate.is_some();
    let (j, margin) = candidate.or_else(|| best(&|_| true)).expect("grid is nonempty");
    let (u, s) = (u0.values()[j], slope.values()[j]);
    let holds = rho_met && margin < 0.0;
    Ok(CriterionVerdict {
        holds,
        x0_node: grid.node(j),
        x0_best: grid.node(j),
        margin,
        u0_at_x0: u,
        slope_at_x0: s,
        k,
        time_bound: if holds {
            breaking_time_bound(u, s, k, alpha)
        } else {
            None
        },
        rho_condition_met: Some(rho_met),
    })
}
