use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::helmholtz::NonlocalOperator;
use crate::params::Parameters;
use crate::state::State;

use super::rhs::evaluate;
use super::SolverConfig;

const SPEED_FLOOR: f64 = 1e-12;

/// A Lagrangian slope tracer: position `q` on a characteristic and the slope `g = u_x(t, q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Tracer {
    pub q: f64,
    pub g: f64,
}

/// Full integration vector: fields plus tracers.
#[derive(Clone, Debug)]
pub(crate) struct Vector {
    pub u: Vec<f64>,
    pub rho: Option<Vec<f64>>,
    pub tracers: Vec<Tracer>,
}

impl Vector {
    pub fn from_state(state: &State, tracers: Vec<Tracer>) -> Self {
        Self {
            u: state.u.values().to_vec(),
            rho: state.rho_tilde.as_ref().map(|r| r.values().to_vec()),
            tracers,
        }
    }

    pub fn to_state(&self, grid: &std::sync::Arc<Grid>, time: f64) -> State {
        State {
            time,
            u: Field::from_raw(grid, self.u.clone()),
            rho_tilde: self.rho.as_ref().map(|r| Field::from_raw(grid, r.clone())),
        }
    }

    fn is_finite(&self) -> bool {
        self.u.iter().all(|v| v.is_finite())
            && self.rho.as_ref().is_none_or(|r| r.iter().all(|v| v.is_finite()))
            && self.tracers.iter().all(|t| t.q.is_finite() && t.g.is_finite())
    }

    /// `self + h * d`
    fn offset(&self, d: &Vector, h: f64) -> Vector {
        let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + h * y).collect::<Vec<_>>();
        Vector {
            u: add(&self.u, &d.u),
            rho: match (&self.rho, &d.rho) {
                (Some(a), Some(b)) => Some(add(a, b)),
                _ => None,
            },
            tracers: self
                .tracers
                .iter()
                .zip(&d.tracers)
                .map(|(t, dt)| Tracer {
                    q: t.q + h * dt.q,
                    g: t.g + h * dt.g,
                })
                .collect(),
        }
    }
}

/// Time derivative of the full vector. Tracers follow `q' = u(q) + lambda` and
/// `g' = -g^2/2 + G(q)/alpha^2 - (p * F)(q)/alpha^2`, where `F` is the nonlocal
/// flux and `G = F - alpha^2 u_x^2 / 2`.
pub(crate) fn tendency(op: &NonlocalOperator, v: &Vector) -> Vector {
    let e = evaluate(op, &v.u, v.rho.as_deref());
    let tracers = if v.tracers.is_empty() {
        Vec::new()
    } else {
        let grid = op.grid();
        let params = op.params();
        let a2 = params.alpha() * params.alpha();
        let (k, lambda) = (params.k(), params.lambda());
        v.tracers
            .iter()
            .map(|t| {
                let u = grid.interpolate(&e.u_hat, t.q);
                let mut local = u * u + 2.0 * k * u;
                if let Some(rho_hat) = &e.rho_hat {
                    let r = grid.interpolate(rho_hat, t.q);
                    local += 0.5 * r * r + r;
                }
                let smoothed = grid.interpolate(&e.smoothed_flux_hat, t.q);
                Tracer {
                    q: u + lambda,
                    g: -0.5 * t.g * t.g + (local - smoothed) / a2,
                }
            })
            .collect()
    };
    Vector {
        u: e.du,
        rho: e.drho,
        tracers,
    }
}

pub(crate) fn rk4(op: &NonlocalOperator, y: &Vector, dt: f64) -> Result<Vector> {
    let check = |v: Vector| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("Runge-Kutta stage"))
        }
    };
    let k1 = check(tendency(op, y))?;
    let k2 = check(tendency(op, &y.offset(&k1, 0.5 * dt)))?;
    let k3 = check(tendency(op, &y.offset(&k2, 0.5 * dt)))?;
    let k4 = check(tendency(op, &y.offset(&k3, dt)))?;
    let combine = |a: f64, b1: f64, b2: f64, b3: f64, b4: f64| a + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    let fields = |a: &[f64], s1: &[f64], s2: &[f64], s3: &[f64], s4: &[f64]| {
        (0..a.len())
            .map(|j| combine(a[j], s1[j], s2[j], s3[j], s4[j]))
            .collect::<Vec<_>>()
    };
    let out = Vector {
        u: fields(&y.u, &k1.u, &k2.u, &k3.u, &k4.u),
        rho: y.rho.as_ref().map(|r| {
            fields(
                r,
                k1.rho.as_ref().unwrap(),
                k2.rho.as_ref().unwrap(),
                k3.rho.as_ref().unwrap(),
                k4.rho.as_ref().unwrap(),
            )
        }),
        tracers: (0..y.tracers.len())
            .map(|i| Tracer {
                q: combine(
                    y.tracers[i].q,
                    k1.tracers[i].q,
                    k2.tracers[i].q,
                    k3.tracers[i].q,
                    k4.tracers[i].q,
                ),
                g: combine(
                    y.tracers[i].g,
                    k1.tracers[i].g,
                    k2.tracers[i].g,
                    k3.tracers[i].g,
                    k4.tracers[i].g,
                ),
            })
            .collect(),
    };
    check(out)
}

/// Advances `state` by one classical Runge-Kutta step.
pub fn step_rk4(state: &State, dt: f64, op: &NonlocalOperator) -> Result<State> {
    if !(dt > 0.0) {
        return Err(Error::InvalidSolverConfig(format!(
            "step size must be positive, got {dt}"
        )));
    }
    let y = Vector::from_state(state, Vec::new());
    let next = rk4(op, &y, dt)?;
    Ok(next.to_state(state.u.grid(), state.time + dt))
}

/// CFL step on the transport speed, capped at the remaining horizon and by the
/// slope time scale `cfl / |min u_x|` of the grid slope.
pub fn adaptive_dt(state: &State, config: &SolverConfig, params: &Parameters) -> f64 {
    let min_slope = state.u.derivative().min();
    adaptive_dt_with_slope(state, config, params, min_slope)
}

/// [`adaptive_dt`] with an externally supplied minimum slope (e.g. from tracers).
pub fn adaptive_dt_with_slope(state: &State, config: &SolverConfig, params: &Parameters, min_slope: f64) -> f64 {
    let speed = (state.u.max_abs() + params.lambda().abs()).max(SPEED_FLOOR);
    let transport = config.cfl * state.u.grid().dx() / speed;
    let slope = config.cfl / (-min_slope).max(SPEED_FLOOR);
    let remaining = (config.t_max - state.time).max(0.0);
    transport.min(slope).min(remaining)
}
