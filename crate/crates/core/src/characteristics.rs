//! Particle paths `q_t = u(t, q) + lambda`, `q(0) = x0`, integrated over a
//! recorded trajectory, and the quantities evaluated along them.
//!
//! Between two records the velocity is reconstructed with cubic Hermite
//! interpolation in time (values and tendencies at both ends), and in space
//! with the spectral interpolant, so the path is fourth-order accurate in the
//! record spacing.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{evaluate, Trajectory};
use crate::grid::Grid;
use crate::helmholtz::NonlocalOperator;
use crate::params::Parameters;

/// Raw values sampled on a characteristic at one recorded time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathSample {
    pub t: f64,
    pub q: f64,
    pub q_x: f64,
    pub u: f64,
    pub u_x: f64,
    /// Momentum `m = u - alpha^2 u_xx` at `q`.
    pub m: f64,
    pub rho_tilde: Option<f64>,
}

/// A signed quantity stored as `sign * exp(log_magnitude)`, so exponential
/// weights cannot overflow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogSigned {
    pub sign: f64,
    pub log_magnitude: f64,
}

impl LogSigned {
    pub fn new(log_weight: f64, factor: f64) -> Self {
        Self {
            sign: if factor > 0.0 {
                1.0
            } else if factor < 0.0 {
                -1.0
            } else {
                0.0
            },
            log_magnitude: log_weight + factor.abs().ln(),
        }
    }

    /// The plain value, or `None` if it is not representable as a finite `f64`.
    pub fn value(&self) -> Option<f64> {
        if self.sign == 0.0 {
            return Some(0.0);
        }
        let v = self.sign * self.log_magnitude.exp();
        v.is_finite().then_some(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlainAB {
    pub a: f64,
    pub b: f64,
    /// `sqrt(-a b)` when `a b < 0`.
    pub h: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PathPoint {
    pub sample: PathSample,
    pub a_weighted: LogSigned,
    pub b_weighted: LogSigned,
    pub plain: PlainAB,
    pub momentum_residual: f64,
    pub rho_invariant_residual: Option<f64>,
}

impl PathPoint {
    pub fn t(&self) -> f64 {
        self.sample.t
    }

    /// Slope along the path, `g(t) = u_x(t, q(t, x0))`.
    pub fn g(&self) -> f64 {
        self.sample.u_x
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacteristicPath {
    pub seed: f64,
    pub points: Vec<PathPoint>,
    /// Set when the path came within `2 alpha` of the box edge and was cut short.
    pub boundary_warning: Option<String>,
}

impl CharacteristicPath {
    pub fn initial(&self) -> &PathPoint {
        &self.points[0]
    }

    /// Points with `t < t_end`.
    pub fn before(&self, t_end: f64) -> &[PathPoint] {
        let end = self
            .points
            .iter()
            .position(|p| p.t() >= t_end)
            .unwrap_or(self.points.len());
        &self.points[..end]
    }
}

/// `A = e^{q/alpha + (k - lambda) t/alpha} ((u + k)/alpha - u_x)` and
/// `B = e^{-q/alpha - (k - lambda) t/alpha} ((u + k)/alpha + u_x)`.
pub fn weighted_ab(s: &PathSample, params: &Parameters) -> (LogSigned, LogSigned) {
    let alpha = params.alpha();
    let exponent = s.q / alpha + (params.k() - params.lambda()) * s.t / alpha;
    let plain = plain_ab(s, params);
    (LogSigned::new(exponent, plain.a), LogSigned::new(-exponent, plain.b))
}

/// `A = (u + k)/alpha - u_x`, `B = (u + k)/alpha + u_x`, and `h = sqrt(-A B)` when defined.
pub fn plain_ab(s: &PathSample, params: &Parameters) -> PlainAB {
    let shifted = (s.u + params.k()) / params.alpha();
    let a = shifted - s.u_x;
    let b = shifted + s.u_x;
    PlainAB {
        a,
        b,
        h: (a * b < 0.0).then(|| (-a * b).sqrt()),
    }
}

/// `(m0(x0) + k) - (m(t, q) + k) q_x^2`, which vanishes along exact solutions.
pub fn momentum_residual(s: &PathSample, seed: &PathSample, params: &Parameters) -> f64 {
    let k = params.k();
    (seed.m + k) - (s.m + k) * s.q_x * s.q_x
}

/// `(rho_tilde(t, q) + 1) q_x - (rho_tilde0(x0) + 1)`.
pub fn rho_invariant_residual(s: &PathSample, seed: &PathSample) -> Result<f64> {
    match (s.rho_tilde, seed.rho_tilde) {
        (Some(r), Some(r0)) => Ok((r + 1.0) * s.q_x - (r0 + 1.0)),
        _ => Err(Error::MissingDensity),
    }
}

/// Spectra needed to reconstruct the solution around one record.
struct Snapshot {
    t: f64,
    u: Vec<Complex64>,
    u_t: Vec<Complex64>,
    rho: Option<Vec<Complex64>>,
}

impl Snapshot {
    fn new(op: &NonlocalOperator, state: &crate::state::State) -> Self {
        let grid = op.grid();
        let rho = state.rho_tilde.as_ref().map(|r| r.values());
        let e = evaluate(op, state.u.values(), rho);
        Self {
            t: state.time,
            u: grid.spectrum(state.u.values()),
            u_t: grid.spectrum(&e.du),
            rho: state.rho_tilde.as_ref().map(|r| grid.spectrum(r.values())),
        }
    }
}

/// Velocity and slope spectra at a point in time inside a record interval.
struct Slice {
    u: Vec<Complex64>,
    u_x: Vec<Complex64>,
}

impl Slice {
    fn new(grid: &Grid, u: Vec<Complex64>) -> Self {
        let u_x = grid.differentiate_spectrum(&u);
        Self { u, u_x }
    }

    fn velocity(&self, grid: &Grid, x: f64) -> (f64, f64) {
        (grid.interpolate(&self.u, x), grid.interpolate(&self.u_x, x))
    }
}

fn midpoint(a: &Snapshot, b: &Snapshot) -> Vec<Complex64> {
    let h = b.t - a.t;
    (0..a.u.len())
        .map(|j| 0.5 * (a.u[j] + b.u[j]) + (h / 8.0) * (a.u_t[j] - b.u_t[j]))
        .collect()
}

fn sample(op: &NonlocalOperator, snap: &Snapshot, q: f64, q_x: f64) -> PathSample {
    let grid = op.grid();
    let a2 = op.params().alpha() * op.params().alpha();
    let m_hat: Vec<Complex64> = snap
        .u
        .iter()
        .zip(grid.wavenumbers())
        .map(|(c, &xi)| c * (1.0 + a2 * xi * xi))
        .collect();
    PathSample {
        t: snap.t,
        q,
        q_x,
        u: grid.interpolate(&snap.u, q),
        u_x: grid.interpolate(&grid.differentiate_spectrum(&snap.u), q),
        m: grid.interpolate(&m_hat, q),
        rho_tilde: snap.rho.as_ref().map(|r| grid.interpolate(r, q)),
    }
}

fn point(s: PathSample, seed: &PathSample, params: &Parameters) -> PathPoint {
    let (a_weighted, b_weighted) = weighted_ab(&s, params);
    PathPoint {
        a_weighted,
        b_weighted,
        plain: plain_ab(&s, params),
        momentum_residual: momentum_residual(&s, seed, params),
        rho_invariant_residual: rho_invariant_residual(&s, seed).ok(),
        sample: s,
    }
}

/// Integrates the characteristic from `x0` through every record of `trajectory`
/// with RK4, carrying `q_x` via `q_x' = u_x(t, q) q_x`.
pub fn advect(trajectory: &Trajectory, op: &NonlocalOperator, x0: f64) -> Result<CharacteristicPath> {
    let grid = op.grid();
    let params = op.params();
    let (l, alpha) = (grid.half_length(), params.alpha());
    if !(x0 >= -l && x0 < l) {
        return Err(Error::Config(format!(
            "characteristic seed {x0} lies outside [-{l}, {l})"
        )));
    }
    let inside = |q: f64| q >= -l + 2.0 * alpha && q < l - 2.0 * alpha;
    let lambda = params.lambda();

    let records = trajectory.records();
    let mut current = Snapshot::new(op, &records[0].state);
    let seed = sample(op, &current, x0, 1.0);
    let mut points = vec![point(seed, &seed, params)];
    let mut boundary_warning = None;
    let (mut q, mut q_x) = (x0, 1.0);

    for record in &records[1..] {
        let next = Snapshot::new(op, &record.state);
        let h = next.t - current.t;
        let start = Slice::new(grid, current.u.clone());
        let mid = Slice::new(grid, midpoint(&current, &next));
        let end = Slice::new(grid, next.u.clone());
        let rate = |slice: &Slice, q: f64, q_x: f64| {
            let (u, u_x) = slice.velocity(grid, q);
            (u + lambda, u_x * q_x)
        };
        let k1 = rate(&start, q, q_x);
        let k2 = rate(&mid, q + 0.5 * h * k1.0, q_x + 0.5 * h * k1.1);
        let k3 = rate(&mid, q + 0.5 * h * k2.0, q_x + 0.5 * h * k2.1);
        let k4 = rate(&end, q + h * k3.0, q_x + h * k3.1);
        q += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        q_x += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !inside(q) || !q.is_finite() {
            boundary_warning = Some(format!(
                "characteristic from {x0} reached q = {q} near the box edge at t = {}; path truncated",
                next.t
            ));
            break;
        }
        points.push(point(sample(op, &next, q, q_x), &seed, params));
        current = next;
    }

    Ok(CharacteristicPath {
        seed: x0,
        points,
        boundary_warning,
    })
}
