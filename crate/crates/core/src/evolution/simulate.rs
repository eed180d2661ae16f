use crate::analysis::{energy_e, energy_f};
use crate::error::{Error, Result};
use crate::grid::Field;
use crate::helmholtz::NonlocalOperator;
use crate::state::State;

use super::stepper::{adaptive_dt_with_slope, rk4, Tracer, Vector};
use super::{BlowupReport, Diagnostics, Record, SolverConfig, Trajectory, Trigger};

/// Seeds tracers at the deepest negative local minima of the initial slope.
fn seed_tracers(u: &Field, count: usize) -> Vec<Tracer> {
    if count == 0 {
        return Vec::new();
    }
    let ux = u.derivative();
    let v = ux.values();
    let n = v.len();
    let mut minima: Vec<(usize, f64)> = (0..n)
        .filter(|&j| {
            let (l, r) = (v[(j + n - 1) % n], v[(j + 1) % n]);
            v[j] < 0.0 && v[j] <= l && v[j] < r
        })
        .map(|j| (j, v[j]))
        .collect();
    minima.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    minima
        .into_iter()
        .take(count)
        .map(|(j, g)| Tracer { q: u.grid().node(j), g })
        .collect()
}

fn spectral_tail(u: &Field) -> f64 {
    let grid = u.grid();
    let hat = u.spectrum();
    let n = grid.n_points();
    let cutoff = grid.dealias_cutoff();
    let lower = 2 * cutoff / 3;
    let mut peak: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for (j, c) in hat.iter().enumerate() {
        let index = j.min(n - j);
        let a = c.norm();
        peak = peak.max(a);
        if index > lower && index <= cutoff {
            tail = tail.max(a);
        }
    }
    if peak > 0.0 {
        tail / peak
    } else {
        0.0
    }
}

fn min_slope(u: &Field, tracers: &[Tracer]) -> (f64, f64) {
    let grid_min = u.derivative().min();
    let tracked = tracers.iter().map(|t| t.g).fold(f64::INFINITY, f64::min);
    (grid_min.min(tracked), grid_min)
}

fn record(state: State, tracers: &[Tracer], dt: f64, op: &NonlocalOperator) -> Record {
    let params = op.params();
    let (min_ux, grid_min_ux) = min_slope(&state.u, tracers);
    let diagnostics = Diagnostics {
        min_ux,
        grid_min_ux,
        max_abs_u: state.u.max_abs(),
        dt,
        energy_e: energy_e(&state, params),
        energy_f: energy_f(&state, params),
        spectral_tail: spectral_tail(&state.u),
    };
    Record { state, diagnostics }
}

/// Integrates from `initial` until `t_max`, a slope-threshold crossing, or a
/// step-size breakdown. Numerical breakdown is a result, not an error: it is
/// reported through [`BlowupReport::trigger`] with the last finite state kept.
pub fn simulate(initial: &State, config: &SolverConfig, op: &NonlocalOperator) -> Result<(Trajectory, BlowupReport)> {
    config.validate()?;
    if !initial.is_finite() {
        return Err(Error::NonFinite("initial datum"));
    }
    if let Some(rho) = &initial.rho_tilde {
        if !rho.same_grid(&initial.u) {
            return Err(Error::GridMismatch);
        }
    }
    if *initial.u.grid().as_ref() != *op.grid().as_ref() {
        return Err(Error::GridMismatch);
    }

    let params = op.params();
    let grid = op.grid();
    let threshold = -config.slope_blowup_threshold;

    let mut tracers = seed_tracers(&initial.u, config.slope_tracers);
    let mut y = Vector::from_state(initial, tracers.clone());
    let mut state = initial.clone();
    let mut records = vec![record(initial.clone(), &tracers, 0.0, op)];
    let mut slope = records[0].diagnostics.min_ux;
    let mut steps = 0usize;
    let horizon_eps = 1e-14 * config.t_max.abs().max(1.0);

    let (trigger, detected_slope) = loop {
        if slope < threshold {
            break (Trigger::SlopeThreshold, Some(slope));
        }
        if state.time >= config.t_max - horizon_eps || steps >= config.max_steps {
            break (Trigger::HorizonReached, None);
        }
        let dt = adaptive_dt_with_slope(&state, config, params, slope);
        if dt < config.dt_min {
            break (Trigger::DtUnderflow, Some(slope));
        }
        let next = match rk4(op, &y, dt) {
            Ok(next) => next,
            Err(Error::NonFinite(_)) => break (Trigger::DtUnderflow, Some(slope)),
            Err(other) => return Err(other),
        };
        steps += 1;
        let time = if config.t_max - (state.time + dt) <= horizon_eps {
            config.t_max
        } else {
            state.time + dt
        };
        y = next;
        tracers.clone_from(&y.tracers);
        state = y.to_state(grid, time);
        slope = min_slope(&state.u, &tracers).0;

        let at_end = slope < threshold || time >= config.t_max - horizon_eps || steps >= config.max_steps;
        if steps.is_multiple_of(config.record_every) || at_end {
            records.push(record(state.clone(), &tracers, dt, op));
        }
    };

    // a trigger that fires between cadence points still gets its state recorded
    if records.last().map(|r| r.state.time) != Some(state.time) {
        let dt = state.time - records.last().map_or(0.0, |r| r.state.time);
        records.push(record(state.clone(), &tracers, dt, op));
    }

    let blew_up = trigger != Trigger::HorizonReached;
    if blew_up {
        let last = records.last_mut().expect("initial record exists");
        last.state.u = last.state.u.clone().tagged_post_blowup();
        last.state.rho_tilde = last.state.rho_tilde.take().map(Field::tagged_post_blowup);
    }
    let pre_blowup_len = if blew_up { records.len() - 1 } else { records.len() };
    let report = BlowupReport {
        blew_up,
        t_detect: blew_up.then_some(state.time),
        trigger,
        min_slope_at_detect: if blew_up { detected_slope } else { None },
        t_final: state.time,
        steps,
    };
    Ok((
        Trajectory {
            params: *params,
            records,
            pre_blowup_len,
        },
        report,
    ))
}
