//! Evolution: the nonlocal right-hand side against the momentum form, RK4
//! order, linear dispersion, conservation and the breaking detector.

mod common;

use std::sync::Arc;

use common::max_abs_diff;
use dghlab::analysis::{energy_e, energy_f, h_alpha_norm};
use dghlab::evolution::{adaptive_dt, dgh2_rhs, dgh_rhs, simulate, step_rk4, SolverConfig, Trigger};
use dghlab::{Field, Grid, NonlocalOperator, Parameters, Preset, State};

fn setup(params: Parameters, half_length: f64, n: usize) -> (Arc<Grid>, NonlocalOperator) {
    let grid = Grid::new(half_length, n).unwrap();
    let op = NonlocalOperator::new(&grid, &params);
    (grid, op)
}

/// `u_t = Q[m_t]` with `m = u - alpha^2 u_xx` and
/// `m_t = -c0 u_x - u m_x - 2 m u_x - gamma u_xxx`.
fn momentum_form(u: &Field, op: &NonlocalOperator) -> Field {
    let p = op.params();
    let (a2, c0, gamma) = (p.alpha().powi(2), p.c0(), p.gamma());
    let ux = u.derivative();
    let uxx = ux.derivative();
    let uxxx = uxx.derivative();
    let m = u.zip_map(&uxx, |v, d2| v - a2 * d2).unwrap();
    let mx = m.derivative();
    let vals: Vec<f64> = (0..u.len())
        .map(|j| {
            let (v, d, d3) = (u.values()[j], ux.values()[j], uxxx.values()[j]);
            -c0 * d - v * mx.values()[j] - 2.0 * m.values()[j] * d - gamma * d3
        })
        .collect();
    op.apply_q(&Field::from_samples(u.grid(), vals).unwrap())
}

#[test]
fn rhs_agrees_with_momentum_form() {
    for params in [
        Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap(),
        Parameters::new(0.7, -0.3, 0.2, 1.0).unwrap(),
        Parameters::camassa_holm(1.5).unwrap(),
    ] {
        let (grid, op) = setup(params, 20.0, 2048);
        for preset in [Preset::gaussian_bump(1.0), Preset::gaussian_derivative(1.0)] {
            let u = preset.evaluate(&grid, &params).unwrap();
            let got = dgh_rhs(&u, &op);
            let want = momentum_form(&u, &op);
            let err = max_abs_diff(got.values(), want.values());
            assert!(err < 1e-8, "{params:?} {}: {err:e}", preset.name());
        }
    }
}

#[test]
fn rest_states() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 256);
    assert_eq!(dgh_rhs(&Field::zeros(&grid), &op).max_abs(), 0.0);
    assert!(dgh_rhs(&Field::constant(&grid, 0.8), &op).max_abs() < 1e-13);
    // rho = 1 + rho_tilde = 0 with u = 0 is an equilibrium
    let state = State::two_component(0.0, Field::zeros(&grid), Field::constant(&grid, -1.0)).unwrap();
    let (du, dr) = dgh2_rhs(&state, &op).unwrap();
    assert!(du.max_abs() < 1e-13 && dr.max_abs() < 1e-13);
}

#[test]
fn rk4_is_fourth_order() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 512);
    let u0 = Preset::gaussian_bump(0.5).evaluate(&grid, &params).unwrap();
    let run = |dt: f64| {
        let mut s = State::single(0.0, u0.clone());
        let steps = (0.4 / dt).round() as usize;
        for _ in 0..steps {
            s = step_rk4(&s, dt, &op).unwrap();
        }
        s.u
    };
    let (a, b, c) = (run(0.02), run(0.01), run(0.005));
    let e1 = max_abs_diff(a.values(), b.values());
    let e2 = max_abs_diff(b.values(), c.values());
    let order = (e1 / e2).log2();
    assert!(order > 3.8 && order < 4.3, "observed order {order} ({e1:e}, {e2:e})");
}

/// Phase speed of a small cosine, measured from the phase of its Fourier coefficient.
fn measured_speed(params: Parameters, mode: usize) -> (f64, f64) {
    let half_length = 20.0;
    let (grid, op) = setup(params, half_length, 256);
    let xi = std::f64::consts::PI * mode as f64 / half_length;
    let amplitude = 1e-8;
    let mut s = State::single(0.0, Field::from_fn(&grid, |x| amplitude * (xi * x).cos()));
    let (t_end, dt) = (2.0, 0.01);
    for _ in 0..200 {
        s = step_rk4(&s, dt, &op).unwrap();
    }
    // u = A cos(xi (x - c t)): project onto cos and sin
    let (mut cc, mut ss) = (0.0, 0.0);
    for (x, v) in grid.nodes().zip(s.u.values()) {
        cc += v * (xi * x).cos();
        ss += v * (xi * x).sin();
    }
    let phase = ss.atan2(cc); // = xi c t
    let measured = phase / (xi * t_end);
    let alpha = params.alpha();
    let predicted = params.lambda() + 2.0 * params.k() / (1.0 + alpha * alpha * xi * xi);
    (measured, predicted)
}

#[test]
fn linear_dispersion_relation() {
    for params in [
        Parameters::new(1.0, 0.0, 1.0, 1.0).unwrap(),
        Parameters::new(1.0, 0.4, 1.0, 1.0).unwrap(),
        Parameters::new(0.6, -0.2, 0.5, 1.0).unwrap(),
    ] {
        for mode in [3, 8, 15] {
            let (measured, predicted) = measured_speed(params, mode);
            assert!(
                (measured - predicted).abs() <= 1e-3 * predicted.abs().max(1e-3),
                "{params:?} mode {mode}: {measured} vs {predicted}"
            );
        }
    }
}

#[test]
fn step_size_rules() {
    let params = Parameters::camassa_holm(1.0).unwrap();
    let grid = Grid::new(20.0, 256).unwrap();
    let cfg = SolverConfig::with_t_max(100.0);
    let one = adaptive_dt(&State::single(0.0, Field::constant(&grid, 1.0)), &cfg, &params);
    let two = adaptive_dt(&State::single(0.0, Field::constant(&grid, 2.0)), &cfg, &params);
    assert!((one / two - 2.0).abs() < 1e-12);
    assert_eq!(
        adaptive_dt(&State::single(99.5, Field::zeros(&grid)), &cfg, &params),
        0.5
    );
}

#[test]
fn conservation_before_steepening() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 2048);
    let u0 = Preset::gaussian_derivative(1.0).evaluate(&grid, &params).unwrap();
    let (traj, report) = simulate(&State::single(0.0, u0), &SolverConfig::with_t_max(3.0), &op).unwrap();
    assert!(report.blew_up);
    let window = traj.while_slope_above(-10.0);
    assert!(window.len() > 10);
    let (e0, f0) = (window[0].diagnostics.energy_e, window[0].diagnostics.energy_f);
    for r in window {
        let de = (r.diagnostics.energy_e - e0).abs() / e0;
        let df = (r.diagnostics.energy_f - f0).abs() / f0.abs();
        assert!(de < 1e-6, "E drift {de:e} at t = {}", r.state.time);
        assert!(df < 1e-5, "F drift {df:e} at t = {}", r.state.time);
    }
}

#[test]
fn smooth_data_conserve_energy_to_the_horizon() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 1024);
    let u0 = Preset::gaussian_bump(0.5).evaluate(&grid, &params).unwrap();
    let state = State::single(0.0, u0);
    let (traj, report) = simulate(&state, &SolverConfig::with_t_max(4.0), &op).unwrap();
    assert_eq!(report.trigger, Trigger::HorizonReached);
    let last = traj.last();
    assert_eq!(last.state.time, 4.0);
    let e0 = energy_e(&state, &params);
    assert!((energy_e(&last.state, &params) - e0).abs() < 1e-6 * e0);
    let f0 = energy_f(&state, &params);
    assert!((energy_f(&last.state, &params) - f0).abs() < 1e-5 * f0.abs());
}

#[test]
fn sup_norm_stays_below_the_embedding_bound() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 2048);
    let u0 = Preset::gaussian_derivative(1.0).evaluate(&grid, &params).unwrap();
    let bound = h_alpha_norm(&u0, &params) / (2.0 * params.alpha()).sqrt();
    let (traj, _) = simulate(&State::single(0.0, u0), &SolverConfig::with_t_max(3.0), &op).unwrap();
    for r in traj.pre_blowup() {
        assert!(r.diagnostics.max_abs_u <= bound * (1.0 + 1e-6));
    }
}

#[test]
fn breaking_is_detected_before_the_bound() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 2048);
    let u0 = Preset::gaussian_derivative(1.0).evaluate(&grid, &params).unwrap();
    let (traj, report) = simulate(&State::single(0.0, u0), &SolverConfig::with_t_max(5.0), &op).unwrap();
    assert!(report.blew_up);
    assert_eq!(report.trigger, Trigger::SlopeThreshold);
    let t = report.t_detect.unwrap();
    assert!(t < 2.0, "t_detect = {t}");
    assert!(report.min_slope_at_detect.unwrap() < -1e4);
    assert_eq!(traj.pre_blowup().len() + 1, traj.len());
    // once the slope is steep the step only shrinks
    let steep: Vec<f64> = traj
        .records()
        .iter()
        .skip(1)
        .filter(|r| r.diagnostics.min_ux < -1e2)
        .map(|r| r.diagnostics.dt)
        .collect();
    assert!(steep.len() > 3);
    assert!(steep.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "{steep:?}");
    assert!(traj.last().state.u.is_post_blowup());
}

#[test]
fn detection_time_is_resolution_robust_and_threshold_insensitive() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let detect = |n: usize, threshold: f64| {
        let (grid, op) = setup(params, 20.0, n);
        let u0 = Preset::gaussian_derivative(1.0).evaluate(&grid, &params).unwrap();
        let cfg = SolverConfig {
            slope_blowup_threshold: threshold,
            ..SolverConfig::with_t_max(5.0)
        };
        simulate(&State::single(0.0, u0), &cfg, &op)
            .unwrap()
            .1
            .t_detect
            .unwrap()
    };
    let coarse = detect(2048, 1e4);
    let fine = detect(4096, 1e4);
    assert!((coarse - fine).abs() / fine < 0.02, "{coarse} vs {fine}");
    let doubled = detect(2048, 2e4);
    assert!((doubled - coarse).abs() / coarse < 0.01, "{doubled} vs {coarse}");
}

#[test]
fn small_data_and_zero_data_reach_the_horizon() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 1024);
    let zero = State::single(0.0, Field::zeros(&grid));
    let (traj, report) = simulate(&zero, &SolverConfig::with_t_max(1.0), &op).unwrap();
    assert_eq!(report.trigger, Trigger::HorizonReached);
    assert!(!report.blew_up);
    assert!(traj.records().iter().all(|r| r.state.u.max_abs() == 0.0));

    let u0 = Preset::gaussian_bump(0.01).evaluate(&grid, &params).unwrap();
    let (traj, report) = simulate(&State::single(0.0, u0), &SolverConfig::with_t_max(5.0), &op).unwrap();
    assert_eq!(report.trigger, Trigger::HorizonReached);
    assert!(traj.records().iter().all(|r| r.diagnostics.min_ux >= -0.1));
}

#[test]
fn step_floor_reports_underflow_with_finite_state() {
    let params = Parameters::new(1.0, 0.5, 1.0, 1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 1024);
    let u0 = Preset::gaussian_derivative(1.0).evaluate(&grid, &params).unwrap();
    let cfg = SolverConfig {
        dt_min: 1e-3,
        ..SolverConfig::with_t_max(5.0)
    };
    let (traj, report) = simulate(&State::single(0.0, u0), &cfg, &op).unwrap();
    assert_eq!(report.trigger, Trigger::DtUnderflow);
    assert!(report.blew_up);
    assert!(traj.last().state.is_finite());
}

#[test]
fn invalid_input_is_rejected() {
    let params = Parameters::camassa_holm(1.0).unwrap();
    let (grid, op) = setup(params, 20.0, 64);
    let other = Grid::new(20.0, 128).unwrap();
    assert!(simulate(&State::single(0.0, Field::zeros(&other)), &SolverConfig::default(), &op).is_err());
    let bad = SolverConfig {
        cfl: 0.0,
        ..SolverConfig::default()
    };
    assert!(simulate(&State::single(0.0, Field::zeros(&grid)), &bad, &op).is_err());
    let nan = Field::from_samples(&grid, vec![f64::NAN; 64]);
    assert!(nan.is_err() || simulate(&State::single(0.0, nan.unwrap()), &SolverConfig::default(), &op).is_err());
}
