use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    check_criterion_dgh, check_criterion_dgh2, energy_e, h_alpha_norm, l2_norm, run_inequality_suite, CriterionVerdict,
    SuiteReport, DEFAULT_RHO_TOL,
};
use crate::characteristics::{advect, CharacteristicPath};
use crate::error::{Error, Result};
use crate::evolution::{simulate, BlowupReport, SolverConfig, Trajectory, Trigger, RESOLVED_TAIL};
use crate::grid::Grid;
use crate::helmholtz::NonlocalOperator;
use crate::params::Parameters;
use crate::state::State;

use super::config::{Equation, FieldSpec, RunConfig};
use super::output::{fmt, fmt_opt, write_json, CsvTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Grid, operator and initial state built from a config.
pub struct Setup {
    pub grid: Arc<Grid>,
    pub params: Parameters,
    pub op: NonlocalOperator,
    pub initial: State,
}

impl Setup {
    pub fn new(cfg: &RunConfig, base_dir: &Path) -> Result<Self> {
        Self::with_overrides(cfg, base_dir, cfg.params()?, 1.0)
    }

    /// Like [`Setup::new`] with other parameters and the initial preset scaled by `amplitude`.
    pub fn with_overrides(cfg: &RunConfig, base_dir: &Path, params: Parameters, amplitude: f64) -> Result<Self> {
        cfg.validate()?;
        let grid = Grid::new(cfg.grid.half_length, cfg.grid.n_points)?;
        let op = NonlocalOperator::new(&grid, &params);
        let u = cfg
            .initial
            .resolve(base_dir)?
            .scaled(amplitude)
            .evaluate(&grid, &params)?;
        let initial = match cfg.equation {
            Equation::Dgh => State::single(0.0, u),
            Equation::Dgh2 => {
                let spec = cfg.density.as_ref().ok_or(Error::MissingDensity)?;
                let rho = spec.resolve(base_dir)?.evaluate(&grid, &params)?;
                State::two_component(0.0, u, rho)?
            }
        };
        Ok(Self {
            grid,
            params,
            op,
            initial,
        })
    }

    /// Criterion verdict for the configured equation. The two-component check
    /// needs `gamma = 0`; otherwise the error is returned.
    pub fn criterion(&self) -> Result<CriterionVerdict> {
        match &self.initial.rho_tilde {
            None => Ok(check_criterion_dgh(&self.initial.u, &self.params)),
            Some(rho) => check_criterion_dgh2(&self.initial.u, rho, &self.params, DEFAULT_RHO_TOL),
        }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterSummary {
    pub alpha: f64,
    pub gamma: f64,
    pub c0: f64,
    pub sigma: f64,
    pub k: f64,
    pub lambda: f64,
    pub in_band: bool,
}

impl From<&Parameters> for ParameterSummary {
    fn from(p: &Parameters) -> Self {
        Self {
            alpha: p.alpha(),
            gamma: p.gamma(),
            c0: p.c0(),
            sigma: p.sigma(),
            k: p.k(),
            lambda: p.lambda(),
            in_band: p.in_band(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub half_length: f64,
    pub n_points: usize,
    pub dx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub seed: f64,
    pub file: String,
    pub records: usize,
    pub boundary_warning: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNormSummary {
    /// `(||u0||_{H^1_alpha} + ||rho_tilde0||_{L^2}) / sqrt(2 alpha)`; the density term only for `dgh2`.
    pub bound: f64,
    pub max_abs_u_pre_blowup: f64,
}

/// Contents of `summary.json`. Wall time goes to `timing.json` so this file is reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub equation: Equation,
    pub parameters: ParameterSummary,
    pub grid: GridSummary,
    pub solver: SolverConfig,
    pub initial: FieldSpec,
    pub density: Option<FieldSpec>,
    pub report: BlowupReport,
    pub criterion: Option<CriterionVerdict>,
    pub criterion_note: Option<String>,
    pub records: usize,
    pub pre_blowup_records: usize,
    /// Leading pre-blowup records whose spectral tail stays below the resolution threshold.
    pub resolved_records: usize,
    pub energy_e_initial: f64,
    /// Largest `|E(t) - E(0)| / |E(0)|` over pre-blowup records.
    pub energy_e_max_relative_drift: f64,
    pub sup_norm: SupNormSummary,
    pub characteristics: Vec<PathSummary>,
    pub files: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub command: String,
    pub wall_seconds: f64,
}

/// Everything `simulate` produces, before anything is written.
pub struct SimulationOutput {
    pub setup: Setup,
    pub trajectory: Trajectory,
    pub report: BlowupReport,
    pub criterion: Option<CriterionVerdict>,
    pub criterion_note: Option<String>,
    pub paths: Vec<CharacteristicPath>,
}

/// Runs the configured simulation and advects the characteristics.
pub fn run_simulation(cfg: &RunConfig, base_dir: &Path) -> Result<SimulationOutput> {
    let setup = Setup::new(cfg, base_dir)?;
    let (criterion, criterion_note) = match setup.criterion() {
        Ok(v) => (Some(v), None),
        Err(e @ Error::NonzeroGamma(_)) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let (trajectory, report) = simulate(&setup.initial, &cfg.solver, &setup.op)?;
    let seeds = if cfg.characteristics.seeds.is_empty() {
        vec![criterion.map_or(0.0, |v| v.x0_best)]
    } else {
        cfg.characteristics.seeds.clone()
    };
    let paths = pool(cfg.workers)?.install(|| {
        seeds
            .par_iter()
            .map(|&x0| advect(&trajectory, &setup.op, x0))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SimulationOutput {
        setup,
        trajectory,
        report,
        criterion,
        criterion_note,
        paths,
    })
}

fn trajectory_table(trajectory: &Trajectory) -> CsvTable {
    let mut t = CsvTable::new(&[
        "t",
        "min_ux",
        "max_abs_u",
        "E",
        "F",
        "dt",
        "grid_min_ux",
        "spectral_tail",
    ]);
    for r in trajectory.records() {
        let d = &r.diagnostics;
        t.push_floats(&[
            r.state.time,
            d.min_ux,
            d.max_abs_u,
            d.energy_e,
            d.energy_f,
            d.dt,
            d.grid_min_ux,
            d.spectral_tail,
        ]);
    }
    t
}

fn path_table(path: &CharacteristicPath, two_component: bool) -> CsvTable {
    let mut header = vec!["t", "q", "g", "qx", "A_w", "B_w", "A_p", "B_p", "mom_res"];
    if two_component {
        header.push("rho_res");
    }
    header.extend(["A_w_sign", "A_w_log_abs", "B_w_sign", "B_w_log_abs", "h"]);
    let mut t = CsvTable::new(&header);
    for p in &path.points {
        let s = &p.sample;
        let mut row = vec![
            fmt(s.t),
            fmt(s.q),
            fmt(s.u_x),
            fmt(s.q_x),
            fmt(p.a_weighted.value().unwrap_or(f64::NAN)),
            fmt(p.b_weighted.value().unwrap_or(f64::NAN)),
            fmt(p.plain.a),
            fmt(p.plain.b),
            fmt(p.momentum_residual),
        ];
        if two_component {
            row.push(fmt_opt(p.rho_invariant_residual));
        }
        row.extend([
            fmt(p.a_weighted.sign),
            fmt(p.a_weighted.log_magnitude),
            fmt(p.b_weighted.sign),
            fmt(p.b_weighted.log_magnitude),
            fmt_opt(p.plain.h),
        ]);
        t.push(row);
    }
    t
}

fn final_state_table(state: &State) -> CsvTable {
    let two = state.rho_tilde.is_some();
    let mut t = CsvTable::new(if two { &["x", "u", "rho_tilde"] } else { &["x", "u"] });
    let grid = state.u.grid();
    for (j, x) in grid.nodes().enumerate() {
        let mut row = vec![x, state.u.values()[j]];
        if let Some(rho) = &state.rho_tilde {
            row.push(rho.values()[j]);
        }
        t.push_floats(&row);
    }
    t
}

impl SimulationOutput {
    pub fn summary(&self, cfg: &RunConfig, path_files: &[String], files: Vec<String>) -> RunSummary {
        let params = &self.setup.params;
        let pre = self.trajectory.pre_blowup();
        let e0 = energy_e(&self.setup.initial, params);
        let drift = pre
            .iter()
            .map(|r| (r.diagnostics.energy_e - e0).abs() / e0.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        let u0 = &self.setup.initial.u;
        let rho_norm = self.setup.initial.rho_tilde.as_ref().map_or(0.0, l2_norm);
        RunSummary {
            equation: cfg.equation,
            parameters: params.into(),
            grid: GridSummary {
                half_length: self.setup.grid.half_length(),
                n_points: self.setup.grid.n_points(),
                dx: self.setup.grid.dx(),
            },
            solver: cfg.solver.clone(),
            initial: cfg.initial.clone(),
            density: cfg.density.clone(),
            report: self.report,
            criterion: self.criterion,
            criterion_note: self.criterion_note.clone(),
            records: self.trajectory.len(),
            pre_blowup_records: pre.len(),
            resolved_records: self.trajectory.resolved(RESOLVED_TAIL).len(),
            energy_e_initial: e0,
            energy_e_max_relative_drift: drift,
            sup_norm: SupNormSummary {
                bound: (h_alpha_norm(u0, params) + rho_norm) / (2.0 * params.alpha()).sqrt(),
                max_abs_u_pre_blowup: pre.iter().map(|r| r.diagnostics.max_abs_u).fold(0.0, f64::max),
            },
            characteristics: self
                .paths
                .iter()
                .zip(path_files)
                .map(|(p, f)| PathSummary {
                    seed: p.seed,
                    file: f.clone(),
                    records: p.points.len(),
                    boundary_warning: p.boundary_warning.clone(),
                })
                .collect(),
            files,
        }
    }

    /// Writes every output file into `dir` and returns the summary.
    pub fn write(&self, cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
        std::fs::create_dir_all(dir)?;
        let two = self.setup.initial.is_two_component();
        let mut files = vec!["trajectory.csv".to_string(), "final_state.csv".to_string()];
        trajectory_table(&self.trajectory).write(&dir.join("trajectory.csv"))?;
        final_state_table(&self.trajectory.last().state).write(&dir.join("final_state.csv"))?;
        let mut path_files = Vec::new();
        for (i, path) in self.paths.iter().enumerate() {
            let name = format!("characteristic_{i:02}.csv");
            path_table(path, two).write(&dir.join(&name))?;
            path_files.push(name.clone());
            files.push(name);
        }
        files.push("summary.json".to_string());
        let summary = self.summary(cfg, &path_files, files);
        write_json(&dir.join("summary.json"), &summary)?;
        Ok(summary)
    }
}

fn write_timing(dir: &Path, command: &str, start: Instant) -> Result<()> {
    write_json(
        &dir.join("timing.json"),
        &Timing {
            command: command.to_string(),
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    )
}

pub fn cmd_simulate(cfg: &RunConfig, base_dir: &Path) -> Result<i32> {
    let start = Instant::now();
    let out = run_simulation(cfg, base_dir)?;
    let summary = out.write(cfg, &cfg.output.dir)?;
    write_timing(&cfg.output.dir, "simulate", start)?;
    for p in &summary.characteristics {
        if let Some(w) = &p.boundary_warning {
            eprintln!("warning: {w}");
        }
    }
    let r = &summary.report;
    println!(
        "trigger={} blew_up={} t_final={} t_detect={} time_bound={} -> {}",
        serde_json::to_string(&r.trigger)?.trim_matches('"'),
        r.blew_up,
        r.t_final,
        r.t_detect.map_or("none".into(), |t| t.to_string()),
        summary
            .criterion
            .and_then(|v| v.time_bound)
            .map_or("none".into(), |t| t.to_string()),
        cfg.output.dir.display()
    );
    Ok(EXIT_OK)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutput {
    pub equation: Equation,
    pub parameters: ParameterSummary,
    pub verdict: CriterionVerdict,
}

pub fn cmd_criterion(cfg: &RunConfig, base_dir: &Path) -> Result<i32> {
    let setup = Setup::new(cfg, base_dir)?;
    let out = CriterionOutput {
        equation: cfg.equation,
        parameters: (&setup.params).into(),
        verdict: setup.criterion()?,
    };
    std::fs::create_dir_all(&cfg.output.dir)?;
    write_json(&cfg.output.dir.join("criterion.json"), &out)?;
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(EXIT_OK)
}

pub fn run_lemmas(cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let grid = Grid::new(cfg.grid.half_length, cfg.grid.n_points)?;
    run_inequality_suite(&grid, &cfg.params()?, &cfg.lemmas, cfg.seed)
}

pub fn cmd_lemmas(cfg: &RunConfig) -> Result<i32> {
    let start = Instant::now();
    let report = run_lemmas(cfg)?;
    let dir = &cfg.output.dir;
    std::fs::create_dir_all(dir)?;
    let mut rows = CsvTable::new(&[
        "field",
        "inequality",
        "alpha",
        "gamma",
        "c0",
        "min_gap",
        "argmin_x",
        "passed",
    ]);
    for r in &report.rows {
        rows.push(vec![
            r.field.clone(),
            r.inequality.clone(),
            fmt(r.alpha),
            fmt(r.gamma),
            fmt(r.c0),
            fmt(r.min_gap),
            fmt_opt(r.argmin_x),
            r.passed.to_string(),
        ]);
    }
    rows.write(&dir.join("lemmas.csv"))?;
    let mut witness = CsvTable::new(&[
        "n_points",
        "minus_equality_gap",
        "plus_equality_gap",
        "minus_equality_gap_spectral_slope",
        "min_gap",
    ]);
    for w in &report.witness.rows {
        witness.push(vec![
            w.n_points.to_string(),
            fmt(w.minus_equality_gap),
            fmt(w.plus_equality_gap),
            fmt(w.minus_equality_gap_spectral_slope),
            fmt(w.min_gap),
        ]);
    }
    witness.write(&dir.join("witness.csv"))?;
    write_json(&dir.join("lemmas_report.json"), &report)?;
    write_timing(dir, "lemmas", start)?;

    let failed = report.rows.iter().filter(|r| !r.passed).count();
    println!(
        "{} gap fields, {failed} below -{:e}; worst gap {:e}; peakon witness {} (order {})",
        report.rows.len(),
        cfg.lemmas.tolerance,
        report.worst_gap,
        if report.witness.passed { "ok" } else { "FAILED" },
        report
            .witness
            .observed_order
            .map_or("n/a".into(), |o| format!("{o:.3}")),
    );
    Ok(if report.passed { EXIT_OK } else { EXIT_VIOLATION })
}

/// One sweep cell: a scaled initial datum under one parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub index: usize,
    pub amplitude: f64,
    pub gamma: f64,
    pub c0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cell: SweepCell,
    pub parameters: Option<ParameterSummary>,
    pub verdict: Option<CriterionVerdict>,
    pub report: Option<BlowupReport>,
    pub error: Option<String>,
}

/// Cartesian product of the sweep axes in amplitude, gamma, c0 order.
pub fn sweep_cells(cfg: &RunConfig) -> Result<Vec<SweepCell>> {
    let s = &cfg.sweep;
    if s.amplitudes.is_none() && s.c0.is_none() && s.gamma.is_none() {
        return Err(Error::Config(
            "[sweep] needs at least one of amplitudes, gamma, c0".into(),
        ));
    }
    let axis = |name: &str, values: &Option<Vec<f64>>, base: f64| match values {
        Some(v) if v.is_empty() => Err(Error::Config(format!("sweep axis `{name}` is empty"))),
        Some(v) => Ok(v.clone()),
        None => Ok(vec![base]),
    };
    let amplitudes = axis("amplitudes", &s.amplitudes, 1.0)?;
    let gammas = axis("gamma", &s.gamma, cfg.parameters.gamma)?;
    let c0s = axis("c0", &s.c0, cfg.parameters.c0)?;
    let mut cells = Vec::with_capacity(amplitudes.len() * gammas.len() * c0s.len());
    for &amplitude in &amplitudes {
        for &gamma in &gammas {
            for &c0 in &c0s {
                cells.push(SweepCell {
                    index: cells.len(),
                    amplitude,
                    gamma,
                    c0,
                });
            }
        }
    }
    Ok(cells)
}

fn run_cell(cfg: &RunConfig, base_dir: &Path, cell: SweepCell) -> SweepRow {
    let mut row = SweepRow {
        cell,
        parameters: None,
        verdict: None,
        report: None,
        error: None,
    };
    let result = (|| -> Result<()> {
        let params = Parameters::new(cfg.parameters.alpha, cell.gamma, cell.c0, cfg.parameters.sigma)?;
        row.parameters = Some((&params).into());
        let setup = Setup::with_overrides(cfg, base_dir, params, cell.amplitude)?;
        row.verdict = setup.criterion().ok();
        let (_, report) = simulate(&setup.initial, &cfg.solver, &setup.op)?;
        row.report = Some(report);
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row
}

pub fn run_sweep(cfg: &RunConfig, base_dir: &Path) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let cells = sweep_cells(cfg)?;
    pool(cfg.workers)?.install(|| Ok(cells.par_iter().map(|&c| run_cell(cfg, base_dir, c)).collect()))
}

pub fn sweep_table(rows: &[SweepRow]) -> CsvTable {
    let mut t = CsvTable::new(&[
        "cell",
        "amplitude",
        "alpha",
        "gamma",
        "c0",
        "k",
        "lambda",
        "in_band",
        "holds",
        "margin",
        "x0",
        "time_bound",
        "blew_up",
        "trigger",
        "t_detect",
        "t_final",
        "steps",
        "error",
    ]);
    for r in rows {
        let p = r.parameters.as_ref();
        let v = r.verdict.as_ref();
        let rep = r.report.as_ref();
        t.push(vec![
            r.cell.index.to_string(),
            fmt(r.cell.amplitude),
            fmt_opt(p.map(|p| p.alpha)),
            fmt(r.cell.gamma),
            fmt(r.cell.c0),
            fmt_opt(p.map(|p| p.k)),
            fmt_opt(p.map(|p| p.lambda)),
            p.map_or(String::new(), |p| p.in_band.to_string()),
            v.map_or(String::new(), |v| v.holds.to_string()),
            fmt_opt(v.map(|v| v.margin)),
            fmt_opt(v.map(|v| v.x0_best)),
            fmt_opt(v.and_then(|v| v.time_bound)),
            rep.map_or(String::new(), |r| r.blew_up.to_string()),
            rep.map_or(String::new(), |r| trigger_name(r.trigger).to_string()),
            fmt_opt(rep.and_then(|r| r.t_detect)),
            fmt_opt(rep.map(|r| r.t_final)),
            rep.map_or(String::new(), |r| r.steps.to_string()),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    t
}

pub fn trigger_name(t: Trigger) -> &'static str {
    match t {
        Trigger::SlopeThreshold => "slope_threshold",
        Trigger::DtUnderflow => "dt_underflow",
        Trigger::HorizonReached => "horizon_reached",
    }
}

pub fn cmd_sweep(cfg: &RunConfig, base_dir: &Path) -> Result<i32> {
    let start = Instant::now();
    let rows = run_sweep(cfg, base_dir)?;
    std::fs::create_dir_all(&cfg.output.dir)?;
    sweep_table(&rows).write(&cfg.output.dir.join("sweep.csv"))?;
    write_timing(&cfg.output.dir, "sweep", start)?;
    let blown = rows.iter().filter(|r| r.report.is_some_and(|r| r.blew_up)).count();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    println!(
        "{} cells, {blown} blew up, {errors} errors -> {}",
        rows.len(),
        cfg.output.dir.join("sweep.csv").display()
    );
    Ok(EXIT_OK)
}
