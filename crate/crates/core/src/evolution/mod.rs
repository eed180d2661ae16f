//! Time integration of the nonlocal DGH forms with wave-breaking detection.

mod rhs;
mod simulate;
mod stepper;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Parameters;
use crate::state::State;

pub(crate) use rhs::evaluate;
pub use rhs::{dgh2_rhs, dgh_rhs};
pub use simulate::simulate;
pub use stepper::{adaptive_dt, adaptive_dt_with_slope, step_rk4};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub t_max: f64,
    /// Courant factor for both the transport and the slope time scale.
    pub cfl: f64,
    /// Step size below which the run is declared broken down.
    pub dt_min: f64,
    /// Breaking is declared once the minimum slope drops below `-slope_blowup_threshold`.
    pub slope_blowup_threshold: f64,
    /// Record every n-th step (the final and trigger states are always recorded).
    pub record_every: usize,
    /// Number of Lagrangian slope tracers seeded at the deepest local minima of `u0'`.
    pub slope_tracers: usize,
    /// Hard cap on the number of steps.
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_max: 5.0,
            cfl: 0.3,
            dt_min: 1e-9,
            slope_blowup_threshold: 1e4,
            record_every: 1,
            slope_tracers: 8,
            max_steps: 2_000_000,
        }
    }
}

impl SolverConfig {
    pub fn with_t_max(t_max: f64) -> Self {
        Self {
            t_max,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSolverConfig(msg.to_string()));
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return bad("t_max must be positive and finite");
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl must lie in (0, 1]");
        }
        if !(self.dt_min > 0.0) {
            return bad("dt_min must be positive");
        }
        if !(self.slope_blowup_threshold > 0.0) {
            return bad("slope_blowup_threshold must be positive");
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1");
        }
        Ok(())
    }
}

/// Spectral-tail level below which a recorded state is treated as resolved.
/// Pointwise diagnostics taken along characteristics (monotone functionals,
/// slope decrease, Riccati bound) are checked only over this window; past it
/// Gibbs oscillations from the steepening front pollute `u_x`.
pub const RESOLVED_TAIL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Minimum slope: the smaller of the grid minimum of `u_x` and the tracked slopes.
    pub min_ux: f64,
    /// Minimum of the spectral `u_x` over the grid nodes.
    pub grid_min_ux: f64,
    pub max_abs_u: f64,
    /// Step that produced this record (0 for the initial record).
    pub dt: f64,
    pub energy_e: f64,
    pub energy_f: f64,
    /// Largest Fourier amplitude in the upper third of the retained band, relative
    /// to the largest amplitude overall. Small values mean the field is resolved.
    pub spectral_tail: f64,
}

#[derive(Clone, Debug)]
pub struct Record {
    pub state: State,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    SlopeThreshold,
    DtUnderflow,
    HorizonReached,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub blew_up: bool,
    pub t_detect: Option<f64>,
    pub trigger: Trigger,
    pub min_slope_at_detect: Option<f64>,
    /// Time of the last state the solver reached.
    pub t_final: f64,
    pub steps: usize,
}

/// Recorded solution history. The first record is the initial datum at `t = 0`
/// (or the initial time); times are strictly increasing.
#[derive(Clone, Debug)]
pub struct Trajectory {
    params: Parameters,
    records: Vec<Record>,
    /// Index one past the last record that precedes detection.
    pre_blowup_len: usize,
}

impl Trajectory {
    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.state.time)
    }

    pub fn initial(&self) -> &Record {
        &self.records[0]
    }

    pub fn last(&self) -> &Record {
        self.records.last().expect("trajectory is never empty")
    }

    /// Records strictly before breaking was declared.
    pub fn pre_blowup(&self) -> &[Record] {
        &self.records[..self.pre_blowup_len]
    }

    /// Leading pre-blowup records whose spectral tail stays at or below `tail_tol`.
    pub fn resolved(&self, tail_tol: f64) -> &[Record] {
        let pre = self.pre_blowup();
        let end = pre
            .iter()
            .position(|r| r.diagnostics.spectral_tail > tail_tol)
            .unwrap_or(pre.len());
        &pre[..end]
    }

    /// Leading pre-blowup records with minimum slope at or above `floor`.
    pub fn while_slope_above(&self, floor: f64) -> &[Record] {
        let pre = self.pre_blowup();
        let end = pre
            .iter()
            .position(|r| r.diagnostics.min_ux < floor)
            .unwrap_or(pre.len());
        &pre[..end]
    }
}
