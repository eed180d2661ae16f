//! Seeded property suite for the convolution and embedding inequalities,
//! plus the peakon equality witness and its convergence study.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{Field, Grid};
use crate::helmholtz::NonlocalOperator;
use crate::params::Parameters;
use crate::presets::Preset;

use super::inequalities::{lemma31_gaps, lemma31_gaps_with_slope, lemma32_gap, sobolev_gap, GapField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub random_fields: usize,
    /// Highest Fourier mode index in a random field.
    pub max_mode: usize,
    /// A gap below `-tolerance` is a violation.
    pub tolerance: f64,
    pub witness_sizes: Vec<usize>,
    /// Largest allowed `|gap|` on the equality side at the finest witness grid.
    pub witness_gap: f64,
    pub witness_min_order: f64,
    /// Negative control: flip the sign of the `d/dx Q` symbol.
    pub corrupt_operator: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            random_fields: 50,
            max_mode: 48,
            tolerance: 1e-8,
            witness_sizes: vec![1024, 2048, 4096],
            witness_gap: 1e-3,
            witness_min_order: 1.5,
            corrupt_operator: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub field: String,
    pub inequality: String,
    pub alpha: f64,
    pub gamma: f64,
    pub c0: f64,
    pub min_gap: f64,
    /// Location of the smallest gap; absent for the scalar embedding gap.
    pub argmin_x: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub n_points: usize,
    /// Largest `|gap|` of the minus kernel over `y - 5 alpha <= x <= y`.
    pub minus_equality_gap: f64,
    /// Largest `|gap|` of the plus kernel over `y <= x <= y + 5 alpha`.
    pub plus_equality_gap: f64,
    /// Same quantity for the minus kernel with the spectral derivative of the kink.
    pub minus_equality_gap_spectral_slope: f64,
    pub min_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub c: f64,
    pub y: f64,
    pub rows: Vec<WitnessRow>,
    /// Smallest observed order between consecutive grid sizes, over both kernels.
    pub observed_order: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub rows: Vec<GapRow>,
    pub witness: WitnessReport,
    pub worst_gap: f64,
    pub passed: bool,
}

/// `sum_{j <= max_mode} a_j cos(pi j x / L) + b_j sin(pi j x / L)` with
/// coefficients uniform in `[-1, 1] / j`, times a random overall scale.
pub fn random_band_limited(grid: &Arc<Grid>, rng: &mut impl Rng, max_mode: usize) -> Field {
    let modes = rng.gen_range(1..=max_mode.max(1));
    let scale = rng.gen_range(0.1..3.0);
    let offset = rng.gen_range(-0.5..0.5);
    let coefficients: Vec<(f64, f64, f64)> = (1..=modes)
        .map(|j| {
            let w = std::f64::consts::PI * j as f64 / grid.half_length();
            let decay = 1.0 / j as f64;
            (w, rng.gen_range(-1.0..1.0) * decay, rng.gen_range(-1.0..1.0) * decay)
        })
        .collect();
    Field::from_fn(grid, |x| {
        offset
            + scale
                * coefficients
                    .iter()
                    .map(|&(w, a, b)| a * (w * x).cos() + b * (w * x).sin())
                    .sum::<f64>()
    })
}

fn random_parameters(rng: &mut impl Rng) -> Parameters {
    let alpha = rng.gen_range(0.5..2.0);
    let gamma = rng.gen_range(-1.0..1.0);
    let c0 = rng.gen_range(-1.0..1.0);
    Parameters::new(alpha, gamma, c0, 1.0).expect("alpha is positive")
}

fn operator(grid: &Arc<Grid>, params: &Parameters, corrupt: bool) -> NonlocalOperator {
    let op = NonlocalOperator::new(grid, params);
    if corrupt {
        op.with_flipped_derivative_symbol()
    } else {
        op
    }
}

fn gap_rows(name: &str, u: &Field, op: &NonlocalOperator, tolerance: f64) -> Result<Vec<GapRow>> {
    let p = op.params();
    let row = |inequality: &str, min_gap: f64, argmin_x: Option<f64>| GapRow {
        field: name.to_string(),
        inequality: inequality.to_string(),
        alpha: p.alpha(),
        gamma: p.gamma(),
        c0: p.c0(),
        min_gap,
        argmin_x,
        passed: min_gap >= -tolerance,
    };
    let (minus, plus) = lemma31_gaps(u, op)?;
    let l32 = lemma32_gap(u, op)?;
    Ok(vec![
        row("lemma31_minus", minus.min_gap, Some(minus.argmin_x)),
        row("lemma31_plus", plus.min_gap, Some(plus.argmin_x)),
        row("lemma32", l32.min_gap, Some(l32.argmin_x)),
        row("sobolev", sobolev_gap(u, p), None),
    ])
}

fn max_abs_where(gap: &GapField, keep: impl Fn(f64) -> bool) -> f64 {
    let grid = gap.field.grid();
    grid.nodes()
        .zip(gap.field.values())
        .filter(|(x, _)| keep(*x))
        .fold(0.0, |m, (_, v)| m.max(v.abs()))
}

/// Gap of the peakon `c e^{-|x - y|/alpha} - k` on its equality side, over a
/// sequence of grid sizes, with the exact a.e. slope.
pub fn peakon_witness(params: &Parameters, half_length: f64, config: &SuiteConfig) -> Result<WitnessReport> {
    let (c, y) = (1.0, 0.0);
    let alpha = params.alpha();
    let reach = 5.0 * alpha;
    let mut rows = Vec::with_capacity(config.witness_sizes.len());
    for &n in &config.witness_sizes {
        let grid = Grid::new(half_length, n)?;
        let op = operator(&grid, params, config.corrupt_operator);
        let u = Preset::PeakonShifted { c, y, k: None }.evaluate(&grid, params)?;
        let ux = Field::from_fn(&grid, |x| {
            -(x - y).signum() * c / alpha * (-(x - y).abs() / alpha).exp()
        });
        let (minus, plus) = lemma31_gaps_with_slope(&u, &ux, &op)?;
        let (minus_spectral, _) = lemma31_gaps(&u, &op)?;
        rows.push(WitnessRow {
            n_points: n,
            minus_equality_gap: max_abs_where(&minus, |x| x <= y && x >= y - reach),
            plus_equality_gap: max_abs_where(&plus, |x| x >= y && x <= y + reach),
            minus_equality_gap_spectral_slope: max_abs_where(&minus_spectral, |x| x <= y && x >= y - reach),
            min_gap: minus.min_gap.min(plus.min_gap),
        });
    }
    let observed_order = rows
        .windows(2)
        .flat_map(|w| {
            let ratio = (w[1].n_points as f64 / w[0].n_points as f64).ln();
            [
                (w[0].minus_equality_gap / w[1].minus_equality_gap).ln() / ratio,
                (w[0].plus_equality_gap / w[1].plus_equality_gap).ln() / ratio,
            ]
        })
        .reduce(f64::min);
    let finest = rows.last();
    let passed = finest
        .is_some_and(|r| r.minus_equality_gap < config.witness_gap && r.plus_equality_gap < config.witness_gap)
        && observed_order.map_or(rows.len() == 1, |o| o >= config.witness_min_order);
    Ok(WitnessReport {
        c,
        y,
        rows,
        observed_order,
        passed,
    })
}

/// Runs every gap evaluator over the smooth presets (with `params`) and over
/// `config.random_fields` random band-limited fields with random parameters.
pub fn run_inequality_suite(
    grid: &Arc<Grid>,
    params: &Parameters,
    config: &SuiteConfig,
    seed: u64,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let op = operator(grid, params, config.corrupt_operator);
    let presets = [
        Preset::gaussian_bump(1.0),
        Preset::gaussian_derivative(1.0),
        Preset::SechBump {
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
        },
    ];
    for preset in &presets {
        rows.extend(gap_rows(
            preset.name(),
            &preset.evaluate(grid, params)?,
            &op,
            config.tolerance,
        )?);
    }
    for i in 0..config.random_fields {
        let p = random_parameters(&mut rng);
        let u = random_band_limited(grid, &mut rng, config.max_mode);
        let op = operator(grid, &p, config.corrupt_operator);
        rows.extend(gap_rows(&format!("random_{i:03}"), &u, &op, config.tolerance)?);
    }
    let witness = peakon_witness(params, grid.half_length(), config)?;
    let worst_gap = rows.iter().map(|r| r.min_gap).fold(f64::INFINITY, f64::min);
    let passed = witness.passed && rows.iter().all(|r| r.passed);
    Ok(SuiteReport {
        seed,
        rows,
        witness,
        worst_gap,
        passed,
    })
}
