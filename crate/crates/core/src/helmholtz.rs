//! The Green kernel `p(x) = exp(-|x| / alpha) / (2 alpha)` of `1 - alpha^2 d_xx`
//! and the convolution operators built from it.
//!
//! On the periodic grid, convolution with `p` is the Fourier multiplier
//! `1 / (1 + alpha^2 xi^2)`, which is exactly convolution with the periodized
//! kernel. At `L = 20 alpha` the periodization error is below `e^{-20}`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::grid::{Field, Grid};
use crate::params::Parameters;

pub fn green_kernel(x: f64, params: &Parameters) -> f64 {
    let alpha = params.alpha();
    (-(x / alpha).abs()).exp() / (2.0 * alpha)
}

/// `int_{-L}^{L} p(x) dx` by composite Simpson on each side of the kink at 0.
pub fn green_kernel_mass(params: &Parameters, half_length: f64, panels_per_side: usize) -> f64 {
    let panels = panels_per_side.max(2) + panels_per_side % 2;
    let h = half_length / panels as f64;
    let side = |sign: f64| {
        let f = |j: usize| green_kernel(sign * j as f64 * h, params);
        let mut acc = f(0) + f(panels);
        for j in 1..panels {
            acc += if j % 2 == 1 { 4.0 } else { 2.0 } * f(j);
        }
        acc * h / 3.0
    };
    side(1.0) + side(-1.0)
}

/// Precomputed Fourier symbols of `Q = (1 - alpha^2 d_xx)^{-1}` and `d_x Q`.
#[derive(Clone, Debug)]
pub struct NonlocalOperator {
    grid: Arc<Grid>,
    params: Parameters,
    q_symbol: Vec<f64>,
    dq_symbol: Vec<Complex64>,
}

impl NonlocalOperator {
    pub fn new(grid: &Arc<Grid>, params: &Parameters) -> Self {
        let a2 = params.alpha() * params.alpha();
        let nyq = grid.n_points() / 2;
        let q_symbol: Vec<f64> = grid
            .wavenumbers()
            .iter()
            .map(|&xi| 1.0 / (1.0 + a2 * xi * xi))
            .collect();
        let dq_symbol = grid
            .wavenumbers()
            .iter()
            .zip(&q_symbol)
            .enumerate()
            .map(|(j, (&xi, &q))| {
                if j == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, xi * q)
                }
            })
            .collect();
        Self {
            grid: Arc::clone(grid),
            params: *params,
            q_symbol,
            dq_symbol,
        }
    }

    /// Negative control for the inequality suite: flips the sign of the
    /// `d_x Q` symbol, which swaps the two one-sided kernels.
    #[doc(hidden)]
    pub fn with_flipped_derivative_symbol(mut self) -> Self {
        for s in &mut self.dq_symbol {
            *s = -*s;
        }
        self
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn params(&self) -> &Parameters {
        &self.params
    }

    pub fn q_symbol(&self) -> &[f64] {
        &self.q_symbol
    }

    pub fn dq_symbol(&self) -> &[Complex64] {
        &self.dq_symbol
    }

    /// `p * f`, i.e. the solution `g` of `(1 - alpha^2 d_xx) g = f`.
    pub fn apply_q(&self, f: &Field) -> Field {
        let hat = self.q_spectrum(&f.spectrum());
        Field::from_raw(&self.grid, self.grid.synthesize(hat))
    }

    /// `d_x (p * f)`.
    pub fn apply_dq(&self, f: &Field) -> Field {
        let hat = self.dq_spectrum(&f.spectrum());
        Field::from_raw(&self.grid, self.grid.synthesize(hat))
    }

    /// `((p - alpha p') * f, (p + alpha p') * f)`. The kernels are `2p` restricted to the
    /// positive and negative half-lines respectively.
    pub fn one_sided_convolutions(&self, f: &Field) -> (Field, Field) {
        let hat = f.spectrum();
        let alpha = self.params.alpha();
        let (minus, plus): (Vec<Complex64>, Vec<Complex64>) = hat
            .iter()
            .zip(self.q_symbol.iter().zip(&self.dq_symbol))
            .map(|(c, (&q, &dq))| (c * (q - alpha * dq), c * (q + alpha * dq)))
            .unzip();
        (
            Field::from_raw(&self.grid, self.grid.synthesize(minus)),
            Field::from_raw(&self.grid, self.grid.synthesize(plus)),
        )
    }

    pub(crate) fn q_spectrum(&self, hat: &[Complex64]) -> Vec<Complex64> {
        hat.iter().zip(&self.q_symbol).map(|(c, &s)| c * s).collect()
    }

    pub(crate) fn dq_spectrum(&self, hat: &[Complex64]) -> Vec<Complex64> {
        hat.iter().zip(&self.dq_symbol).map(|(c, s)| c * s).collect()
    }
}
