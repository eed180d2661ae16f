//! Uniform periodic grid on `[-L, L)` and sampled fields living on it.
//!
//! The grid owns its FFT plans, so every spectral operation in the crate
//! (differentiation, the Helmholtz inverse, dealiasing, off-grid evaluation)
//! goes through the same transform and the same wavenumber table.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub struct Grid {
    half_length: f64,
    n_points: usize,
    dx: f64,
    wavenumbers: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("half_length", &self.half_length)
            .field("n_points", &self.n_points)
            .field("dx", &self.dx)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.half_length == other.half_length && self.n_points == other.n_points
    }
}

impl Grid {
    /// Builds the grid `x_j = -L + j dx`, `dx = 2L / N`. `N` must be even and at least 16.
    pub fn new(half_length: f64, n_points: usize) -> Result<Arc<Self>> {
        if !(half_length > 0.0) || !half_length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "half length must be positive, got {half_length}"
            )));
        }
        if n_points < 16 || !n_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "point count must be even and >= 16, got {n_points}"
            )));
        }
        let dx = 2.0 * half_length / n_points as f64;
        let base = std::f64::consts::PI / half_length;
        let wavenumbers = (0..n_points)
            .map(|j| {
                let signed = if j <= n_points / 2 {
                    j as i64
                } else {
                    j as i64 - n_points as i64
                };
                base * signed as f64
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            half_length,
            n_points,
            dx,
            wavenumbers,
            forward: planner.plan_fft_forward(n_points),
            inverse: planner.plan_fft_inverse(n_points),
        }))
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|j| self.node(j))
    }

    /// Signed angular wavenumber of FFT bin `j`. The Nyquist bin carries `+pi N / 2L`.
    pub fn wavenumber(&self, j: usize) -> f64 {
        self.wavenumbers[j]
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub(crate) fn nyquist(&self) -> usize {
        self.n_points / 2
    }

    /// Highest bin index retained by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> usize {
        self.n_points / 3
    }

    pub(crate) fn spectrum(&self, values: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(values.len(), self.n_points);
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    pub(crate) fn synthesize(&self, mut hat: Vec<Complex64>) -> Vec<f64> {
        self.inverse.process(&mut hat);
        let scale = 1.0 / self.n_points as f64;
        hat.into_iter().map(|c| c.re * scale).collect()
    }

    /// Multiplies by `i xi`; the Nyquist bin of an odd-order derivative is zeroed.
    pub(crate) fn differentiate_spectrum(&self, hat: &[Complex64]) -> Vec<Complex64> {
        let nyq = self.nyquist();
        hat.iter()
            .zip(&self.wavenumbers)
            .enumerate()
            .map(|(j, (c, &xi))| {
                if j == nyq {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, xi)
                }
            })
            .collect()
    }

    pub(crate) fn dealias(&self, hat: &mut [Complex64]) {
        let cutoff = self.dealias_cutoff();
        let n = self.n_points;
        for (j, c) in hat.iter_mut().enumerate() {
            let index = j.min(n - j);
            if index > cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Evaluates the trigonometric interpolant with spectrum `hat` at an arbitrary `x`.
    pub(crate) fn interpolate(&self, hat: &[Complex64], x: f64) -> f64 {
        let n = self.n_points;
        let nyq = self.nyquist();
        let s = x + self.half_length;
        let base = std::f64::consts::PI / self.half_length;
        let step = Complex64::from_polar(1.0, base * s);
        let mut z = step;
        let mut acc = 0.0;
        for (j, c) in hat.iter().enumerate().take(nyq).skip(1) {
            // re-anchor the recurrence so rounding does not accumulate
            if j % 256 == 0 {
                z = Complex64::from_polar(1.0, base * s * j as f64);
            }
            acc += (c * z).re;
            z *= step;
        }
        let nyquist = hat[nyq].re * (base * nyq as f64 * s).cos();
        (hat[0].re + 2.0 * acc + nyquist) / n as f64
    }

    /// Values of the trigonometric interpolant on a grid refined by `factor`.
    pub(crate) fn upsample(&self, values: &[f64], factor: usize) -> Vec<f64> {
        let n = self.n_points;
        let m = n * factor;
        let hat = self.spectrum(values);
        let nyq = self.nyquist();
        let mut padded = vec![Complex64::new(0.0, 0.0); m];
        padded[..nyq].copy_from_slice(&hat[..nyq]);
        for j in 1..nyq {
            padded[m - j] = hat[n - j];
        }
        if factor > 1 {
            padded[nyq] = hat[nyq] * 0.5;
            padded[m - nyq] = hat[nyq] * 0.5;
        } else {
            padded[nyq] = hat[nyq];
        }
        let inverse = FftPlanner::new().plan_fft_inverse(m);
        inverse.process(&mut padded);
        let scale = 1.0 / n as f64;
        padded.into_iter().map(|c| c.re * scale).collect()
    }

    /// Applies a Fourier multiplier to real samples.
    pub(crate) fn apply_symbol(&self, values: &[f64], symbol: &[Complex64]) -> Vec<f64> {
        let mut hat = self.spectrum(values);
        for (c, s) in hat.iter_mut().zip(symbol) {
            *c *= s;
        }
        self.synthesize(hat)
    }
}

/// Real samples of a function on a [`Grid`].
#[derive(Clone, Debug)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
    post_blowup: bool,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values == other.values
    }
}

impl Field {
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: Arc::clone(grid),
            values: grid.nodes().map(f).collect(),
            post_blowup: false,
        }
    }

    /// Wraps samples, checking length and finiteness.
    pub fn from_samples(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::LengthMismatch {
                expected: grid.n_points(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field samples"));
        }
        Ok(Self::from_raw(grid, values))
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Arc<Grid>, value: f64) -> Self {
        Self::from_raw(grid, vec![value; grid.n_points()])
    }

    pub(crate) fn from_raw(grid: &Arc<Grid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        Self {
            grid: Arc::clone(grid),
            values,
            post_blowup: false,
        }
    }

    /// Marks the field as a post-blowup snapshot, where non-finite samples are allowed.
    pub(crate) fn tagged_post_blowup(mut self) -> Self {
        self.post_blowup = true;
        self
    }

    pub fn is_post_blowup(&self) -> bool {
        self.post_blowup
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn same_grid(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// Spectral derivative; exact for every resolved Fourier mode.
    pub fn derivative(&self) -> Field {
        let hat = self.grid.spectrum(&self.values);
        let values = self.grid.synthesize(self.grid.differentiate_spectrum(&hat));
        Field::from_raw(&self.grid, values)
    }

    pub fn second_derivative(&self) -> Field {
        let symbol: Vec<Complex64> = self
            .grid
            .wavenumbers()
            .iter()
            .map(|&xi| Complex64::new(-xi * xi, 0.0))
            .collect();
        Field::from_raw(&self.grid, self.grid.apply_symbol(&self.values, &symbol))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field::from_raw(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(Field::from_raw(
            &self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn scaled(&self, factor: f64) -> Field {
        self.map(|v| factor * v)
    }

    /// Trapezoid rule on the periodic grid: `dx * sum`.
    pub fn integral(&self) -> f64 {
        self.grid.dx() * self.values.iter().sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn argmin(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) },
            )
            .0
    }

    /// Value of the trigonometric interpolant at an off-grid point.
    pub fn interpolate(&self, x: f64) -> f64 {
        self.grid.interpolate(&self.grid.spectrum(&self.values), x)
    }

    pub(crate) fn spectrum(&self) -> Vec<Complex64> {
        self.grid.spectrum(&self.values)
    }
}

/// Reusable off-grid evaluator: transforms once, evaluates many times.
#[derive(Clone, Debug)]
pub struct Interpolant {
    grid: Arc<Grid>,
    hat: Vec<Complex64>,
}

impl Interpolant {
    pub fn new(field: &Field) -> Self {
        Self {
            grid: Arc::clone(field.grid()),
            hat: field.spectrum(),
        }
    }

    /// Interpolant of the spatial derivative.
    pub fn derivative(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            hat: self.grid.differentiate_spectrum(&self.hat),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.grid.interpolate(&self.hat, x)
    }
}
