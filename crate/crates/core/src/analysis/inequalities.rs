//! Pointwise gap fields for the sharp convolution inequalities and the
//! `H^1_alpha -> L^inf` embedding.
//!
//! Each gap is `LHS - RHS`; the inequalities predict it is nonnegative.

use serde::Serialize;

use crate::error::Result;
use crate::grid::Field;
use crate::helmholtz::NonlocalOperator;
use crate::params::Parameters;

use super::functionals::h_alpha_norm;

#[derive(Clone, Debug)]
pub struct GapField {
    pub field: Field,
    pub min_gap: f64,
    pub argmin_x: f64,
}

/// Summary of a gap field without the samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapSummary {
    pub min_gap: f64,
    pub argmin_x: f64,
}

impl GapField {
    pub fn new(field: Field) -> Self {
        let j = field.argmin();
        Self {
            min_gap: field.values()[j],
            argmin_x: field.grid().node(j),
            field,
        }
    }

    pub fn summary(&self) -> GapSummary {
        GapSummary {
            min_gap: self.min_gap,
            argmin_x: self.argmin_x,
        }
    }

    /// Gap at the node nearest to `x`.
    pub fn at(&self, x: f64) -> f64 {
        let grid = self.field.grid();
        let j = (((x + grid.half_length()) / grid.dx()).round() as usize) % grid.n_points();
        self.field.values()[j]
    }
}

/// Gaps of `(p -/+ alpha p') * (alpha^2/2 u_x^2 + u^2 + 2k u) >= (u + k)^2 / 2 - k^2`,
/// returned as `(minus, plus)`. Equality holds for `u = c e^{-|x - y|/alpha} - k`:
/// on `x <= y` for the minus kernel, on `x >= y` for the plus kernel.
pub fn lemma31_gaps(u: &Field, op: &NonlocalOperator) -> Result<(GapField, GapField)> {
    lemma31_gaps_with_slope(u, &u.derivative(), op)
}

/// [`lemma31_gaps`] with a caller-supplied slope field, for profiles whose
/// spectral derivative is polluted by a kink.
pub fn lemma31_gaps_with_slope(u: &Field, ux: &Field, op: &NonlocalOperator) -> Result<(GapField, GapField)> {
    let params = op.params();
    let half_a2 = 0.5 * params.alpha() * params.alpha();
    let k = params.k();
    let flux = u.zip_map(ux, |v, d| half_a2 * d * d + v * v + 2.0 * k * v)?;
    let (minus, plus) = op.one_sided_convolutions(&flux);
    let rhs = u.map(|v| 0.5 * (v + k) * (v + k) - k * k);
    Ok((
        GapField::new(minus.zip_map(&rhs, |a, b| a - b)?),
        GapField::new(plus.zip_map(&rhs, |a, b| a - b)?),
    ))
}

/// Gap of `p * (alpha^2/2 u_x^2 + (u + k)^2) >= (u + k)^2 / 2`.
pub fn lemma32_gap(u: &Field, op: &NonlocalOperator) -> Result<GapField> {
    lemma32_gap_with_slope(u, &u.derivative(), op)
}

pub fn lemma32_gap_with_slope(u: &Field, ux: &Field, op: &NonlocalOperator) -> Result<GapField> {
    let params = op.params();
    let half_a2 = 0.5 * params.alpha() * params.alpha();
    let k = params.k();
    let flux = u.zip_map(ux, |v, d| half_a2 * d * d + (v + k) * (v + k))?;
    let lhs = op.apply_q(&flux);
    Ok(GapField::new(lhs.zip_map(u, |a, v| a - 0.5 * (v + k) * (v + k))?))
}

/// `||u||_{H^1_alpha} / sqrt(2 alpha) - max |u|`.
pub fn sobolev_gap(u: &Field, params: &Parameters) -> f64 {
    h_alpha_norm(u, params) / (2.0 * params.alpha()).sqrt() - u.max_abs()
}
