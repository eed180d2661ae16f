//! Physical constants of the DGH family and the derived transport constants.
//!
//! The nonlocal form of the equation only ever sees two combinations of the
//! raw constants: the transport shift `lambda = -gamma / alpha^2` and the
//! reaction constant `k = (c0 + gamma / alpha^2) / 2`. Both are computed once
//! here and never recomputed elsewhere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw physical constants as they appear in a config file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawParameters {
    pub alpha: f64,
    pub gamma: f64,
    pub c0: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

fn default_sigma() -> f64 {
    1.0
}

impl Default for RawParameters {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            gamma: 0.0,
            c0: 0.0,
            sigma: 1.0,
        }
    }
}

/// Validated parameter set with derived constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParameters")]
pub struct Parameters {
    alpha: f64,
    gamma: f64,
    c0: f64,
    sigma: f64,
    lambda: f64,
    k: f64,
    in_band: bool,
}

impl Parameters {
    /// Builds a parameter set. Rejects `alpha <= 0`; parameters outside the
    /// well-posedness band `gamma + c0 alpha^2 >= 0` are accepted and flagged.
    pub fn new(alpha: f64, gamma: f64, c0: f64, sigma: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidAlpha(alpha));
        }
        if !gamma.is_finite() || !c0.is_finite() || !sigma.is_finite() {
            return Err(Error::NonFinite("parameters"));
        }
        Ok(Self {
            alpha,
            gamma,
            c0,
            sigma,
            lambda: lambda_of(alpha, gamma),
            k: k_of(alpha, gamma, c0),
            in_band: gamma + c0 * alpha * alpha >= 0.0,
        })
    }

    /// The dispersionless Camassa-Holm case with the given length scale.
    pub fn camassa_holm(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0, 0.0, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Transport shift: characteristics move with speed `u + lambda`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Whether `gamma + c0 alpha^2 >= 0`.
    pub fn in_band(&self) -> bool {
        self.in_band
    }

    pub fn raw(&self) -> RawParameters {
        RawParameters {
            alpha: self.alpha,
            gamma: self.gamma,
            c0: self.c0,
            sigma: self.sigma,
        }
    }
}

impl TryFrom<RawParameters> for Parameters {
    type Error = Error;

    fn try_from(raw: RawParameters) -> Result<Self> {
        Self::new(raw.alpha, raw.gamma, raw.c0, raw.sigma)
    }
}

pub(crate) fn lambda_of(alpha: f64, gamma: f64) -> f64 {
    // `0.0 - x` rather than `-x` keeps gamma = 0 from producing -0.0 in outputs
    0.0 - gamma / (alpha * alpha)
}

pub(crate) fn k_of(alpha: f64, gamma: f64, c0: f64) -> f64 {
    0.5 * (c0 + gamma / (alpha * alpha))
}
