//! Initial-condition presets.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::params::Parameters;

pub const PRESET_NAMES: [&str; 5] = [
    "gaussian_bump",
    "gaussian_derivative",
    "peakon_shifted",
    "sech_bump",
    "from_samples",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum Preset {
    /// `amplitude * exp(-(x - center)^2 / (2 width^2))`
    GaussianBump {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `-a (x - center) exp(-(x - center)^2 / 2)`; slope `-a` at the center.
    GaussianDerivative {
        a: f64,
        center: f64,
    },
    /// `c exp(-|x - y| / alpha) - k`; `k = None` uses the parameter set's `k`.
    PeakonShifted {
        c: f64,
        y: f64,
        k: Option<f64>,
    },
    /// `amplitude * sech((x - center) / width)`
    SechBump {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    FromSamples {
        samples: Vec<f64>,
    },
}

impl Preset {
    pub fn gaussian_bump(amplitude: f64) -> Self {
        Preset::GaussianBump {
            amplitude,
            center: 0.0,
            width: 1.0,
        }
    }

    pub fn gaussian_derivative(a: f64) -> Self {
        Preset::GaussianDerivative { a, center: 0.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::GaussianBump { .. } => "gaussian_bump",
            Preset::GaussianDerivative { .. } => "gaussian_derivative",
            Preset::PeakonShifted { .. } => "peakon_shifted",
            Preset::SechBump { .. } => "sech_bump",
            Preset::FromSamples { .. } => "from_samples",
        }
    }

    /// Builds a preset from its name and named numeric arguments; missing
    /// arguments take their defaults.
    pub fn parse(name: &str, args: &BTreeMap<String, f64>, samples: Option<Vec<f64>>) -> Result<Self> {
        let allowed: &[&str] = match name {
            "gaussian_bump" | "sech_bump" => &["amplitude", "center", "width"],
            "gaussian_derivative" => &["a", "center"],
            "peakon_shifted" => &["c", "y", "k"],
            _ => &[],
        };
        if let Some(key) = args.keys().find(|k| !allowed.contains(&k.as_str())) {
            if PRESET_NAMES.contains(&name) {
                return Err(Error::Config(format!("preset {name} has no argument `{key}`")));
            }
        }
        let get = |key: &str, default: f64| args.get(key).copied().unwrap_or(default);
        Ok(match name {
            "gaussian_bump" => Preset::GaussianBump {
                amplitude: get("amplitude", 1.0),
                center: get("center", 0.0),
                width: get("width", 1.0),
            },
            "gaussian_derivative" => Preset::GaussianDerivative {
                a: get("a", 1.0),
                center: get("center", 0.0),
            },
            "peakon_shifted" => Preset::PeakonShifted {
                c: get("c", 1.0),
                y: get("y", 0.0),
                k: args.get("k").copied(),
            },
            "sech_bump" => Preset::SechBump {
                amplitude: get("amplitude", 1.0),
                center: get("center", 0.0),
                width: get("width", 1.0),
            },
            "from_samples" => Preset::FromSamples {
                samples: samples.ok_or_else(|| Error::Config("from_samples needs sample values".into()))?,
            },
            other => return Err(Error::UnknownPreset(other.to_string())),
        })
    }

    /// Multiplies the preset's amplitude by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self.clone() {
            Preset::GaussianBump {
                amplitude,
                center,
                width,
            } => Preset::GaussianBump {
                amplitude: amplitude * factor,
                center,
                width,
            },
            Preset::GaussianDerivative { a, center } => Preset::GaussianDerivative { a: a * factor, center },
            Preset::PeakonShifted { c, y, k } => Preset::PeakonShifted { c: c * factor, y, k },
            Preset::SechBump {
                amplitude,
                center,
                width,
            } => Preset::SechBump {
                amplitude: amplitude * factor,
                center,
                width,
            },
            Preset::FromSamples { samples } => Preset::FromSamples {
                samples: samples.into_iter().map(|v| v * factor).collect(),
            },
        }
    }

    pub fn evaluate(&self, grid: &Arc<Grid>, params: &Parameters) -> Result<Field> {
        let field = match *self {
            Preset::GaussianBump {
                amplitude,
                center,
                width,
            } => Field::from_fn(grid, |x| {
                let s = (x - center) / width;
                amplitude * (-0.5 * s * s).exp()
            }),
            Preset::GaussianDerivative { a, center } => Field::from_fn(grid, |x| {
                let s = x - center;
                -a * s * (-0.5 * s * s).exp()
            }),
            Preset::PeakonShifted { c, y, k } => {
                let alpha = params.alpha();
                let k = k.unwrap_or(params.k());
                Field::from_fn(grid, |x| c * (-(x - y).abs() / alpha).exp() - k)
            }
            Preset::SechBump {
                amplitude,
                center,
                width,
            } => Field::from_fn(grid, |x| amplitude / ((x - center) / width).cosh()),
            Preset::FromSamples { ref samples } => return Field::from_samples(grid, samples.clone()),
        };
        if !field.is_finite() {
            return Err(Error::NonFinite("initial condition"));
        }
        Ok(field)
    }
}

/// Evaluates the named preset on `grid`.
pub fn ic_preset(
    name: &str,
    args: &BTreeMap<String, f64>,
    samples: Option<Vec<f64>>,
    grid: &Arc<Grid>,
    params: &Parameters,
) -> Result<Field> {
    Preset::parse(name, args, samples)?.evaluate(grid, params)
}
