//! Run configuration, read from TOML. Every section and key is optional;
//! command-line flags override file values.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::SuiteConfig;
use crate::error::{Error, Result};
use crate::evolution::SolverConfig;
use crate::params::{Parameters, RawParameters};
use crate::presets::Preset;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    #[default]
    Dgh,
    Dgh2,
}

/// An initial field: a named preset with numeric arguments, or a file of samples.
///
/// ```toml
/// [initial]
/// preset = "gaussian_derivative"
/// a = 1.0
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// CSV with a header row; the first column holds one value per grid node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_file: Option<PathBuf>,
    #[serde(flatten)]
    pub args: BTreeMap<String, f64>,
}

impl FieldSpec {
    pub fn preset(name: &str, args: &[(&str, f64)]) -> Self {
        Self {
            preset: Some(name.to_string()),
            samples_file: None,
            args: args.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }

    /// Resolves to a [`Preset`]; relative sample paths are taken from `base_dir`.
    pub fn resolve(&self, base_dir: &Path) -> Result<Preset> {
        match (&self.preset, &self.samples_file) {
            (Some(_), Some(_)) => Err(Error::Config("give either `preset` or `samples_file`, not both".into())),
            (None, None) => Err(Error::Config("field spec needs `preset` or `samples_file`".into())),
            (Some(name), None) => Preset::parse(name, &self.args, None),
            (None, Some(path)) => {
                let samples = read_samples(&base_dir.join(path))?;
                Ok(Preset::FromSamples { samples })
            }
        }
    }
}

fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let mut reader = csv::Reader::from_path(path)?;
    reader
        .records()
        .map(|record| {
            let record = record?;
            let cell = record.get(0).unwrap_or("").trim();
            cell.parse::<f64>()
                .map_err(|_| Error::Config(format!("{}: cannot parse sample `{cell}`", path.display())))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub half_length: f64,
    pub n_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            half_length: 20.0,
            n_points: 4096,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CharacteristicsConfig {
    /// Seeds `x0`; when empty the criterion's best point is used.
    pub seeds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("dgh-out"),
        }
    }
}

/// Sweep axes. An absent axis holds the base value; a present but empty axis is an error.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Factors applied to the initial preset's amplitude.
    pub amplitudes: Option<Vec<f64>>,
    pub c0: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub equation: Equation,
    /// Seed for the randomized inequality suite.
    pub seed: u64,
    /// Worker threads for sweeps and characteristics; 0 uses all cores.
    pub workers: usize,
    pub parameters: RawParameters,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub initial: FieldSpec,
    /// Initial `rho_tilde`; required for `dgh2`.
    pub density: Option<FieldSpec>,
    pub characteristics: CharacteristicsConfig,
    pub output: OutputConfig,
    pub lemmas: SuiteConfig,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            equation: Equation::Dgh,
            seed: 20240917,
            workers: 0,
            parameters: RawParameters::default(),
            grid: GridConfig::default(),
            solver: SolverConfig::default(),
            initial: FieldSpec::preset("gaussian_derivative", &[("a", 1.0)]),
            density: None,
            characteristics: CharacteristicsConfig::default(),
            output: OutputConfig::default(),
            lemmas: SuiteConfig::default(),
            sweep: SweepConfig::default(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub c0: Option<f64>,
    pub half_length: Option<f64>,
    pub n_points: Option<usize>,
    pub t_max: Option<f64>,
    pub cfl: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path`, or returns the defaults when no path is given. The second
    /// value is the directory relative sample paths are resolved against.
    pub fn load(path: Option<&Path>) -> Result<(Self, PathBuf)> {
        match path {
            None => Ok((Self::default(), PathBuf::from("."))),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                Ok((Self::from_toml(&text)?, base))
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($target:expr, $value:expr) => {
                if let Some(v) = $value.clone() {
                    $target = v;
                }
            };
        }
        set!(self.output.dir, o.out);
        set!(self.seed, o.seed);
        set!(self.workers, o.workers);
        set!(self.parameters.alpha, o.alpha);
        set!(self.parameters.gamma, o.gamma);
        set!(self.parameters.c0, o.c0);
        set!(self.grid.half_length, o.half_length);
        set!(self.grid.n_points, o.n_points);
        set!(self.solver.t_max, o.t_max);
        set!(self.solver.cfl, o.cfl);
    }

    pub fn params(&self) -> Result<Parameters> {
        Parameters::try_from(self.parameters)
    }

    /// Checks everything that can be checked without building fields.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.solver.validate()?;
        crate::grid::Grid::new(self.grid.half_length, self.grid.n_points)?;
        if self.equation == Equation::Dgh2 && self.density.is_none() {
            return Err(Error::Config("equation = \"dgh2\" needs a [density] section".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn sections_and_preset_arguments() {
        let cfg = RunConfig::from_toml(
            r#"
            equation = "dgh2"
            [parameters]
            alpha = 1.5
            gamma = 0.0
            c0 = 0.2
            [grid]
            n_points = 1024
            [initial]
            preset = "gaussian_bump"
            amplitude = 0.5
            width = 2.0
            [density]
            preset = "gaussian_bump"
            amplitude = -1.0
            [sweep]
            amplitudes = [0.5, 1.0]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.equation, Equation::Dgh2);
        assert_eq!(cfg.grid.n_points, 1024);
        assert_eq!(cfg.grid.half_length, 20.0);
        assert_eq!(
            cfg.initial.resolve(Path::new(".")).unwrap(),
            Preset::GaussianBump {
                amplitude: 0.5,
                center: 0.0,
                width: 2.0
            }
        );
        assert_eq!(cfg.sweep.amplitudes, Some(vec![0.5, 1.0]));
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(RunConfig::from_toml("[grid]\nnpoints = 3").is_err());
        let cfg = RunConfig::from_toml("[parameters]\nalpha = -1.0\ngamma = 0.0\nc0 = 0.0").unwrap();
        assert!(cfg.validate().is_err());
        let cfg = RunConfig::from_toml("equation = \"dgh2\"").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = RunConfig::default();
        cfg.apply(&Overrides {
            alpha: Some(2.0),
            n_points: Some(512),
            t_max: Some(1.0),
            ..Overrides::default()
        });
        assert_eq!(cfg.parameters.alpha, 2.0);
        assert_eq!(cfg.grid.n_points, 512);
        assert_eq!(cfg.solver.t_max, 1.0);
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn samples_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("u0.csv"), "u\n1.0\n2.5\n-3e-1\n").unwrap();
        let spec = FieldSpec {
            preset: None,
            samples_file: Some("u0.csv".into()),
            args: BTreeMap::new(),
        };
        assert_eq!(
            spec.resolve(dir.path()).unwrap(),
            Preset::FromSamples {
                samples: vec![1.0, 2.5, -0.3]
            }
        );
    }
}
