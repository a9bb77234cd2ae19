//! Run configuration: a single JSON document, unknown keys rejected.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baths::{rate_set, BathSpec, RateSet, SpectralDensity};
use crate::dynamics::{build_liouvillian, Liouvillian, Model};
use crate::error::{Error, Result};
use crate::model::{diagonalize, Basis, DensityMatrix, Eigensystem, SystemParams};
use crate::{Mat2, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    T1,
    Delta,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::T1 => "t1",
            SweepVariable::Delta => "delta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: GridScale,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::Config(format!(
                "sweep needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::Config(format!(
                "sweep requires start < stop, got {}..{}",
                self.start, self.stop
            )));
        }
        if self.start < 0.0 {
            return Err(Error::Config(
                "swept physical parameters must be non-negative".into(),
            ));
        }
        if self.scale == GridScale::Log && self.start <= 0.0 {
            return Err(Error::Config("log-spaced sweep needs start > 0".into()));
        }
        Ok(())
    }

    /// Grid values in order; both endpoints are exact.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == n - 1 {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.scale {
                    GridScale::Linear => self.start + (self.stop - self.start) * f,
                    GridScale::Log => {
                        (self.start.ln() + (self.stop.ln() - self.start.ln()) * f).exp()
                    }
                }
            })
            .collect()
    }
}

/// Initial state for time evolution: a named preset or explicit site-basis entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Preset(StatePreset),
    Explicit(ExplicitState),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatePreset {
    Site1,
    Site2,
    Ground,
    Excited,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitState {
    pub rho11: f64,
    pub rho22: f64,
    #[serde(default)]
    pub rho12_re: f64,
    #[serde(default)]
    pub rho12_im: f64,
}

impl InitialState {
    /// Validated state in the site basis.
    pub fn density_matrix(&self, eig: &Eigensystem) -> Result<DensityMatrix> {
        let state = match self {
            InitialState::Preset(p) => match p {
                StatePreset::Site1 => DensityMatrix::diagonal(1.0, 0.0, Basis::Site)?,
                StatePreset::Site2 => DensityMatrix::diagonal(0.0, 1.0, Basis::Site)?,
                StatePreset::Excited => {
                    DensityMatrix::diagonal(1.0, 0.0, Basis::Eigen)?.to_basis(Basis::Site, eig)
                }
                StatePreset::Ground => {
                    DensityMatrix::diagonal(0.0, 1.0, Basis::Eigen)?.to_basis(Basis::Site, eig)
                }
                StatePreset::Mixed => DensityMatrix::maximally_mixed(Basis::Site),
            },
            InitialState::Explicit(e) => {
                let c = C64::new(e.rho12_re, e.rho12_im);
                DensityMatrix::new(
                    Mat2::new(C64::new(e.rho11, 0.0), c, c.conj(), C64::new(e.rho22, 0.0)),
                    Basis::Site,
                )?
            }
        };
        Ok(state)
    }
}

fn default_evolve_points() -> usize {
    101
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSpec {
    pub rho0: InitialState,
    #[serde(default)]
    pub t_start: f64,
    pub t_stop: f64,
    #[serde(default = "default_evolve_points")]
    pub points: usize,
}

impl EvolveSpec {
    pub fn times(&self) -> Result<Vec<f64>> {
        if !(self.t_start >= 0.0 && self.t_stop > self.t_start && self.t_stop.is_finite()) {
            return Err(Error::Config(format!(
                "evolve needs 0 <= t_start < t_stop, got {}..{}",
                self.t_start, self.t_stop
            )));
        }
        let grid = SweepSpec {
            variable: SweepVariable::T1,
            start: self.t_start,
            stop: self.t_stop,
            points: self.points,
            scale: GridScale::Linear,
        };
        grid.validate()?;
        Ok(grid.grid())
    }
}

fn one() -> f64 {
    1.0
}
fn half() -> f64 {
    0.5
}

/// Physical parameters plus the optional sweep and evolution requests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "one")]
    pub h: f64,
    #[serde(default = "half")]
    pub delta: f64,
    #[serde(default = "one")]
    pub kappa: f64,
    #[serde(default = "one")]
    pub exponent: f64,
    #[serde(default = "one")]
    pub t1: f64,
    #[serde(default = "half")]
    pub t2: f64,
    #[serde(default = "default_model")]
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Series name written into sweep records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn default_model() -> Model {
    Model::Global
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            h: 1.0,
            delta: 0.5,
            kappa: 1.0,
            exponent: 1.0,
            t1: 1.0,
            t2: 0.5,
            model: Model::Global,
            sweep: None,
            evolve: None,
            output: None,
            label: None,
        }
    }
}

/// A Liouvillian together with everything it was built from.
#[derive(Debug, Clone)]
pub struct System {
    pub eig: Eigensystem,
    pub baths: [BathSpec; 2],
    pub rates: RateSet,
    pub liouvillian: Liouvillian,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("t1", self.t1), ("t2", self.t2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        self.params().map_err(|e| Error::Config(e.to_string()))?;
        self.spectral().map_err(|e| Error::Config(e.to_string()))?;
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        if let Some(e) = &self.evolve {
            e.times()?;
            e.rho0
                .density_matrix(&diagonalize(&self.params()?))
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn params(&self) -> Result<SystemParams> {
        SystemParams::new(self.h, self.delta)
    }

    pub fn spectral(&self) -> Result<SpectralDensity> {
        SpectralDensity::new(self.kappa, self.exponent)
    }

    /// Copy with one physical parameter replaced.
    pub fn with_value(&self, variable: SweepVariable, value: f64) -> Self {
        let mut cfg = self.clone();
        match variable {
            SweepVariable::T1 => cfg.t1 = value,
            SweepVariable::Delta => cfg.delta = value,
        }
        cfg
    }

    pub fn with_model(&self, model: Model) -> Self {
        let mut cfg = self.clone();
        cfg.model = model;
        cfg
    }

    pub fn baths(&self, model: Model) -> Result<[BathSpec; 2]> {
        let j = self.spectral()?;
        let stats = model.statistics();
        Ok([
            BathSpec::new(self.t1, j, stats)?,
            BathSpec::new(self.t2, j, stats)?,
        ])
    }

    /// Builds the configured model.
    pub fn system(&self) -> Result<System> {
        self.system_for(self.model)
    }

    pub fn system_for(&self, model: Model) -> Result<System> {
        let eig = diagonalize(&self.params()?);
        let baths = self.baths(model)?;
        let rates = rate_set(&eig, &baths[0], &baths[1])?;
        let liouvillian = build_liouvillian(model, &eig, &rates)?;
        Ok(System {
            eig,
            baths,
            rates,
            liouvillian,
        })
    }
}

/// Built-in parameter sets reproducing the two heat-current figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `J_1` against `k_B T_1` in `[0.01h, 100h]` (200 log points), `k_B T_2 = 0.01h`,
    /// `delta in {0.01, 0.1, 0.5} h`.
    Fig2a,
    /// `J_1` against `delta` in `[0.01h, 20h]` (200 log points), `k_B T_2 = 0.1h`,
    /// `k_B T_1 in {0.2, 0.25, 0.3} h`.
    Fig2b,
}

pub const FIG2A_DELTAS: [f64; 3] = [0.01, 0.1, 0.5];
pub const FIG2B_T1S: [f64; 3] = [0.2, 0.25, 0.3];

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
        }
    }

    /// One configuration per curve, all with `h = 1`, ohmic `kappa = 1`, global model.
    pub fn expand(&self) -> Vec<RunConfig> {
        let base = RunConfig {
            h: 1.0,
            kappa: 1.0,
            exponent: 1.0,
            model: Model::Global,
            ..RunConfig::default()
        };
        match self {
            Preset::Fig2a => FIG2A_DELTAS
                .iter()
                .map(|&delta| RunConfig {
                    delta,
                    t2: 0.01,
                    sweep: Some(SweepSpec {
                        variable: SweepVariable::T1,
                        start: 0.01,
                        stop: 100.0,
                        points: 200,
                        scale: GridScale::Log,
                    }),
                    label: Some(format!("delta={delta}")),
                    ..base.clone()
                })
                .collect(),
            Preset::Fig2b => FIG2B_T1S
                .iter()
                .map(|&t1| RunConfig {
                    t1,
                    t2: 0.1,
                    sweep: Some(SweepSpec {
                        variable: SweepVariable::Delta,
                        start: 0.01,
                        stop: 20.0,
                        points: 200,
                        scale: GridScale::Log,
                    }),
                    label: Some(format!("t1={t1}")),
                    ..base.clone()
                })
                .collect(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2a" => Ok(Preset::Fig2a),
            "fig2b" => Ok(Preset::Fig2b),
            other => Err(Error::Config(format!("unknown preset '{other}'"))),
        }
    }
}
