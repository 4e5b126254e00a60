//! Experiment configuration: a flat TOML document, or the `config` object
//! of a previously written manifest.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use hobo_core::{coefficients_from_physical, Grid, ModelCoefficients, PhysicalParams, Profile, RealField};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    EpsilonSweep,
    ScalingCheck,
    Conservation,
    FlowmapContinuity,
    GaugeDiagnose,
    Coeffs,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::EpsilonSweep => "epsilon-sweep",
            ExperimentKind::ScalingCheck => "scaling-check",
            ExperimentKind::Conservation => "conservation",
            ExperimentKind::FlowmapContinuity => "flowmap-continuity",
            ExperimentKind::GaugeDiagnose => "gauge-diagnose",
            ExperimentKind::Coeffs => "coeffs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Hbo,
    Bo,
    Ilw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileName {
    Gaussian,
    Sech2,
    WavePacket,
    /// Random band-limited field drawn from `seed`.
    Random,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Band {
    High,
    Low,
}

/// Every key is optional in the file; missing keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: Option<ExperimentKind>,

    pub length: f64,
    pub points: usize,
    /// Grid used by sweep members with `epsilon < fine_below_epsilon`.
    pub points_fine: usize,
    pub fine_below_epsilon: f64,

    pub model: ModelName,
    pub rho: f64,
    pub rho1: f64,
    pub h1: f64,
    pub g: f64,
    /// Direct coefficients; when all four are set they replace the
    /// physical map.
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub epsilon: f64,
    pub ilw_depth: f64,
    pub ilw_a1: f64,
    pub ilw_a2: f64,

    pub profile: ProfileName,
    pub amplitude: f64,
    /// Defaults to the middle of the domain.
    pub center: Option<f64>,
    pub width: f64,
    pub wavenumber: f64,
    /// Rescale the profile to this H¹ norm.
    pub h1_norm: Option<f64>,
    /// Highest mode of the random profile.
    pub random_modes: i64,
    pub seed: u64,

    pub dt: f64,
    pub t_end: f64,
    pub snapshot_stride: usize,
    pub dealias: bool,
    pub max_amplitude: f64,

    pub epsilons: Vec<f64>,
    pub override_compat: bool,
    /// Write measured wall time to the sweep CSV. Off by default so
    /// that repeated runs give identical CSVs.
    pub record_timing: bool,

    pub lambda: f64,
    pub scaling_time: f64,
    /// Step of both scaling runs; `scaling_time / lambda³` must be a multiple.
    pub scaling_dt: f64,

    pub deltas: Vec<f64>,
    pub perturbation_band: Band,
    pub perturbation_wavenumber: f64,
    pub perturbation_width: f64,

    /// Gauge diagnostics read snapshots from here instead of integrating.
    pub snapshot_dir: Option<PathBuf>,

    pub out: Option<PathBuf>,
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            length: 32.0 * PI,
            points: 1024,
            points_fine: 4096,
            fine_below_epsilon: 0.02,
            model: ModelName::Hbo,
            rho: 3f64.sqrt(),
            rho1: 1.0,
            h1: 1.0,
            g: 1.0,
            a: None,
            b: None,
            c: None,
            d: None,
            epsilon: 0.05,
            ilw_depth: 2.0,
            ilw_a1: 1.0,
            ilw_a2: 0.5,
            profile: ProfileName::Gaussian,
            amplitude: 1.0,
            center: None,
            width: 2.0,
            wavenumber: 18.0,
            h1_norm: Some(0.5),
            random_modes: 64,
            seed: 0,
            dt: 1e-3,
            t_end: 1.0,
            snapshot_stride: 100,
            dealias: true,
            max_amplitude: 1e3,
            epsilons: vec![0.1, 0.05, 0.025, 0.0125],
            override_compat: false,
            record_timing: false,
            lambda: 2.0,
            scaling_time: 0.5,
            scaling_dt: 5e-4,
            deltas: vec![1e-2, 1e-3, 1e-4],
            perturbation_band: Band::High,
            perturbation_wavenumber: 18.0,
            perturbation_width: 6.0,
            snapshot_dir: None,
            out: None,
            threads: 1,
        }
    }
}

#[derive(Deserialize)]
struct ManifestConfig {
    config: ExperimentConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Read a TOML config, or a `.json` manifest whose `config` is reused.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            Ok(serde_json::from_str::<ManifestConfig>(&text)?.config)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Ok(Grid::new(self.length, self.points)?)
    }

    pub fn fine_grid(&self) -> Result<Grid> {
        Ok(Grid::new(self.length, self.points_fine)?)
    }

    /// HBO-shaped `(a, b, c, d)` at `epsilon = 0`, before the model kind is
    /// applied.
    pub fn base_coefficients(&self) -> Result<ModelCoefficients> {
        match (self.a, self.b, self.c, self.d) {
            (Some(a), Some(b), Some(c), Some(d)) => {
                let co = ModelCoefficients::hbo(a, b, c, d, 0.0);
                co.validate()?;
                Ok(co)
            }
            (None, None, None, None) => {
                Ok(coefficients_from_physical(&PhysicalParams::new(self.rho, self.rho1, self.h1, self.g)?)?)
            }
            _ => Err(LabError::Config("set all of a, b, c, d or none of them".into())),
        }
    }

    /// Model coefficients at the given `epsilon`.
    pub fn coefficients_at(&self, epsilon: f64) -> Result<ModelCoefficients> {
        let base = self.base_coefficients()?;
        let co = match self.model {
            ModelName::Hbo => base.with_epsilon(epsilon),
            ModelName::Bo => base.benjamin_ono(),
            ModelName::Ilw => ModelCoefficients::ilw(
                self.ilw_a1,
                self.ilw_a2,
                base.b,
                base.c,
                base.d,
                epsilon,
                self.ilw_depth,
            ),
        };
        co.validate()?;
        Ok(co)
    }

    pub fn coefficients(&self) -> Result<ModelCoefficients> {
        self.coefficients_at(self.epsilon)
    }

    pub fn integrator(&self) -> hobo_core::IntegratorConfig {
        hobo_core::IntegratorConfig {
            dt: self.dt,
            t_end: self.t_end,
            snapshot_stride: self.snapshot_stride,
            dealias: self.dealias,
            max_amplitude: self.max_amplitude,
        }
    }

    /// Initial data sampled on `grid`.
    pub fn initial(&self, grid: &Grid) -> Result<RealField> {
        let center = self.center.unwrap_or(grid.length() / 2.0);
        let (amplitude, width) = (self.amplitude, self.width);
        let profile = match self.profile {
            ProfileName::Gaussian => Profile::Gaussian { amplitude, center, width },
            ProfileName::Sech2 => Profile::Sech2 { amplitude, center, width },
            ProfileName::WavePacket => {
                Profile::WavePacket { amplitude, center, width, wavenumber: self.wavenumber }
            }
            ProfileName::Random => return self.random_initial(grid),
            ProfileName::Zero => return Ok(RealField::zeros(grid)),
        };
        Ok(match self.h1_norm {
            Some(target) => profile.sample_with_h1_norm(grid, target)?,
            None => profile.sample(grid)?,
        })
    }

    fn random_initial(&self, grid: &Grid) -> Result<RealField> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        let mut s = hobo_core::SpectralField::zeros(grid);
        let top = self.random_modes.min(grid.points() as i64 / 3);
        for m in 1..=top {
            let c = hobo_core::Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                * (self.amplitude / (1.0 + m as f64));
            s.set_mode(m, c);
            s.set_mode(-m, c.conj());
        }
        let v = s.inverse()?;
        Ok(match self.h1_norm {
            Some(target) => {
                let n = hobo_core::observables::sobolev_norm(&v, 1.0)?;
                if n == 0.0 { v } else { v.scaled(target / n) }
            }
            None => v,
        })
    }
}
