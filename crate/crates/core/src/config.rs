//! JSON run configuration.
//!
//! Field names carry their unit as a suffix; values are converted to SI
//! here and nowhere else.
//!
//! ```json
//! {
//!   "medium": {
//!     "number_density_m3": 2.7e25,
//!     "scattering_length_m": 6e-15,
//!     "hard_sphere_diameter_m": 3e-10,
//!     "thickness_m": 0.01
//!   },
//!   "beam": { "wavelength_angstrom": 1.8 },
//!   "structure": { "model": "hard_sphere" }
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants::ANGSTROM;
use crate::error::{Error, Result};
use crate::params::{Beam, Medium};
use crate::structure::StructureModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub medium: MediumConfig,
    pub beam: BeamConfig,
    #[serde(default)]
    pub structure: StructureConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Energy-shell broadening, reserved for inelastic extensions; the static model ignores it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub number_density_m3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub number_density_cm3: Option<f64>,
    pub scattering_length_m: f64,
    #[serde(default)]
    pub hard_sphere_diameter_m: f64,
    pub thickness_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength_angstrom: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momentum_kg_m_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum StructureConfig {
    /// Dilute hard spheres with the medium's diameter and density.
    #[default]
    HardSphere,
    /// CSV of (q_in_inverse_meters, S).
    Tabulated { path: PathBuf },
    /// CSV of (r_in_meters, g); density from the medium.
    PairCorrelation { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_polar: usize,
    pub n_azimuth: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_polar: 16,
            n_azimuth: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    /// Defaults to 0.05 / (largest out-rate).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_store_every")]
    pub store_every: usize,
    /// Initially occupied direction; defaults to the forward one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j0: Option<usize>,
}

fn default_steps() -> usize {
    200
}

fn default_store_every() -> usize {
    1
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt_s: None,
            steps: default_steps(),
            store_every: default_store_every(),
            j0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("noptica_out"),
        }
    }
}

/// Validated SI parameters.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub medium: Medium,
    pub beam: Beam,
    pub model: StructureModel,
}

impl RunConfig {
    /// Read from `path`; relative structure-file paths are taken relative to it.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if let Some(base) = path.parent() {
            match &mut cfg.structure {
                StructureConfig::Tabulated { path: p } | StructureConfig::PairCorrelation { path: p } => {
                    if p.is_relative() {
                        *p = base.join(&*p);
                    }
                }
                StructureConfig::HardSphere => {}
            }
        }
        Ok(cfg)
    }

    pub fn medium(&self) -> Result<Medium> {
        let m = &self.medium;
        let density = match (m.number_density_m3, m.number_density_cm3) {
            (Some(v), None) => v,
            (None, Some(v)) => v * 1e6,
            _ => {
                return Err(Error::Config(
                    "medium needs exactly one of number_density_m3, number_density_cm3".into(),
                ))
            }
        };
        let medium = Medium::new(density, m.scattering_length_m, m.hard_sphere_diameter_m, m.thickness_m)?;
        match m.temperature_k {
            Some(t) => medium.with_temperature(t),
            None => Ok(medium),
        }
    }

    pub fn beam(&self) -> Result<Beam> {
        let b = &self.beam;
        match (b.wavelength_angstrom, b.wavelength_m, b.momentum_kg_m_s) {
            (Some(l), None, None) => Beam::from_wavelength(l * ANGSTROM),
            (None, Some(l), None) => Beam::from_wavelength(l),
            (None, None, Some(p)) => Beam::from_momentum(p),
            _ => Err(Error::Config(
                "beam needs exactly one of wavelength_angstrom, wavelength_m, momentum_kg_m_s".into(),
            )),
        }
    }

    pub fn model(&self, medium: &Medium) -> Result<StructureModel> {
        match &self.structure {
            StructureConfig::HardSphere => Ok(StructureModel::hard_sphere_for(medium)),
            StructureConfig::Tabulated { path } => StructureModel::read_tabulated_csv(path),
            StructureConfig::PairCorrelation { path } => {
                StructureModel::read_pair_correlation_csv(path, medium.number_density())
            }
        }
    }

    /// Check every section and build the SI parameter set.
    pub fn resolve(&self) -> Result<Resolved> {
        let medium = self.medium()?;
        let beam = self.beam()?;
        let model = self.model(&medium)?;
        if self.grid.n_polar < 2 || self.grid.n_azimuth < 1 {
            return Err(Error::Config(format!(
                "grid needs n_polar >= 2 and n_azimuth >= 1, got {} x {}",
                self.grid.n_polar, self.grid.n_azimuth
            )));
        }
        if let Some(dt) = self.integrator.dt_s {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::Config(format!("integrator dt_s must be positive, got {dt:e}")));
            }
        }
        if self.integrator.store_every == 0 {
            return Err(Error::Config("integrator store_every must be >= 1".into()));
        }
        if let Some(eps) = self.epsilon {
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(Error::Config(format!("epsilon must be >= 0, got {eps:e}")));
            }
        }
        Ok(Resolved { medium, beam, model })
    }
}
