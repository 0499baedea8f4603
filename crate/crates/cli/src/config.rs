//! JSON run configuration and its validation.

use std::path::{Path, PathBuf};

use moutard_core::{
    build_grid_with_step, AnnulusGrid, ConstantOverrides, Coupling, Energy, OmegaMode,
    PathQuadrature, PhysicalPoint, QuadratureConfig, ScenarioConfig,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridParams {
    pub r_min: f64,
    pub r_max: f64,
    pub n_radial: usize,
    pub n_angular: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            r_min: 0.05,
            r_max: 20.0,
            n_radial: 16,
            n_angular: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub energy: f64,
    pub alpha: Option<f64>,
    pub grid: GridParams,
    /// Physical points as `[x1, x2]`.
    pub z_samples: Vec<[f64; 2]>,
    /// Largest relative finite-difference step; checks also use `/2`, `/4`.
    pub fd_step: f64,
    pub quadrature: QuadratureConfig,
    pub omega_mode: OmegaMode,
    pub path_quadrature: PathQuadrature,
    pub path_panels: usize,
    pub output_dir: PathBuf,
    pub seed_overrides: Option<ConstantOverrides>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            energy: -1.0,
            alpha: None,
            grid: GridParams::default(),
            z_samples: vec![[1.0, 0.5]],
            fd_step: 1e-2,
            quadrature: QuadratureConfig::default(),
            omega_mode: OmegaMode::ClosedForm,
            path_quadrature: PathQuadrature::default(),
            path_panels: 1,
            output_dir: PathBuf::from("moutard-out"),
            seed_overrides: None,
        }
    }
}

/// A field-level configuration problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn field(name: &str, msg: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("{name}: {msg}"))
}

/// Validated, typed view of a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Validated {
    pub energy: Energy,
    pub alpha: Option<Coupling>,
    pub grid: AnnulusGrid,
    pub z_samples: Vec<PhysicalPoint>,
    pub fd_step: f64,
    pub scenario: ScenarioConfig,
}

impl Validated {
    pub fn require_alpha(&self) -> Result<Coupling, ConfigError> {
        self.alpha
            .ok_or_else(|| field("alpha", "required by this command"))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| field("config", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| field("config", format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<Validated, ConfigError> {
        if !(self.energy.is_finite() && self.energy < 0.0) {
            return Err(field(
                "energy",
                format!("must be finite and negative, got {}", self.energy),
            ));
        }
        let energy = Energy::new(self.energy).map_err(|e| field("energy", e))?;
        let alpha = match self.alpha {
            None => None,
            Some(a) => Some(Coupling::new(a).map_err(|e| field("alpha", e))?),
        };
        if !(self.fd_step > 0.0 && self.fd_step < 0.1) {
            return Err(field(
                "fd_step",
                format!("must lie in (0, 0.1), got {}", self.fd_step),
            ));
        }
        let g = &self.grid;
        if !(g.r_min > 0.0 && g.r_min < 1.0) {
            return Err(field(
                "grid.r_min",
                format!("must lie in (0, 1), got {}", g.r_min),
            ));
        }
        if !(g.r_max > 1.0 && g.r_max.is_finite()) {
            return Err(field(
                "grid.r_max",
                format!("must be finite and above 1, got {}", g.r_max),
            ));
        }
        if g.n_radial < 2 {
            return Err(field(
                "grid.n_radial",
                format!("must be at least 2, got {}", g.n_radial),
            ));
        }
        if g.n_angular < 1 {
            return Err(field("grid.n_angular", "must be at least 1"));
        }
        let grid = build_grid_with_step(
            g.r_min,
            g.r_max,
            g.n_radial,
            g.n_angular,
            energy,
            alpha,
            self.fd_step,
        )
        .map_err(|e| field("grid", e))?;
        if self.z_samples.is_empty() {
            return Err(field("z_samples", "at least one point is required"));
        }
        let mut z_samples = Vec::with_capacity(self.z_samples.len());
        for (i, [x1, x2]) in self.z_samples.iter().enumerate() {
            if !(x1.is_finite() && x2.is_finite()) {
                return Err(field(
                    &format!("z_samples[{i}]"),
                    "coordinates must be finite",
                ));
            }
            if *x1 == 0.0 && *x2 == 0.0 {
                return Err(field(
                    &format!("z_samples[{i}]"),
                    "z = 0 is the support of the potential",
                ));
            }
            z_samples.push(PhysicalPoint(Complex64::new(*x1, *x2)));
        }
        self.quadrature
            .validate()
            .map_err(|e| field("quadrature", e))?;
        let pq = &self.path_quadrature;
        if pq.order == 0 || pq.max_panels == 0 || !(pq.rel_tol > 0.0 && pq.abs_tol > 0.0) {
            return Err(field(
                "path_quadrature",
                "order, max_panels and tolerances must be positive",
            ));
        }
        if self.path_panels == 0 {
            return Err(field("path_panels", "must be at least 1"));
        }
        if self.output_dir.as_os_str().is_empty() {
            return Err(field("output_dir", "must not be empty"));
        }
        Ok(Validated {
            energy,
            alpha,
            grid,
            z_samples,
            fd_step: self.fd_step,
            scenario: ScenarioConfig {
                quadrature: self.quadrature,
                omega_mode: self.omega_mode,
                path_quadrature: self.path_quadrature,
                path_panels: self.path_panels,
                overrides: self.seed_overrides.unwrap_or_default(),
            },
        })
    }
}
