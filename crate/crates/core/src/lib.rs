//! Faddeev eigenfunctions at negative energy, point-potential spectral data
//! and Moutard-type transforms between the vacuum and the point potential.
//!
//! ```
//! use moutard_core::{singular_circles, Coupling, Energy};
//!
//! let set = singular_circles(Energy::new(-1.0).unwrap(), Coupling::new(std::f64::consts::PI).unwrap());
//! assert!((set.radii[1] - 2f64.exp()).abs() < 1e-14);
//! ```

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fields;
pub mod gaf;
pub mod green;
pub mod moutard;
pub mod omega;
pub mod point;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod tolerances;

pub use error::{Error, Result};
pub use gaf::{
    build_grid, build_grid_with_step, AnnulusGrid, Band, LambdaField, PointResidual, ResidualReport,
};
pub use green::{GreenEval, GreenMethod, QuadratureConfig};
pub use moutard::{
    round_trip, run_annihilation, run_creation, scenario_grid, scenario_seed, verify_seed, Check,
    ConstantOverrides, MoutardSeed, OmegaMode, Scenario, ScenarioConfig, ScenarioResult,
};
pub use omega::{
    omega_closed, IntegrationPath, OmegaClosedForm, OmegaConstants, OmegaContext, OmegaKind,
    PathQuadrature,
};
pub use point::{singular_circles, Coupling, PointPotential, SingularSet};
pub use spectral::{Domain, Energy, KVector, PhysicalPoint, SpectralParam};
