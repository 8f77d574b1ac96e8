//! Estimation of the thermal conductivity of the hidden section of a
//! two-material bar from one noisy heat-flux measurement at the far end.
//!
//! The bar is held at a fixed temperature at `x = 0` (inside the unknown
//! material A) and cools by convection at `x = L` (the accessible material B).
//! In steady state the temperature is piecewise linear and the end flux is an
//! explicit, strictly increasing function of `κ_A`, so it can be inverted in
//! closed form.
//!
//! - [`model`]: configuration, exact profile, end flux, interface kink angle.
//! - [`inverse`]: estimator, admissible measurement interval, error bounds.
//! - [`elasticity`]: error amplification `E(q)` and its asymptote.
//! - [`fd`]: independent finite-volume solver used as an oracle.
//! - [`materials`]: reference conductivities and user material files.
//! - [`experiments`]: noisy estimation campaigns and dataset generation.
//! - [`export`]: CSV / JSON datasets with run metadata.
//!
//! ```
//! use thermoprobe::{estimate_conductivity, heat_flux, RodConfig};
//!
//! let rod = RodConfig::new(10.0, 4.0, 100.0, 25.0, 10.0, 419.0)?;
//! let q = heat_flux(&rod, 73.0)?;
//! let kappa = estimate_conductivity(&rod, q)?;
//! assert!((kappa - 73.0).abs() < 1e-9);
//! # Ok::<(), thermoprobe::Error>(())
//! ```

pub mod elasticity;
pub mod error;
pub mod experiments;
pub mod export;
pub mod fd;
pub mod inverse;
pub mod materials;
pub mod model;

pub use elasticity::{
    elasticity, elasticity_derivative, elasticity_from_asymptote, sample_curve, vertical_asymptote,
    ElasticityCurve,
};
pub use error::{Error, Result};
pub use experiments::{
    curve_dataset, emit_profile, reference_example, run_experiment, summarize, ExperimentRow,
    ExperimentRun, ExperimentSpec, MeasurementPlan, NoiseMode, Summary,
};
pub use export::{format_significant, Dataset, RunMetadata};
pub use fd::{fd_solve, DiscreteSolution};
pub use inverse::{
    admissible_interval, build_report, check_admissible, error_bound_k1, error_bound_k2,
    estimate_conductivity, reciprocal_error, AdmissibleFluxInterval, ConductivityBounds,
    EstimationReport,
};
pub use materials::{builtin_database, load_materials, Material, MaterialDatabase};
pub use model::{evaluate_temperature, heat_flux, interface_angle, RodConfig, TemperatureProfile};
