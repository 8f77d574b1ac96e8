//! Closed-form inversion of the end flux for the hidden conductivity, with the
//! admissibility test and analytical error bounds.
//!
//! The flux map `Φ(κ_A) = (F − T_a) / (1/h + (L − l)/κ_B + l/κ_A)` is strictly
//! increasing with supremum `q̄_M` as `κ_A → ∞`. Its inverse is
//! `κ̂_A = q̂ h l κ_B / (h κ_B (F − T_a) − q̂ h (L − l) − q̂ κ_B)`, which exists
//! (positive and finite) iff `q̂` lies strictly between `0` and `q̄_M`.
//! Requiring `κ_m < κ̂_A < κ_M` narrows this to `(Φ(κ_m), Φ(κ_M))`.

use serde::Serialize;

use crate::elasticity;
use crate::error::{Error, Result};
use crate::model::{heat_flux, require_conductivity, RodConfig};

/// Relative guard on the estimator denominator, scaled by `h κ_B |F − T_a|`.
pub const ASYMPTOTE_GUARD: f64 = 1e-13;

/// A-priori bounds `κ_m ≤ κ_M` on every conductivity in play.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConductivityBounds {
    kappa_min: f64,
    kappa_max: f64,
}

impl ConductivityBounds {
    /// Bounds used when none are supplied. They cover every built-in material
    /// with margin.
    pub const DEFAULT: Self = Self {
        kappa_min: 1.0,
        kappa_max: 1000.0,
    };

    /// `kappa_min == kappa_max` is accepted and gives an empty admissible
    /// interval.
    pub fn new(kappa_min: f64, kappa_max: f64) -> Result<Self> {
        require_conductivity("kappa_min", kappa_min)?;
        require_conductivity("kappa_max", kappa_max)?;
        if kappa_min > kappa_max {
            return Err(Error::InvalidConfig {
                field: "kappa_min",
                reason: format!("must not exceed kappa_max ({kappa_min} > {kappa_max})"),
            });
        }
        Ok(Self {
            kappa_min,
            kappa_max,
        })
    }

    pub fn kappa_min(&self) -> f64 {
        self.kappa_min
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    /// Strict containment `κ_m < κ < κ_M`.
    pub fn contains(&self, kappa: f64) -> bool {
        self.kappa_min < kappa && kappa < self.kappa_max
    }
}

impl Default for ConductivityBounds {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Open interval of measurements `(q_m, q_M)` that yield an estimate inside
/// the conductivity bounds, together with the flux supremum `q̄_M`.
///
/// For `F > T_a` all three are positive and ordered `q_m ≤ q_M < q̄_M`. For a
/// cold source they are all negative with the same ordering in magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleFluxInterval {
    q_min: f64,
    q_max: f64,
    q_asymptote: f64,
}

impl AdmissibleFluxInterval {
    pub fn new(q_min: f64, q_max: f64, q_asymptote: f64) -> Result<Self> {
        let sign = q_asymptote.signum();
        let ordered = q_asymptote != 0.0
            && q_asymptote.is_finite()
            && 0.0 < sign * q_min
            && sign * q_min <= sign * q_max
            && sign * q_max < sign * q_asymptote;
        if !ordered {
            return Err(Error::InvalidConfig {
                field: "admissible_interval",
                reason: format!(
                    "requires 0 < q_min <= q_max < q_asymptote in magnitude, got ({q_min}, {q_max}, {q_asymptote})"
                ),
            });
        }
        Ok(Self {
            q_min,
            q_max,
            q_asymptote,
        })
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn q_asymptote(&self) -> f64 {
        self.q_asymptote
    }

    /// Strict containment of a measurement.
    pub fn contains(&self, flux: f64) -> bool {
        let (lo, hi) = if self.q_min <= self.q_max {
            (self.q_min, self.q_max)
        } else {
            (self.q_max, self.q_min)
        };
        lo < flux && flux < hi
    }

    /// Signed distances from a measurement to the interval endpoints and the
    /// asymptote, oriented so positive means "inside" on that side.
    pub fn diagnose(&self, flux: f64) -> FluxDiagnostic {
        let sign = self.q_asymptote.signum();
        FluxDiagnostic {
            margin_above_min: sign * (flux - self.q_min),
            margin_below_max: sign * (self.q_max - flux),
            margin_below_asymptote: sign * (self.q_asymptote - flux),
        }
    }
}

/// Position of a measurement relative to the admissible interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxDiagnostic {
    pub margin_above_min: f64,
    pub margin_below_max: f64,
    pub margin_below_asymptote: f64,
}

fn require_drive(config: &RodConfig) -> Result<f64> {
    let drive = config.drive();
    if drive == 0.0 {
        Err(Error::DegenerateDrive)
    } else {
        Ok(drive)
    }
}

/// Inverts a measured end flux for the conductivity of section A.
pub fn estimate_conductivity(config: &RodConfig, measured_flux: f64) -> Result<f64> {
    let drive = require_drive(config)?;
    let sign = drive.signum();
    if !measured_flux.is_finite() || sign * measured_flux <= 0.0 {
        return Err(Error::OutOfDomain {
            what: "measured_flux",
            value: measured_flux,
            reason: "flux must be nonzero and flow from the source towards the ambient",
        });
    }
    let h = config.convection();
    let kb = config.kappa_b();
    let scale = h * kb * drive;
    let denominator = scale - measured_flux * h * config.section_b_length() - measured_flux * kb;
    if sign * denominator <= ASYMPTOTE_GUARD * scale.abs() {
        return Err(Error::Inadmissible {
            flux: measured_flux,
            asymptote: config.flux_asymptote(),
        });
    }
    Ok(measured_flux * h * config.interface() * kb / denominator)
}

/// `(q_m, q_M, q̄_M) = (Φ(κ_m), Φ(κ_M), sup Φ)`.
pub fn admissible_interval(
    config: &RodConfig,
    bounds: &ConductivityBounds,
) -> Result<AdmissibleFluxInterval> {
    require_drive(config)?;
    AdmissibleFluxInterval::new(
        heat_flux(config, bounds.kappa_min)?,
        heat_flux(config, bounds.kappa_max)?,
        config.flux_asymptote(),
    )
}

/// Whether `measured_flux` lies strictly inside `(q_m, q_M)`.
pub fn check_admissible(measured_flux: f64, interval: &AdmissibleFluxInterval) -> bool {
    interval.contains(measured_flux)
}

/// Exact reciprocal error `|1/κ_A − 1/κ̂_A| = |F − T_a| |q − q̂| / (l |q q̂|)`
/// between the conductivities that produce fluxes `q` and `q̂`.
pub fn reciprocal_error(config: &RodConfig, flux: f64, measured_flux: f64) -> f64 {
    config.drive().abs() * (flux - measured_flux).abs()
        / (config.interface() * (flux * measured_flux).abs())
}

/// `K₁ = l / (κ_m² |F − T_a|) · [1 + κ_m/(h l) · (1 + h (L − l)/κ_B)]²`, so that
/// `|1/κ_A − 1/κ̂_A| < K₁ ε` for admissible data with noise at most `ε`.
pub fn error_bound_k1(config: &RodConfig, bounds: &ConductivityBounds) -> Result<f64> {
    let drive = require_drive(config)?;
    let h = config.convection();
    let l = config.interface();
    let km = bounds.kappa_min;
    let bracket = 1.0 + km / (h * l) * (1.0 + h * config.section_b_length() / config.kappa_b());
    Ok(l / (km * km * drive.abs()) * bracket * bracket)
}

/// `K₂ = κ_M² K₁`, so that `|κ_A − κ̂_A| < K₂ ε`.
pub fn error_bound_k2(config: &RodConfig, bounds: &ConductivityBounds) -> Result<f64> {
    Ok(bounds.kappa_max * bounds.kappa_max * error_bound_k1(config, bounds)?)
}

/// Data-dependent bound `κ_A κ̂_A K₁ |q − q̂|`, tighter than `K₂ ε` once both
/// conductivities are known.
pub fn pointwise_error_bound(k1: f64, kappa_a: f64, kappa_hat: f64, data_error: f64) -> f64 {
    kappa_a * kappa_hat * k1 * data_error
}

/// Everything known about a single measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationReport {
    pub measured_flux: f64,
    pub noise_level: f64,
    pub admissible: bool,
    /// Present only for admissible measurements.
    pub kappa_hat: Option<f64>,
    pub bound_k1: f64,
    pub bound_k2: f64,
    /// `K₂ ε`
    pub absolute_error_bound: f64,
    /// `E(q̂)`; absent when `q̂` is at or beyond the asymptote.
    pub elasticity_at_measurement: Option<f64>,
    pub bounds: ConductivityBounds,
    pub interval: AdmissibleFluxInterval,
    pub diagnostic: FluxDiagnostic,
}

/// Assembles an [`EstimationReport`]. Inadmissible measurements are reported
/// with `admissible = false`, not as errors.
pub fn build_report(
    config: &RodConfig,
    measured_flux: f64,
    noise_level: f64,
    bounds: &ConductivityBounds,
) -> Result<EstimationReport> {
    if !(noise_level.is_finite() && noise_level >= 0.0) {
        return Err(Error::OutOfDomain {
            what: "noise_level",
            value: noise_level,
            reason: "noise level must be non-negative",
        });
    }
    if !measured_flux.is_finite() {
        return Err(Error::OutOfDomain {
            what: "measured_flux",
            value: measured_flux,
            reason: "flux must be finite",
        });
    }
    let interval = admissible_interval(config, bounds)?;
    let bound_k1 = error_bound_k1(config, bounds)?;
    let bound_k2 = error_bound_k2(config, bounds)?;
    let admissible = check_admissible(measured_flux, &interval);
    let kappa_hat = if admissible {
        Some(estimate_conductivity(config, measured_flux)?)
    } else {
        None
    };
    Ok(EstimationReport {
        measured_flux,
        noise_level,
        admissible,
        kappa_hat,
        bound_k1,
        bound_k2,
        absolute_error_bound: bound_k2 * noise_level,
        elasticity_at_measurement: elasticity::elasticity(config, measured_flux).ok(),
        bounds: *bounds,
        interval,
        diagnostic: interval.diagnose(measured_flux),
    })
}
