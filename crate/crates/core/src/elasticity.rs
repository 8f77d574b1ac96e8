//! Elasticity of the estimate with respect to the measured flux,
//! `E(q) = (q / κ_A) ∂κ_A/∂q`: the percentage change in `κ̂_A` per percent
//! change in `q̂`.
//!
//! `E` depends only on the rod configuration, never on `κ_A`, so it can be
//! studied before a measurement is taken.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::RodConfig;

/// `q̄_M = h κ_B (F − T_a) / (h (L − l) + κ_B)`, the pole of `E`.
pub fn vertical_asymptote(config: &RodConfig) -> f64 {
    config.flux_asymptote()
}

fn check_flux(config: &RodConfig, q: f64) -> Result<f64> {
    let qbar = vertical_asymptote(config);
    let sign = qbar.signum();
    if !q.is_finite() || sign * q <= 0.0 {
        return Err(Error::OutOfDomain {
            what: "flux",
            value: q,
            reason: "flux must be nonzero with the sign of F − T_a",
        });
    }
    if sign * q >= sign * qbar {
        return Err(Error::AsymptoteExceeded {
            flux: q,
            asymptote: qbar,
        });
    }
    Ok(qbar)
}

/// `E(q) = (F − T_a) h κ_B / (h κ_B (F − T_a) − q (κ_B + h (L − l)))`.
pub fn elasticity(config: &RodConfig, q: f64) -> Result<f64> {
    check_flux(config, q)?;
    let h = config.convection();
    let kb = config.kappa_b();
    let scale = config.drive() * h * kb;
    Ok(scale / (scale - q * (kb + h * config.section_b_length())))
}

/// `E(q) = q̄_M / (q̄_M − q)`, the asymptote form.
pub fn elasticity_from_asymptote(q: f64, asymptote: f64) -> f64 {
    asymptote / (asymptote - q)
}

/// `dE/dq = q̄_M / (q̄_M − q)²`.
pub fn elasticity_derivative(config: &RodConfig, q: f64) -> Result<f64> {
    let qbar = check_flux(config, q)?;
    let gap = qbar - q;
    Ok(qbar / (gap * gap))
}

/// Uniformly sampled elasticity curve over `[q_lo, q_hi]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElasticityCurve {
    pub config: RodConfig,
    pub asymptote: f64,
    /// `(q, E(q))` pairs in sampling order.
    pub samples: Vec<(f64, f64)>,
}

pub fn sample_curve(config: &RodConfig, q_lo: f64, q_hi: f64, n: usize) -> Result<ElasticityCurve> {
    if n < 2 {
        return Err(Error::OutOfDomain {
            what: "n",
            value: n as f64,
            reason: "at least two samples are required",
        });
    }
    check_flux(config, q_lo)?;
    check_flux(config, q_hi)?;
    if q_lo >= q_hi {
        return Err(Error::OutOfDomain {
            what: "q_lo",
            value: q_lo,
            reason: "lower flux must be below the upper flux",
        });
    }
    let step = (q_hi - q_lo) / (n - 1) as f64;
    let samples = (0..n)
        .map(|i| {
            let q = if i == n - 1 {
                q_hi
            } else {
                q_lo + step * i as f64
            };
            elasticity(config, q).map(|e| (q, e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ElasticityCurve {
        config: *config,
        asymptote: vertical_asymptote(config),
        samples,
    })
}
