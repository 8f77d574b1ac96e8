//! Stationary two-material bar: configuration and exact forward solution.
//!
//! Material A occupies `[0, l]` and is held at the source temperature `F` at
//! `x = 0`. Material B occupies `[l, L]` and exchanges heat by convection with
//! an ambient fluid at `T_a` through the coefficient `h` at `x = L`. The
//! interface has no contact resistance, so temperature and heat flux are both
//! continuous there. The stationary profile is piecewise linear.

use serde::Serialize;

use crate::error::{Error, Result};

/// Fixed physical parameters of the bar. Everything except the conductivity of
/// the hidden section A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RodConfig {
    length: f64,
    interface: f64,
    source_temperature: f64,
    ambient_temperature: f64,
    convection: f64,
    kappa_b: f64,
}

fn require_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig {
            field,
            reason: format!("must be finite, got {value}"),
        })
    }
}

fn require_positive(field: &'static str, value: f64) -> Result<()> {
    require_finite(field, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig {
            field,
            reason: format!("must be positive, got {value}"),
        })
    }
}

pub(crate) fn require_conductivity(what: &'static str, kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what,
            value: kappa,
            reason: "conductivity must be positive and finite",
        })
    }
}

impl RodConfig {
    /// Validates and builds a configuration.
    ///
    /// `source_temperature == ambient_temperature` is accepted here (the
    /// forward problem is trivially `u ≡ F`), but every inverse operation
    /// rejects it.
    pub fn new(
        length: f64,
        interface: f64,
        source_temperature: f64,
        ambient_temperature: f64,
        convection: f64,
        kappa_b: f64,
    ) -> Result<Self> {
        require_positive("length", length)?;
        require_positive("interface", interface)?;
        if interface >= length {
            return Err(Error::InvalidConfig {
                field: "interface",
                reason: format!("must lie strictly inside (0, {length}), got {interface}"),
            });
        }
        require_finite("source_temperature", source_temperature)?;
        require_finite("ambient_temperature", ambient_temperature)?;
        require_positive("convection", convection)?;
        require_positive("kappa_b", kappa_b)?;
        Ok(Self {
            length,
            interface,
            source_temperature,
            ambient_temperature,
            convection,
            kappa_b,
        })
    }

    /// Bar length `L` in meters.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Interface position `l` in meters.
    pub fn interface(&self) -> f64 {
        self.interface
    }

    /// Length of section B, `L − l`.
    pub fn section_b_length(&self) -> f64 {
        self.length - self.interface
    }

    /// Dirichlet temperature `F` at `x = 0`.
    pub fn source_temperature(&self) -> f64 {
        self.source_temperature
    }

    /// Ambient fluid temperature `T_a`.
    pub fn ambient_temperature(&self) -> f64 {
        self.ambient_temperature
    }

    /// Convection coefficient `h` at `x = L`.
    pub fn convection(&self) -> f64 {
        self.convection
    }

    /// Conductivity of the accessible section B.
    pub fn kappa_b(&self) -> f64 {
        self.kappa_b
    }

    /// Temperature drive `F − T_a`. Every flux is proportional to it.
    pub fn drive(&self) -> f64 {
        self.source_temperature - self.ambient_temperature
    }

    /// Returns a copy with a different section-B conductivity.
    pub fn with_kappa_b(&self, kappa_b: f64) -> Result<Self> {
        Self::new(
            self.length,
            self.interface,
            self.source_temperature,
            self.ambient_temperature,
            self.convection,
            kappa_b,
        )
    }

    /// Composite conductance `ζ = κ_Aκ_B + κ_A h L + (κ_B − κ_A) h l`.
    pub fn zeta(&self, kappa_a: f64) -> f64 {
        let h = self.convection;
        kappa_a * self.kappa_b
            + kappa_a * h * self.length
            + (self.kappa_b - kappa_a) * h * self.interface
    }

    /// Supremum of the end flux as `κ_A → ∞`:
    /// `q̄_M = h κ_B (F − T_a) / (h (L − l) + κ_B)`.
    ///
    /// Shared by the admissibility interval and the elasticity asymptote so
    /// both see the same bits.
    pub fn flux_asymptote(&self) -> f64 {
        let h = self.convection;
        h * self.kappa_b * self.drive() / (h * self.section_b_length() + self.kappa_b)
    }
}

/// Exact stationary temperature profile for a given `κ_A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TemperatureProfile {
    config: RodConfig,
    kappa_a: f64,
    zeta: f64,
    slope_left: f64,
    slope_right: f64,
    interface_temperature: f64,
}

impl TemperatureProfile {
    pub fn new(config: RodConfig, kappa_a: f64) -> Result<Self> {
        require_conductivity("kappa_a", kappa_a)?;
        let zeta = config.zeta(kappa_a);
        // a = h (T_a − F) / ζ
        let a = config.convection * (config.ambient_temperature - config.source_temperature) / zeta;
        let slope_left = a * config.kappa_b;
        let slope_right = a * kappa_a;
        let interface_temperature = config.source_temperature + slope_left * config.interface;
        Ok(Self {
            config,
            kappa_a,
            zeta,
            slope_left,
            slope_right,
            interface_temperature,
        })
    }

    pub fn config(&self) -> &RodConfig {
        &self.config
    }

    pub fn kappa_a(&self) -> f64 {
        self.kappa_a
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// `u′` on `(0, l)`.
    pub fn slope_left(&self) -> f64 {
        self.slope_left
    }

    /// `u′` on `(l, L)`.
    pub fn slope_right(&self) -> f64 {
        self.slope_right
    }

    pub fn interface_temperature(&self) -> f64 {
        self.interface_temperature
    }

    /// Temperature at `x ∈ [0, L]`. At exactly `x = l` the left branch is used.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let c = &self.config;
        if !(0.0..=c.length).contains(&x) {
            return Err(Error::OutOfDomain {
                what: "x",
                value: x,
                reason: "position must lie in [0, L]",
            });
        }
        let h = c.convection;
        let drop = c.ambient_temperature - c.source_temperature;
        let u = if x <= c.interface {
            c.source_temperature + c.kappa_b * h * drop * x / self.zeta
        } else {
            c.source_temperature
                + h * drop * (c.interface * (c.kappa_b - self.kappa_a) + self.kappa_a * x)
                    / self.zeta
        };
        Ok(u)
    }

    /// Temperature at the convective end `x = L`.
    pub fn end_temperature(&self) -> f64 {
        // x = L is always inside the domain.
        self.evaluate(self.config.length).unwrap_or(f64::NAN)
    }

    /// Heat flux `−κ_B u′(L)` leaving through the convective end.
    pub fn end_flux(&self) -> f64 {
        -self.config.kappa_b * self.slope_right
    }
}

/// Evaluates the exact profile at `x`.
pub fn evaluate_temperature(profile: &TemperatureProfile, x: f64) -> Result<f64> {
    profile.evaluate(x)
}

/// Heat flux at `x = L`: `q = κ_Bκ_A h (F − T_a) / ζ`.
pub fn heat_flux(config: &RodConfig, kappa_a: f64) -> Result<f64> {
    require_conductivity("kappa_a", kappa_a)?;
    Ok(config.kappa_b * kappa_a * config.convection * config.drive() / config.zeta(kappa_a))
}

/// Kink angle (radians) of the profile at the interface.
///
/// Computed as the difference of the inclinations of the two linear branches.
/// Both slopes share a sign, so the result lies in `[0, π/2)`. The closed form
/// in terms of `a = h (T_a − F) / ζ` is
/// `cos α = (1 + a²(κ_B − κ_A)² / (1 + a²κ_Aκ_B)²)^(−1/2)`; the arctangent
/// route avoids the loss of precision of `arccos` near `α = 0`.
pub fn interface_angle(config: &RodConfig, kappa_a: f64) -> Result<f64> {
    let profile = TemperatureProfile::new(*config, kappa_a)?;
    Ok((profile.slope_left.atan() - profile.slope_right.atan()).abs())
}
