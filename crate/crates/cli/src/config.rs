//! Run configuration: a flat TOML file, overridden by command-line flags,
//! falling back to the reference rig.
//!
//! ```toml
//! length = 10.0        # L, m
//! interface = 4.0      # l, m
//! source = 100.0       # F, °C
//! ambient = 25.0       # T_a, °C
//! convection = 10.0    # h, W/(m²·°C)
//! material_a = "Fe"    # symbol or conductivity
//! material_b = 419     # symbol or conductivity
//! kappa_min = 1.0
//! kappa_max = 1000.0
//!
//! # experiment (table subcommand)
//! flux_values = [439, 440, 441]
//! noise_mode = "uniform"   # or "fixed-offsets"
//! epsilon = 2.0
//! count = 10
//! seed = 42
//! ```

use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use thermoprobe::{ConductivityBounds, MaterialDatabase, MeasurementPlan, NoiseMode, RodConfig};

/// A material given either by symbol or by explicit conductivity.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MaterialRef {
    Kappa(f64),
    Symbol(String),
}

impl FromStr for MaterialRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<f64>() {
            Ok(k) => MaterialRef::Kappa(k),
            Err(_) => MaterialRef::Symbol(s.to_owned()),
        })
    }
}

impl MaterialRef {
    pub fn resolve(&self, db: &MaterialDatabase, field: &str) -> Result<f64> {
        match self {
            MaterialRef::Kappa(k) if k.is_finite() && *k > 0.0 => Ok(*k),
            MaterialRef::Kappa(k) => bail!("`{field}`: conductivity must be positive, got {k}"),
            MaterialRef::Symbol(s) => db
                .lookup(s)
                .map(|m| m.kappa)
                .with_context(|| format!("`{field}`: cannot resolve material")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModeArg {
    Uniform,
    FixedOffsets,
}

impl From<NoiseModeArg> for NoiseMode {
    fn from(m: NoiseModeArg) -> Self {
        match m {
            NoiseModeArg::Uniform => NoiseMode::Uniform,
            NoiseModeArg::FixedOffsets => NoiseMode::FixedOffsets,
        }
    }
}

/// Every field is optional; absent fields fall through to defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub length: Option<f64>,
    pub interface: Option<f64>,
    pub source: Option<f64>,
    pub ambient: Option<f64>,
    pub convection: Option<f64>,
    pub material_a: Option<MaterialRef>,
    pub material_b: Option<MaterialRef>,
    pub kappa_min: Option<f64>,
    pub kappa_max: Option<f64>,
    pub flux_values: Option<Vec<f64>>,
    pub noise_mode: Option<NoiseModeArg>,
    pub epsilon: Option<f64>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("invalid config file: {}", e.message().trim()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Fills every unset field of `self` from `lower`.
    pub fn or(self, lower: RunConfigFile) -> Self {
        Self {
            length: self.length.or(lower.length),
            interface: self.interface.or(lower.interface),
            source: self.source.or(lower.source),
            ambient: self.ambient.or(lower.ambient),
            convection: self.convection.or(lower.convection),
            material_a: self.material_a.or(lower.material_a),
            material_b: self.material_b.or(lower.material_b),
            kappa_min: self.kappa_min.or(lower.kappa_min),
            kappa_max: self.kappa_max.or(lower.kappa_max),
            flux_values: self.flux_values.or(lower.flux_values),
            noise_mode: self.noise_mode.or(lower.noise_mode),
            epsilon: self.epsilon.or(lower.epsilon),
            count: self.count.or(lower.count),
            seed: self.seed.or(lower.seed),
        }
    }

    /// The reference rig: L = 10 m, l = 4 m, F = 100 °C, T_a = 25 °C, h = 10.
    pub fn defaults() -> Self {
        Self {
            length: Some(10.0),
            interface: Some(4.0),
            source: Some(100.0),
            ambient: Some(25.0),
            convection: Some(10.0),
            ..Self::default()
        }
    }

    pub fn rod(&self, db: &MaterialDatabase) -> Result<RodConfig> {
        let kappa_b = self
            .material_b
            .as_ref()
            .ok_or_else(|| anyhow!("`material_b` is required (symbol or conductivity)"))?
            .resolve(db, "material_b")?;
        let get = |v: Option<f64>, name: &str| v.ok_or_else(|| anyhow!("`{name}` is required"));
        Ok(RodConfig::new(
            get(self.length, "length")?,
            get(self.interface, "interface")?,
            get(self.source, "source")?,
            get(self.ambient, "ambient")?,
            get(self.convection, "convection")?,
            kappa_b,
        )?)
    }

    pub fn kappa_a(&self, db: &MaterialDatabase) -> Result<f64> {
        self.material_a
            .as_ref()
            .ok_or_else(|| anyhow!("`material_a` is required (symbol or conductivity)"))?
            .resolve(db, "material_a")
    }

    pub fn bounds(&self) -> Result<ConductivityBounds> {
        let d = ConductivityBounds::DEFAULT;
        Ok(ConductivityBounds::new(
            self.kappa_min.unwrap_or(d.kappa_min()),
            self.kappa_max.unwrap_or(d.kappa_max()),
        )?)
    }

    /// Explicit flux values win over a noise specification.
    pub fn plan(&self) -> Result<MeasurementPlan> {
        if let Some(values) = &self.flux_values {
            return Ok(MeasurementPlan::Explicit(values.clone()));
        }
        let epsilon = self
            .epsilon
            .ok_or_else(|| anyhow!("experiment needs `flux_values` or `epsilon`"))?;
        Ok(MeasurementPlan::Noisy {
            mode: self.noise_mode.unwrap_or(NoiseModeArg::Uniform).into(),
            epsilon,
            count: self.count.unwrap_or(10),
            seed: self.seed.unwrap_or(0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let text = r#"
            length = 10
            interface = 4.0
            source = 100
            ambient = 25
            convection = 10
            material_a = "Fe"
            material_b = 419
            kappa_min = 10
            kappa_max = 500
            flux_values = [439, 440.5]
            noise_mode = "fixed-offsets"
            epsilon = 2
            count = 3
            seed = 7
        "#;
        let f = RunConfigFile::parse(text).unwrap();
        assert_eq!(f.material_a, Some(MaterialRef::Symbol("Fe".into())));
        assert_eq!(f.material_b, Some(MaterialRef::Kappa(419.0)));
        assert_eq!(f.noise_mode, Some(NoiseModeArg::FixedOffsets));
        let db = MaterialDatabase::builtin();
        let rod = f.rod(&db).unwrap();
        assert_eq!(rod.kappa_b(), 419.0);
        assert_eq!(f.kappa_a(&db).unwrap(), 73.0);
        assert_eq!(f.bounds().unwrap().kappa_max(), 500.0);
        assert_eq!(
            f.plan().unwrap(),
            MeasurementPlan::Explicit(vec![439.0, 440.5])
        );
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = RunConfigFile::parse("lenght = 3").unwrap_err().to_string();
        assert!(err.contains("lenght"), "{err}");
        assert!(RunConfigFile::parse("length = \"ten\"").is_err());
    }

    #[test]
    fn precedence() {
        let flags = RunConfigFile {
            length: Some(5.0),
            ..Default::default()
        };
        let file = RunConfigFile {
            length: Some(8.0),
            interface: Some(2.0),
            ..Default::default()
        };
        let merged = flags.or(file).or(RunConfigFile::defaults());
        assert_eq!(merged.length, Some(5.0));
        assert_eq!(merged.interface, Some(2.0));
        assert_eq!(merged.source, Some(100.0));
    }

    #[test]
    fn material_refs() {
        assert_eq!(
            "73".parse::<MaterialRef>().unwrap(),
            MaterialRef::Kappa(73.0)
        );
        assert_eq!(
            "Cu".parse::<MaterialRef>().unwrap(),
            MaterialRef::Symbol("Cu".into())
        );
        let db = MaterialDatabase::builtin();
        assert!(MaterialRef::Symbol("Xx".into())
            .resolve(&db, "material_a")
            .is_err());
        assert!(MaterialRef::Kappa(-1.0).resolve(&db, "material_a").is_err());
    }

    #[test]
    fn missing_material_is_reported() {
        let err = RunConfigFile::defaults()
            .rod(&MaterialDatabase::builtin())
            .unwrap_err();
        assert!(err.to_string().contains("material_b"));
    }

    #[test]
    fn noise_plan_defaults() {
        let f = RunConfigFile {
            epsilon: Some(1.5),
            ..Default::default()
        };
        assert_eq!(
            f.plan().unwrap(),
            MeasurementPlan::Noisy {
                mode: NoiseMode::Uniform,
                epsilon: 1.5,
                count: 10,
                seed: 0
            }
        );
        assert!(RunConfigFile::default().plan().is_err());
    }
}
