//! Noisy-measurement estimation campaigns and dataset generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::elasticity;
use crate::error::{Error, Result};
use crate::export::{Dataset, RunMetadata};
use crate::inverse::{
    admissible_interval, check_admissible, estimate_conductivity, ConductivityBounds,
};
use crate::materials::MaterialDatabase;
use crate::model::{heat_flux, RodConfig, TemperatureProfile};

/// Name of the generator behind [`NoiseMode::Uniform`], recorded in output
/// metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng";

/// Redraw limit per sample in uniform mode.
const MAX_DRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// `q̂ = q + U(−ε, ε)`, redrawn until admissible.
    Uniform,
    /// `count` evenly spaced offsets covering `[−ε, ε]`.
    FixedOffsets,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementPlan {
    Explicit(Vec<f64>),
    Noisy {
        mode: NoiseMode,
        epsilon: f64,
        count: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub config: RodConfig,
    pub true_kappa_a: f64,
    pub plan: MeasurementPlan,
    pub bounds: ConductivityBounds,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.true_kappa_a.is_finite() && self.true_kappa_a > 0.0) {
            return Err(Error::InvalidConfig {
                field: "true_kappa_a",
                reason: format!("must be positive, got {}", self.true_kappa_a),
            });
        }
        match &self.plan {
            MeasurementPlan::Explicit(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidConfig {
                        field: "flux_values",
                        reason: "must not be empty".into(),
                    });
                }
                if let Some(bad) = values.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
                    return Err(Error::InvalidConfig {
                        field: "flux_values",
                        reason: format!("must all be positive, got {bad}"),
                    });
                }
            }
            MeasurementPlan::Noisy { epsilon, count, .. } => {
                if !(epsilon.is_finite() && *epsilon >= 0.0) {
                    return Err(Error::InvalidConfig {
                        field: "epsilon",
                        reason: format!("must be non-negative, got {epsilon}"),
                    });
                }
                if *count == 0 {
                    return Err(Error::InvalidConfig {
                        field: "count",
                        reason: "must be at least 1".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The three reference bars on the `L = 10, l = 4, F = 100, T_a = 25, h = 10`
/// rig, with their consecutive-integer measurement sets:
///
/// 1. Fe–Ag (κ_A < κ_B), q̂ = 439..=448
/// 2. Al–Pb (κ_A > κ_B), q̂ = 252..=261
/// 3. Ag–Cu (κ_A ≈ κ_B), q̂ = 595..=604
pub fn reference_example(id: u8) -> Result<ExperimentSpec> {
    let db = MaterialDatabase::builtin();
    let (a, b, first) = match id {
        1 => ("Fe", "Ag", 439),
        2 => ("Al", "Pb", 252),
        3 => ("Ag", "Cu", 595),
        _ => {
            return Err(Error::InvalidConfig {
                field: "example",
                reason: format!("must be 1, 2 or 3, got {id}"),
            })
        }
    };
    let config = RodConfig::new(10.0, 4.0, 100.0, 25.0, 10.0, db.lookup(b)?.kappa)?;
    Ok(ExperimentSpec {
        config,
        true_kappa_a: db.lookup(a)?.kappa,
        plan: MeasurementPlan::Explicit((first..first + 10).map(f64::from).collect()),
        bounds: ConductivityBounds::DEFAULT,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub q_hat: f64,
    pub admissible: bool,
    /// `None` for inadmissible measurements, as are the two error columns.
    pub kappa_hat: Option<f64>,
    /// `|q − q̂|`
    pub data_error: f64,
    /// `|κ_A − κ̂_A|`
    pub abs_error: Option<f64>,
    /// `|κ_A − κ̂_A| / κ_A`
    pub rel_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRun {
    pub spec: ExperimentSpec,
    /// Noise-free flux `q = Φ(κ_A)`.
    pub exact_flux: f64,
    pub rows: Vec<ExperimentRow>,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentRun> {
    spec.validate()?;
    let config = &spec.config;
    let q = heat_flux(config, spec.true_kappa_a)?;
    let interval = admissible_interval(config, &spec.bounds)?;

    let measurements: Vec<f64> = match &spec.plan {
        MeasurementPlan::Explicit(values) => values.clone(),
        MeasurementPlan::Noisy {
            mode: NoiseMode::FixedOffsets,
            epsilon,
            count,
            ..
        } => {
            if *count == 1 {
                vec![q]
            } else {
                let step = 2.0 * epsilon / (*count - 1) as f64;
                (0..*count).map(|i| q - epsilon + step * i as f64).collect()
            }
        }
        MeasurementPlan::Noisy {
            mode: NoiseMode::Uniform,
            epsilon,
            count,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|_| {
                    if *epsilon == 0.0 {
                        return Ok(q);
                    }
                    (0..MAX_DRAWS)
                        .map(|_| q + rng.gen_range(-*epsilon..=*epsilon))
                        .find(|&qh| check_admissible(qh, &interval))
                        .ok_or(Error::NoAdmissibleDraw {
                            attempts: MAX_DRAWS,
                            epsilon: *epsilon,
                        })
                })
                .collect::<Result<_>>()?
        }
    };

    let rows = measurements
        .into_iter()
        .map(|q_hat| {
            let admissible = check_admissible(q_hat, &interval);
            let kappa_hat = if admissible {
                Some(estimate_conductivity(config, q_hat)?)
            } else {
                None
            };
            let abs_error = kappa_hat.map(|k| (spec.true_kappa_a - k).abs());
            Ok(ExperimentRow {
                q_hat,
                admissible,
                kappa_hat,
                data_error: (q - q_hat).abs(),
                abs_error,
                rel_error: abs_error.map(|e| e / spec.true_kappa_a),
            })
        })
        .collect::<Result<_>>()?;

    Ok(ExperimentRun {
        spec: spec.clone(),
        exact_flux: q,
        rows,
    })
}

impl ExperimentRun {
    /// Per-row `rel_error(κ̂) / rel_error(q̂)`; `None` for inadmissible or
    /// noiseless rows.
    pub fn amplification_ratios(&self) -> Vec<Option<f64>> {
        self.rows
            .iter()
            .map(|r| {
                let rel_data = r.data_error / self.exact_flux.abs();
                r.rel_error.filter(|_| rel_data > 0.0).map(|e| e / rel_data)
            })
            .collect()
    }

    pub fn to_dataset(&self) -> Dataset {
        let mut meta = RunMetadata::new("experiment", Some(self.spec.config))
            .with("true_kappa_a", self.spec.true_kappa_a)
            .with("exact_flux", self.exact_flux)
            .with("kappa_min", self.spec.bounds.kappa_min())
            .with("kappa_max", self.spec.bounds.kappa_max());
        if let MeasurementPlan::Noisy {
            mode,
            epsilon,
            seed,
            ..
        } = &self.spec.plan
        {
            meta = meta
                .with("noise_mode", serde_json::to_value(mode).unwrap_or_default())
                .with("epsilon", *epsilon)
                .with("seed", *seed)
                .with("rng", RNG_ALGORITHM);
        }
        let mut ds = Dataset::new(
            meta,
            vec![
                "q_hat",
                "kappa_hat",
                "data_error",
                "abs_error",
                "rel_error",
                "admissible",
            ],
        );
        for r in &self.rows {
            ds.push(vec![
                Some(r.q_hat),
                r.kappa_hat,
                Some(r.data_error),
                r.abs_error,
                r.rel_error,
                Some(if r.admissible { 1.0 } else { 0.0 }),
            ]);
        }
        ds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub admissible_rows: usize,
    pub max_rel_error: f64,
    pub mean_rel_error: f64,
    pub max_abs_error: f64,
    /// `E(q)` at the noise-free flux.
    pub elasticity_at_exact_flux: Option<f64>,
    /// Mean of the per-row amplification ratios; `None` if every row is
    /// noiseless.
    pub mean_amplification: Option<f64>,
    /// Largest `|ratio / E(q) − 1|` over the rows.
    pub max_amplification_deviation: Option<f64>,
}

pub fn summarize(run: &ExperimentRun) -> Result<Summary> {
    let rel: Vec<f64> = run.rows.iter().filter_map(|r| r.rel_error).collect();
    if rel.is_empty() {
        return Err(Error::EmptySummary);
    }
    let ratios: Vec<f64> = run.amplification_ratios().into_iter().flatten().collect();
    let e = elasticity::elasticity(&run.spec.config, run.exact_flux).ok();
    let mean_amplification =
        (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
    let max_amplification_deviation = e.filter(|_| !ratios.is_empty()).map(|e| {
        ratios
            .iter()
            .map(|r| (r / e - 1.0).abs())
            .fold(0.0, f64::max)
    });
    Ok(Summary {
        rows: run.rows.len(),
        admissible_rows: rel.len(),
        max_rel_error: rel.iter().copied().fold(0.0, f64::max),
        mean_rel_error: rel.iter().sum::<f64>() / rel.len() as f64,
        max_abs_error: run
            .rows
            .iter()
            .filter_map(|r| r.abs_error)
            .fold(0.0, f64::max),
        elasticity_at_exact_flux: e,
        mean_amplification,
        max_amplification_deviation,
    })
}

/// Samples the exact profile at `n_points` uniform positions plus the
/// interface, giving columns `(x, u)`.
pub fn emit_profile(config: &RodConfig, kappa_a: f64, n_points: usize) -> Result<Dataset> {
    if n_points < 2 {
        return Err(Error::OutOfDomain {
            what: "n_points",
            value: n_points as f64,
            reason: "at least two points are required",
        });
    }
    let profile = TemperatureProfile::new(*config, kappa_a)?;
    let length = config.length();
    let mut xs: Vec<f64> = (0..n_points)
        .map(|i| {
            if i == n_points - 1 {
                length
            } else {
                length * i as f64 / (n_points - 1) as f64
            }
        })
        .collect();
    if !xs.contains(&config.interface()) {
        let at = xs.partition_point(|&x| x < config.interface());
        xs.insert(at, config.interface());
    }
    let meta = RunMetadata::new("profile", Some(*config))
        .with("kappa_a", kappa_a)
        .with(
            "interface_angle",
            crate::model::interface_angle(config, kappa_a)?,
        );
    let mut ds = Dataset::new(meta, vec!["x", "u"]);
    for x in xs {
        ds.push(vec![Some(x), Some(profile.evaluate(x)?)]);
    }
    Ok(ds)
}

/// `(q, E)` columns for an elasticity curve.
pub fn curve_dataset(curve: &elasticity::ElasticityCurve) -> Dataset {
    let meta =
        RunMetadata::new("elasticity", Some(curve.config)).with("asymptote", curve.asymptote);
    let mut ds = Dataset::new(meta, vec!["q", "E"]);
    for &(q, e) in &curve.samples {
        ds.push(vec![Some(q), Some(e)]);
    }
    ds
}
