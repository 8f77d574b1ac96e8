use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use thermoprobe::{
    build_report, curve_dataset, emit_profile, fd_solve, format_significant, heat_flux,
    interface_angle, load_materials, reference_example, run_experiment, sample_curve, summarize,
    Dataset, Error, ExperimentSpec, MaterialDatabase, RodConfig, TemperatureProfile,
};

use crate::config::RunConfigFile;
use crate::{Cli, Command, OutputArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    UsageError = 2,
    Inadmissible = 3,
    ValidationFailed = 4,
}

struct Session {
    settings: RunConfigFile,
    db: MaterialDatabase,
    precision: usize,
}

impl Session {
    fn fmt(&self, x: f64) -> String {
        format_significant(x, self.precision)
    }

    fn rod(&self) -> Result<RodConfig> {
        self.settings.rod(&self.db)
    }
}

pub fn run(cli: Cli) -> Result<Status> {
    let file = match &cli.config {
        Some(path) => RunConfigFile::load(path)?,
        None => RunConfigFile::default(),
    };
    let settings = cli.rod.into_layer().or(file).or(RunConfigFile::defaults());
    let db = match &cli.materials {
        Some(path) => {
            load_materials(path).with_context(|| format!("loading materials {}", path.display()))?
        }
        None => MaterialDatabase::builtin(),
    };
    let ctx = Session {
        settings,
        db,
        precision: cli.precision,
    };
    match cli.command {
        Command::Forward { points, output } => forward(&ctx, points, &output),
        Command::Estimate { flux, epsilon } => estimate(&ctx, flux, epsilon),
        Command::Elasticity {
            from,
            to,
            n,
            output,
        } => elasticity(&ctx, from, to, n, &output),
        Command::Table {
            example,
            flux_values,
            noise_mode,
            epsilon,
            count,
            seed,
            output,
        } => {
            let plan_flags = RunConfigFile {
                flux_values,
                noise_mode,
                epsilon,
                count,
                seed,
                ..RunConfigFile::default()
            };
            table(&ctx, example, plan_flags, &output)
        }
        Command::Validate { cells, tolerance } => validate(&ctx, cells, tolerance),
        Command::Materials => materials(&ctx),
    }
}

/// Data goes to `--out` (summary on stdout) or to stdout (summary on stderr).
fn emit(ctx: &Session, data: &Dataset, output: &OutputArgs, summary: &[String]) -> Result<()> {
    match &output.out {
        Some(path) => {
            write_file(path, |w| Ok(data.write_csv(w, ctx.precision)?))?;
            let mut stdout = io::stdout().lock();
            for line in summary {
                writeln!(stdout, "{line}")?;
            }
        }
        None => {
            data.write_csv(io::stdout().lock(), ctx.precision)?;
            for line in summary {
                eprintln!("{line}");
            }
        }
    }
    if let Some(path) = &output.json {
        write_file(path, |w| Ok(data.write_json(w)?))?;
    }
    Ok(())
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    body(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush()?;
    Ok(())
}

fn forward(ctx: &Session, points: usize, output: &OutputArgs) -> Result<Status> {
    let rod = ctx.rod()?;
    let kappa_a = ctx.settings.kappa_a(&ctx.db)?;
    let profile = TemperatureProfile::new(rod, kappa_a)?;
    let data = emit_profile(&rod, kappa_a, points)?;
    let summary = [
        format!("u(L) = {}", ctx.fmt(profile.end_temperature())),
        format!("q = {}", ctx.fmt(heat_flux(&rod, kappa_a)?)),
        format!(
            "interface angle = {} rad",
            ctx.fmt(interface_angle(&rod, kappa_a)?)
        ),
    ];
    emit(ctx, &data, output, &summary)?;
    Ok(Status::Success)
}

fn estimate(ctx: &Session, flux: f64, epsilon: f64) -> Result<Status> {
    let rod = ctx.rod()?;
    let bounds = ctx.settings.bounds()?;
    let report = build_report(&rod, flux, epsilon, &bounds)?;
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, &report)?;
    writeln!(stdout)?;
    match report.kappa_hat {
        Some(k) => {
            eprintln!("kappa_hat = {}", ctx.fmt(k));
            eprintln!(
                "absolute error bound = {}",
                ctx.fmt(report.absolute_error_bound)
            );
            Ok(Status::Success)
        }
        None => {
            eprintln!(
                "inadmissible: q̂ = {} lies outside ({}, {}); asymptote q̄_M = {}",
                ctx.fmt(flux),
                ctx.fmt(report.interval.q_min()),
                ctx.fmt(report.interval.q_max()),
                ctx.fmt(report.interval.q_asymptote()),
            );
            Ok(Status::Inadmissible)
        }
    }
}

fn elasticity(ctx: &Session, from: f64, to: f64, n: usize, output: &OutputArgs) -> Result<Status> {
    let rod = ctx.rod()?;
    let curve = sample_curve(&rod, from, to, n).map_err(|e| match e {
        Error::AsymptoteExceeded { flux, asymptote } => anyhow::anyhow!(
            "flux {} is at or beyond the asymptote q̄_M = {}; choose a range below it",
            ctx.fmt(flux),
            ctx.fmt(asymptote)
        ),
        other => other.into(),
    })?;
    let summary = [format!("asymptote q̄_M = {}", ctx.fmt(curve.asymptote))];
    emit(ctx, &curve_dataset(&curve), output, &summary)?;
    Ok(Status::Success)
}

fn table(
    ctx: &Session,
    example: Option<u8>,
    plan_flags: RunConfigFile,
    output: &OutputArgs,
) -> Result<Status> {
    let has_plan_flags = plan_flags != RunConfigFile::default();
    let spec = match example {
        Some(id) => {
            let mut spec = reference_example(id)?;
            if has_plan_flags {
                spec.plan = plan_flags.plan()?;
            }
            spec
        }
        None => {
            let settings = plan_flags.or(ctx.settings.clone());
            ExperimentSpec {
                config: settings.rod(&ctx.db)?,
                true_kappa_a: settings.kappa_a(&ctx.db)?,
                plan: settings.plan()?,
                bounds: settings.bounds()?,
            }
        }
    };
    let run = run_experiment(&spec)?;
    let data = run.to_dataset();
    let (summary, status) = match summarize(&run) {
        Ok(s) => {
            let mut lines = vec![
                format!("exact flux q = {}", ctx.fmt(run.exact_flux)),
                format!("admissible rows = {} of {}", s.admissible_rows, s.rows),
                format!("max relative error = {}", ctx.fmt(s.max_rel_error)),
                format!("mean relative error = {}", ctx.fmt(s.mean_rel_error)),
                format!("max absolute error = {}", ctx.fmt(s.max_abs_error)),
            ];
            if let Some(e) = s.elasticity_at_exact_flux {
                lines.push(format!("E(q) = {}", ctx.fmt(e)));
            }
            if let Some(a) = s.mean_amplification {
                lines.push(format!("mean amplification = {}", ctx.fmt(a)));
            }
            (lines, Status::Success)
        }
        Err(Error::EmptySummary) => (vec!["no admissible rows".to_owned()], Status::Inadmissible),
        Err(e) => return Err(e.into()),
    };
    emit(ctx, &data, output, &summary)?;
    Ok(status)
}

fn validate(ctx: &Session, cells: usize, tolerance: f64) -> Result<Status> {
    let rod = ctx.rod()?;
    let kappa_a = ctx.settings.kappa_a(&ctx.db)?;
    let exact = TemperatureProfile::new(rod, kappa_a)?;
    let discrete = fd_solve(&rod, kappa_a, cells)?;

    let mut max_dev: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (&x, &u) in discrete
        .node_positions
        .iter()
        .zip(&discrete.node_temperatures)
    {
        let reference = exact.evaluate(x)?;
        max_dev = max_dev.max((u - reference).abs());
        scale = scale.max(reference.abs());
    }
    let nodal = relative(max_dev, scale);
    let q = exact.end_flux();
    let flux = relative((discrete.numeric_flux_at_end - q).abs(), q.abs());

    println!("cells = {}", discrete.node_count() - 1);
    println!("max nodal deviation (relative) = {}", ctx.fmt(nodal));
    println!("end flux deviation (relative) = {}", ctx.fmt(flux));
    if nodal <= tolerance && flux <= tolerance {
        println!("PASS (tolerance {})", ctx.fmt(tolerance));
        Ok(Status::Success)
    } else {
        println!("FAIL (tolerance {})", ctx.fmt(tolerance));
        Ok(Status::ValidationFailed)
    }
}

/// Relative deviation, falling back to absolute when the reference is zero.
fn relative(dev: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        dev / scale
    } else {
        dev
    }
}

fn materials(ctx: &Session) -> Result<Status> {
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "symbol,name,kappa")?;
    for m in ctx.db.entries() {
        writeln!(stdout, "{},{},{}", m.symbol, m.name, ctx.fmt(m.kappa))?;
    }
    Ok(Status::Success)
}
