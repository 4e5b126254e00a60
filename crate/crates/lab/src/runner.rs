//! Runs an experiment and persists its outputs. The output directory is
//! checked before any computation starts.

use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use hobo_core::integrator::CODE_VERSION;
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::Result;
use crate::experiments::{self as ex, status_text};
use crate::output::{num, Manifest, OutputDir};

#[derive(Debug)]
pub struct Outcome {
    /// Human-readable summary lines.
    pub summary: Vec<String>,
    pub manifest: Option<PathBuf>,
    /// Whether the experiment met its own pass conditions.
    pub ok: bool,
}

struct Emitted {
    summary: Vec<String>,
    status: String,
    warnings: Vec<String>,
    results: serde_json::Value,
    ok: bool,
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn results<T: Serialize>(report: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(report)?)
}

pub fn execute(kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut out = match &cfg.out {
        Some(dir) => Some(OutputDir::prepare(dir)?),
        None => None,
    };
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let emitted = match kind {
        ExperimentKind::Simulate => simulate(cfg, out.as_mut())?,
        ExperimentKind::Conservation => conservation(cfg, out.as_mut())?,
        ExperimentKind::EpsilonSweep => sweep(cfg, out.as_mut())?,
        ExperimentKind::ScalingCheck => scaling(cfg, out.as_mut())?,
        ExperimentKind::FlowmapContinuity => flowmap(cfg, out.as_mut())?,
        ExperimentKind::GaugeDiagnose => gauge(cfg, out.as_mut())?,
        ExperimentKind::Coeffs => coeffs(cfg)?,
    };
    let manifest = match out {
        Some(dir) => Some(dir.manifest(Manifest {
            experiment: kind.name().to_string(),
            config: ExperimentConfig { experiment: Some(kind), ..cfg.clone() },
            code_version: CODE_VERSION.to_string(),
            started_unix,
            wall_seconds: clock.elapsed().as_secs_f64(),
            threads: cfg.threads,
            status: emitted.status,
            warnings: emitted.warnings,
            outputs: Vec::new(),
            results: emitted.results,
        })?),
        None => None,
    };
    Ok(Outcome { summary: emitted.summary, manifest, ok: emitted.ok })
}

fn simulate(cfg: &ExperimentConfig, out: Option<&mut OutputDir>) -> Result<Emitted> {
    let record = ex::run_simulate(cfg)?;
    let status = status_text(&record.status);
    if let Some(out) = out {
        for (&step, v) in record.snapshot_steps.iter().zip(&record.snapshots) {
            out.snapshot(step, v)?;
        }
        let rows: Vec<Vec<String>> = record
            .times
            .iter()
            .zip(&record.observables)
            .map(|(&t, o)| {
                [t, o.mean, o.mass, o.energy, o.l2_norm, o.h_half_norm, o.h1_norm].into_iter().map(num).collect()
            })
            .collect();
        out.csv("observables.csv", &["t", "mean", "M", "H", "L2", "H_half", "H1"], &rows)?;
    }
    let last = record.observables.last().expect("initial observables");
    Ok(Emitted {
        summary: vec![
            format!("status: {status}"),
            format!("snapshots: {}", record.snapshots.len()),
            format!("final t = {}, H1 = {:e}", record.times.last().unwrap(), last.h1_norm),
        ],
        results: serde_json::json!({
            "snapshot_steps": record.snapshot_steps,
            "final_time": record.times.last(),
            "final_h1": last.h1_norm,
        }),
        ok: record.completed(),
        status,
        warnings: Vec::new(),
    })
}

fn conservation(cfg: &ExperimentConfig, out: Option<&mut OutputDir>) -> Result<Emitted> {
    let report = ex::run_conservation(cfg)?;
    if let Some(out) = out {
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| [r.t, r.mass, r.energy, r.rel_drift_mass, r.rel_drift_energy].into_iter().map(num).collect())
            .collect();
        out.csv("conservation.csv", &["t", "M", "H", "rel_drift_M", "rel_drift_H"], &rows)?;
    }
    let mut warnings = Vec::new();
    if !report.mass_ok {
        warnings.push(format!("mass drift {:e} exceeds {:e}", report.max_drift_mass, ex::MASS_DRIFT_TOLERANCE));
    }
    if !report.energy_ok {
        warnings.push(format!("energy drift {:e} exceeds {:e}", report.max_drift_energy, ex::ENERGY_DRIFT_TOLERANCE));
    }
    Ok(Emitted {
        summary: vec![
            format!("status: {}", report.status),
            format!("max relative drift M = {:e}", report.max_drift_mass),
            format!("max relative drift H = {:e}", report.max_drift_energy),
        ],
        results: results(&report)?,
        ok: report.mass_ok && report.energy_ok && report.status == "completed",
        status: report.status,
        warnings,
    })
}

fn sweep(cfg: &ExperimentConfig, out: Option<&mut OutputDir>) -> Result<Emitted> {
    let report = ex::run_epsilon_sweep(cfg)?;
    if let Some(out) = out {
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| {
                let wall = if cfg.record_timing { r.wall_seconds } else { 0.0 };
                vec![num(r.epsilon), num(r.dist_h1), num(r.dist_l2), num(wall)]
            })
            .collect();
        out.csv("sweep.csv", &["epsilon", "dist_H1", "dist_L2", "wall_seconds"], &rows)?;
    }
    let mut summary: Vec<String> =
        report.rows.iter().map(|r| format!("eps {:<8} N {:<5} dist_H1 {:e}  {}", r.epsilon, r.points, r.dist_h1, r.status)).collect();
    summary.push(format!("slope {} ± {}", opt(report.slope), opt(report.slope_half_width)));
    let mut warnings = Vec::new();
    if !report.compatible {
        warnings.push("coefficients are not BO-compatible; run forced by override".into());
    }
    if !report.strictly_decreasing {
        warnings.push("distances are not strictly decreasing in epsilon".into());
    }
    let aborted = report.rows.iter().filter(|r| r.status != "completed").count();
    let status = if aborted == 0 { "completed".to_string() } else { format!("partial: {aborted} member(s) aborted") };
    Ok(Emitted {
        summary,
        results: results(&report)?,
        ok: aborted == 0 && report.strictly_decreasing,
        status,
        warnings,
    })
}

fn scaling(cfg: &ExperimentConfig, out: Option<&mut OutputDir>) -> Result<Emitted> {
    let report = ex::run_scaling_check(cfg)?;
    if let Some(out) = out {
        let row = [report.lambda, report.time, report.dt, report.mismatch_l2, report.self_convergence];
        out.csv("scaling.csv", &["lambda", "t", "dt", "mismatch_L2", "self_convergence"], &[row.into_iter().map(num).collect()])?;
    }
    let ok = report.mismatch_l2 < 10.0 * report.self_convergence.max(f64::EPSILON);
    Ok(Emitted {
        summary: vec![
            format!("lambda {} t {} dt {}", report.lambda, report.time, report.dt),
            format!("mismatch {:e}, self-convergence {:e}", report.mismatch_l2, report.self_convergence),
        ],
        results: results(&report)?,
        ok,
        status: "completed".into(),
        warnings: Vec::new(),
    })
}

fn flowmap(cfg: &ExperimentConfig, out: Option<&mut OutputDir>) -> Result<Emitted> {
    let report = ex::run_flowmap_continuity(cfg)?;
    if let Some(out) = out {
        let rows: Vec<Vec<String>> =
            report.rows.iter().map(|r| vec![num(r.delta), num(r.dist_h1), opt(r.ratio)]).collect();
        out.csv("flowmap.csv", &["delta", "dist_H1", "ratio"], &rows)?;
    }
    let mut summary: Vec<String> =
        report.rows.iter().map(|r| format!("delta {:e}  dist_H1 {:e}  ratio {}", r.delta, r.dist_h1, opt(r.ratio))).collect();
    summary.push(format!("ratio spread {}, low-band fraction {:e}", opt(report.spread), report.low_fraction));
    Ok(Emitted {
        summary,
        results: results(&report)?,
        ok: report.status == "completed",
        status: report.status,
        warnings: Vec::new(),
    })
}

fn gauge(cfg: &ExperimentConfig, out: Option<&mut OutputDir>) -> Result<Emitted> {
    let report = ex::run_gauge_diagnose(cfg)?;
    if let Some(out) = out {
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| vec![num(r.t), num(r.residual_35), num(r.residual_36), r.compat.to_string()])
            .collect();
        out.csv("gauge.csv", &["t", "residual_35", "residual_36", "compat"], &rows)?;
    }
    Ok(Emitted {
        summary: vec![
            format!("snapshots: {}", report.rows.len()),
            format!("max residual_35 {:e}", report.max_residual_35),
            format!("max residual_36 {:e}", report.max_residual_36),
        ],
        results: results(&report)?,
        ok: report.rows.iter().all(|r| r.compat),
        status: "completed".into(),
        warnings: report.warnings,
    })
}

fn coeffs(cfg: &ExperimentConfig) -> Result<Emitted> {
    let r = ex::run_coeffs(cfg)?;
    Ok(Emitted {
        summary: vec![
            format!("a = {}", r.a),
            format!("b = {}", r.b),
            format!("c = {}", r.c),
            format!("d = {}", r.d),
            format!("3ac/(4d) = {}  relative gap {:e}  compatible {}", r.three_ac_over_4d, r.relative_gap, r.compatible),
        ],
        results: results(&r)?,
        ok: true,
        status: "completed".into(),
        warnings: Vec::new(),
    })
}
