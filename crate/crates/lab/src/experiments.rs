//! The experiments. Each `run_*` function computes a serializable report
//! and touches no files; [`crate::runner`] handles persistence.

use std::time::Instant;

use hobo_core::gauge::COMPAT_TOLERANCE;
use hobo_core::integrator::{AbortReason, RunStatus};
use hobo_core::littlewood_paley::project_real;
use hobo_core::observables::sobolev_norm;
use hobo_core::{
    gauge_forward, integrate, is_bo_compatible, recovery_residual_35, recovery_residual_36, Grid, IntegratorConfig,
    ModelCoefficients, Profile, Projection, RealField, TrajectoryRecord,
};
use log::warn;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::config::{Band, ExperimentConfig, ModelName};
use crate::error::{LabError, Result};
use crate::output::read_snapshot_dir;

/// Conservation tolerances of the integrator contract.
pub const MASS_DRIFT_TOLERANCE: f64 = 1e-8;
pub const ENERGY_DRIFT_TOLERANCE: f64 = 1e-6;
/// Floor of the energy drift denominator.
pub const ENERGY_FLOOR: f64 = 1e-3;

pub fn status_text(status: &RunStatus) -> String {
    match status {
        RunStatus::Completed => "completed".to_string(),
        RunStatus::Aborted(reason) => {
            let detail = match reason {
                AbortReason::BlowUp { step, max_abs } => format!("step {step}, max|v| = {max_abs:e}"),
                AbortReason::NonFinite { step, error } => format!("step {step}, {error}"),
                AbortReason::CflViolated { step, dt, limit } => format!("step {step}, dt {dt} > {limit:e}"),
            };
            format!("aborted ({}): {detail}", reason.code())
        }
    }
}

pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().map_err(|e| LabError::Threads(e.to_string()))
}

pub fn run_simulate(cfg: &ExperimentConfig) -> Result<TrajectoryRecord> {
    let grid = cfg.grid()?;
    Ok(integrate(&cfg.initial(&grid)?, &cfg.coefficients()?, &cfg.integrator())?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConservationRow {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    pub rel_drift_mass: f64,
    pub rel_drift_energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConservationReport {
    #[serde(skip)]
    pub rows: Vec<ConservationRow>,
    pub max_drift_mass: f64,
    pub max_drift_energy: f64,
    pub mass_ok: bool,
    pub energy_ok: bool,
    pub status: String,
}

fn relative_drift(value: f64, initial: f64, floor: f64) -> f64 {
    let scale = initial.abs().max(floor);
    if scale == 0.0 {
        (value - initial).abs()
    } else {
        (value - initial).abs() / scale
    }
}

pub fn conservation_report(record: &TrajectoryRecord) -> ConservationReport {
    let first = record.observables[0];
    let rows: Vec<ConservationRow> = record
        .times
        .iter()
        .zip(&record.observables)
        .map(|(&t, o)| ConservationRow {
            t,
            mass: o.mass,
            energy: o.energy,
            rel_drift_mass: relative_drift(o.mass, first.mass, 0.0),
            rel_drift_energy: relative_drift(o.energy, first.energy, ENERGY_FLOOR),
        })
        .collect();
    let max_drift_mass = rows.iter().map(|r| r.rel_drift_mass).fold(0.0, f64::max);
    let max_drift_energy = rows.iter().map(|r| r.rel_drift_energy).fold(0.0, f64::max);
    ConservationReport {
        rows,
        max_drift_mass,
        max_drift_energy,
        mass_ok: max_drift_mass < MASS_DRIFT_TOLERANCE,
        energy_ok: max_drift_energy < ENERGY_DRIFT_TOLERANCE,
        status: status_text(&record.status),
    }
}

pub fn run_conservation(cfg: &ExperimentConfig) -> Result<ConservationReport> {
    Ok(conservation_report(&run_simulate(cfg)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub points: usize,
    pub dist_h1: f64,
    pub dist_l2: f64,
    pub wall_seconds: f64,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log dist_H1` against `log ε`.
    pub slope: Option<f64>,
    /// 95% Student-t half-width of the slope.
    pub slope_half_width: Option<f64>,
    /// Distances strictly decrease along the (decreasing) ε ladder.
    pub strictly_decreasing: bool,
    pub compatible: bool,
}

/// Sup over common snapshot times of the H¹ and L² distances.
fn trajectory_distance(a: &TrajectoryRecord, b: &TrajectoryRecord) -> Result<(f64, f64)> {
    let mut h1 = 0.0f64;
    let mut l2 = 0.0f64;
    for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
        let diff = x.sub(y)?;
        h1 = h1.max(sobolev_norm(&diff, 1.0)?);
        l2 = l2.max(sobolev_norm(&diff, 0.0)?);
    }
    Ok((h1, l2))
}

/// Ordinary least-squares slope of `y` on `x` with its 95% confidence
/// half-width (`None` with fewer than three points).
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<(f64, Option<f64>)> {
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    if n < 3 {
        return Some((slope, None));
    }
    let dof = (n - 2) as f64;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    let se = (rss / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof).ok()?.inverse_cdf(0.975);
    Some((slope, Some(t * se)))
}

pub fn run_epsilon_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    if cfg.model == ModelName::Bo {
        return Err(LabError::Config("the epsilon sweep needs an HBO or ILW model".into()));
    }
    let mut ladder = cfg.epsilons.clone();
    if ladder.is_empty() || ladder.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(LabError::Config("epsilons must be nonnegative and finite".into()));
    }
    ladder.sort_by(|a, b| b.total_cmp(a));
    if ladder.windows(2).any(|w| w[0] == w[1]) {
        return Err(LabError::Config("epsilons must be distinct".into()));
    }
    let base = cfg.base_coefficients()?;
    let compatible = is_bo_compatible(&base, COMPAT_TOLERANCE);
    if !compatible && !cfg.override_compat {
        return Err(LabError::Incompatible { lhs: 3.0 * base.a * base.c / (4.0 * base.d), b: base.b });
    }
    let bo = base.benjamin_ono();
    let integrator = cfg.integrator();
    let coarse = cfg.grid()?;
    let fine = cfg.fine_grid()?;
    let grid_for = |eps: f64| if eps < cfg.fine_below_epsilon { &fine } else { &coarse };

    let pool = thread_pool(cfg.threads)?;
    pool.install(|| {
        let needs_fine = ladder.iter().any(|&e| e < cfg.fine_below_epsilon);
        let grids: Vec<&Grid> = if needs_fine && fine.points() != coarse.points() { vec![&coarse, &fine] } else { vec![&coarse] };
        let baselines: Vec<(usize, TrajectoryRecord)> = grids
            .par_iter()
            .map(|g| Ok((g.points(), integrate(&cfg.initial(g)?, &bo, &integrator)?)))
            .collect::<Result<_>>()?;
        let baseline = |n: usize| &baselines.iter().find(|(p, _)| *p == n).expect("baseline for every grid").1;

        let rows: Vec<SweepRow> = ladder
            .par_iter()
            .map(|&eps| {
                let grid = grid_for(eps);
                let start = Instant::now();
                let record = integrate(&cfg.initial(grid)?, &cfg.coefficients_at(eps)?, &integrator)?;
                let wall = start.elapsed().as_secs_f64();
                let (dist_h1, dist_l2) = trajectory_distance(&record, baseline(grid.points()))?;
                Ok(SweepRow {
                    epsilon: eps,
                    points: grid.points(),
                    dist_h1,
                    dist_l2,
                    wall_seconds: wall,
                    status: status_text(&record.status),
                })
            })
            .collect::<Result<_>>()?;

        let usable: Vec<&SweepRow> =
            rows.iter().filter(|r| r.epsilon > 0.0 && r.dist_h1 > 0.0 && r.status == "completed").collect();
        let xs: Vec<f64> = usable.iter().map(|r| r.epsilon.ln()).collect();
        let ys: Vec<f64> = usable.iter().map(|r| r.dist_h1.ln()).collect();
        let fit = fit_slope(&xs, &ys);
        let strictly_decreasing = rows.windows(2).all(|w| w[1].dist_h1 < w[0].dist_h1);
        for w in rows.windows(2).filter(|w| w[1].dist_h1 >= w[0].dist_h1) {
            warn!("distance does not decrease from epsilon {} to {}", w[0].epsilon, w[1].epsilon);
        }
        Ok(SweepResult {
            rows,
            slope: fit.map(|f| f.0),
            slope_half_width: fit.and_then(|f| f.1),
            strictly_decreasing,
            compatible,
        })
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub lambda: f64,
    pub time: f64,
    pub dt: f64,
    /// `‖λ v(λ·, t) - v_λ(·, t/λ³)‖_{L²} / ‖v_λ‖_{L²}`.
    pub mismatch_l2: f64,
    /// Larger of the two runs' relative step-halving differences.
    pub self_convergence: f64,
}

fn final_state(v0: &RealField, coeffs: &ModelCoefficients, cfg: IntegratorConfig) -> Result<RealField> {
    let record = integrate(v0, coeffs, &cfg.with_stride(usize::MAX))?;
    if !record.completed() {
        return Err(LabError::Config(format!("scaling run {}", status_text(&record.status))));
    }
    Ok(record.final_snapshot().expect("final snapshot").clone())
}

fn relative_l2(a: &RealField, b: &RealField) -> Result<f64> {
    let scale = sobolev_norm(b, 0.0)?;
    let diff = sobolev_norm(&a.sub(b)?, 0.0)?;
    Ok(if scale == 0.0 { diff } else { diff / scale })
}

/// `v_λ(x, t) = λ v(λx, λ³t)` solves the equation with `b, c` scaled by `λ`
/// and `ε = 1`. The scaled data live on a period `L/λ` with the same `N`,
/// so every sample maps exactly.
pub fn run_scaling_check(cfg: &ExperimentConfig) -> Result<ScalingReport> {
    let lambda = cfg.lambda;
    if ![1.0, 2.0, 4.0, 8.0].contains(&lambda) {
        return Err(LabError::Config(format!("lambda = {lambda} is not representable; use 1, 2, 4 or 8")));
    }
    if cfg.model != ModelName::Hbo {
        return Err(LabError::Config("the scaling check uses the HBO model".into()));
    }
    let base = cfg.base_coefficients()?;
    let original = base.with_epsilon(1.0);
    let scaled = ModelCoefficients::hbo(base.a, base.b * lambda, base.c * lambda, base.d, 1.0);
    let grid = cfg.grid()?;
    let small = Grid::new(grid.length() / lambda, grid.points())?;
    let v0 = cfg.initial(&grid)?;
    let v0_scaled = RealField::new(&small, v0.samples().iter().map(|x| lambda * x).collect())?;
    let t = cfg.scaling_time;
    let t_scaled = t / lambda.powi(3);
    let base_cfg = IntegratorConfig { t_end: t, snapshot_stride: 1, ..cfg.integrator() };
    let run = |v: &RealField, c: &ModelCoefficients, t_end: f64, dt: f64| {
        final_state(v, c, IntegratorConfig { t_end, dt, ..base_cfg })
    };
    let dt = cfg.scaling_dt;
    let pool = thread_pool(cfg.threads)?;
    let (u, u_half, w, w_half) = pool.install(|| -> Result<_> {
        let jobs = [(&v0, &original, t, dt), (&v0, &original, t, dt / 2.0), (&v0_scaled, &scaled, t_scaled, dt), (&v0_scaled, &scaled, t_scaled, dt / 2.0)];
        let mut out: Vec<RealField> = jobs.par_iter().map(|(v, c, te, h)| run(v, c, *te, *h)).collect::<Result<_>>()?;
        let w_half = out.pop().unwrap();
        let w = out.pop().unwrap();
        let u_half = out.pop().unwrap();
        let u = out.pop().unwrap();
        Ok((u, u_half, w, w_half))
    })?;
    let mapped = RealField::new(&small, u.samples().iter().map(|x| lambda * x).collect())?;
    Ok(ScalingReport {
        lambda,
        time: t,
        dt,
        mismatch_l2: relative_l2(&mapped, &w)?,
        self_convergence: relative_l2(&u, &u_half)?.max(relative_l2(&w, &w_half)?),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowmapRow {
    pub delta: f64,
    pub dist_h1: f64,
    /// `dist_H1 / (δ ‖φ‖_{H¹})`; undefined at `δ = 0`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowmapReport {
    pub band: Band,
    pub rows: Vec<FlowmapRow>,
    /// `max ratio / min ratio` over `δ > 0`.
    pub spread: Option<f64>,
    /// `‖P_LO φ‖_{L²} / ‖φ‖_{L²}` of the perturbation.
    pub low_fraction: f64,
    pub status: String,
}

/// Perturbation direction with `‖φ‖_{H¹} = 1`: a projected wave packet for
/// the high band, a projected bump for the low band.
pub fn perturbation(cfg: &ExperimentConfig, grid: &Grid) -> Result<RealField> {
    let center = cfg.center.unwrap_or(grid.length() / 2.0);
    let width = cfg.perturbation_width;
    let (profile, band) = match cfg.perturbation_band {
        Band::High => (
            Profile::WavePacket { amplitude: 1.0, center, width, wavenumber: cfg.perturbation_wavenumber },
            Projection::HiUpper,
        ),
        Band::Low => (Profile::Gaussian { amplitude: 1.0, center, width }, Projection::LoUpper),
    };
    let phi = project_real(&profile.sample(grid)?, band)?.inverse()?;
    let norm = sobolev_norm(&phi, 1.0)?;
    if norm == 0.0 {
        return Err(LabError::Config("perturbation vanishes after projection".into()));
    }
    Ok(phi.scaled(1.0 / norm))
}

pub fn run_flowmap_continuity(cfg: &ExperimentConfig) -> Result<FlowmapReport> {
    if cfg.deltas.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(LabError::Config("deltas must be nonnegative and finite".into()));
    }
    let grid = cfg.grid()?;
    let coeffs = cfg.coefficients()?;
    let integrator = IntegratorConfig { snapshot_stride: usize::MAX, ..cfg.integrator() };
    let v0 = cfg.initial(&grid)?;
    let phi = perturbation(cfg, &grid)?;
    let phi_norm = sobolev_norm(&phi, 1.0)?;
    let low = project_real(&phi, Projection::LoUpper)?.l2_norm() / phi.l2_norm();

    let pool = thread_pool(cfg.threads)?;
    let (base, perturbed) = pool.install(|| -> Result<_> {
        let base = integrate(&v0, &coeffs, &integrator)?;
        let perturbed: Vec<TrajectoryRecord> = cfg
            .deltas
            .par_iter()
            .map(|&delta| Ok(integrate(&v0.add(&phi.scaled(delta))?, &coeffs, &integrator)?))
            .collect::<Result<_>>()?;
        Ok((base, perturbed))
    })?;
    let mut status = status_text(&base.status);
    let reference = base.final_snapshot().expect("final snapshot");
    let mut rows = Vec::new();
    for (&delta, record) in cfg.deltas.iter().zip(&perturbed) {
        if !record.completed() {
            status = format!("delta {delta}: {}", status_text(&record.status));
        }
        let dist = sobolev_norm(&record.final_snapshot().expect("final snapshot").sub(reference)?, 1.0)?;
        let ratio = (delta > 0.0).then(|| dist / (delta * phi_norm));
        rows.push(FlowmapRow { delta, dist_h1: dist, ratio });
    }
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let spread = (!ratios.is_empty()).then(|| {
        ratios.iter().cloned().fold(f64::MIN, f64::max) / ratios.iter().cloned().fold(f64::MAX, f64::min)
    });
    Ok(FlowmapReport { band: cfg.perturbation_band, rows, spread, low_fraction: low, status })
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeRow {
    pub t: f64,
    pub residual_35: f64,
    pub residual_36: f64,
    pub compat: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeReport {
    pub rows: Vec<GaugeRow>,
    pub max_residual_35: f64,
    pub max_residual_36: f64,
    pub warnings: Vec<String>,
}

/// Gauge residuals on `(time, field)` pairs. Snapshots with a nonzero mean
/// have it removed first, with a warning.
pub fn gauge_residuals(snapshots: &[(f64, RealField)], coeffs: &ModelCoefficients, threads: usize) -> Result<GaugeReport> {
    let pool = thread_pool(threads)?;
    let evaluated: Vec<(GaugeRow, Option<String>)> = pool.install(|| {
        snapshots
            .par_iter()
            .map(|(t, v)| {
                let mean = v.mean();
                let (v, note) = if mean != 0.0 && mean.abs() >= 1e-12 * v.max_abs() {
                    (v.mean_free(), Some(format!("t = {t}: subtracted mean {mean:e} before the gauge transform")))
                } else {
                    (v.clone(), None)
                };
                let state = gauge_forward(&v, coeffs)?;
                let row = GaugeRow {
                    t: *t,
                    residual_35: recovery_residual_35(&v, &state)?,
                    residual_36: recovery_residual_36(&v, &state)?,
                    compat: state.compatible,
                };
                Ok((row, note))
            })
            .collect::<Result<_>>()
    })?;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (row, note) in evaluated {
        if let Some(note) = note {
            warn!("{note}");
            warnings.push(note);
        }
        rows.push(row);
    }
    let max_residual_35 = rows.iter().map(|r| r.residual_35).fold(0.0, f64::max);
    let max_residual_36 = rows.iter().map(|r| r.residual_36).fold(0.0, f64::max);
    Ok(GaugeReport { rows, max_residual_35, max_residual_36, warnings })
}

pub fn run_gauge_diagnose(cfg: &ExperimentConfig) -> Result<GaugeReport> {
    let coeffs = cfg.coefficients()?;
    let snapshots: Vec<(f64, RealField)> = match &cfg.snapshot_dir {
        Some(dir) => {
            let dt = match crate::output::read_manifest(&dir.join(crate::output::MANIFEST_NAME)) {
                Ok(m) => m.config.dt,
                Err(_) => cfg.dt,
            };
            read_snapshot_dir(dir)?.into_iter().map(|(step, v)| (step as f64 * dt, v)).collect()
        }
        None => {
            let record = run_simulate(cfg)?;
            record.snapshot_times.iter().copied().zip(record.snapshots).collect()
        }
    };
    gauge_residuals(&snapshots, &coeffs, cfg.threads)
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffsReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// `3ac / (4d)`, which equals `b` exactly in the compatible case.
    pub three_ac_over_4d: f64,
    pub relative_gap: f64,
    pub compatible: bool,
    pub gauge_constant: f64,
}

pub fn run_coeffs(cfg: &ExperimentConfig) -> Result<CoeffsReport> {
    let c = cfg.base_coefficients()?;
    let lhs = 3.0 * c.a * c.c / (4.0 * c.d);
    Ok(CoeffsReport {
        a: c.a,
        b: c.b,
        c: c.c,
        d: c.d,
        three_ac_over_4d: lhs,
        relative_gap: (lhs - c.b) / c.b,
        compatible: is_bo_compatible(&c, COMPAT_TOLERANCE),
        gauge_constant: c.gauge_constant(),
    })
}
