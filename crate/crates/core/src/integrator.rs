//! Integrating-factor RK4 time stepping with the exact free group.
//!
//! With `u(t) = exp(-tL) v̂(t)` the system `∂t v̂ = L v̂ + N(v̂)` becomes
//! `∂t u = exp(-tL) N(exp(tL) u)`, which carries no linear stiffness. One
//! classical RK4 step on `u`, written back in terms of `v̂` with
//! `E = exp(L dt/2)`:
//!
//! ```text
//! k1 = N(v)
//! k2 = N(E (v + dt/2 k1))
//! k3 = N(E v + dt/2 k2)
//! k4 = N(E² v + dt E k3)
//! v' = E² v + dt/6 (E² k1 + 2E (k2 + k3) + k4)
//! ```

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{forward_transform, RealField, SpectralField};
use crate::grid::Grid;
use crate::models::{linear_symbol, Model, ModelCoefficients};
use crate::observables::ObservableSet;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// CFL safety factor: `dt ≤ CFL_FACTOR · Δx / max|v|`.
pub const CFL_FACTOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Record a snapshot every `snapshot_stride` steps (and at the end).
    pub snapshot_stride: usize,
    pub dealias: bool,
    /// Abort once `max|v|` exceeds this.
    pub max_amplitude: f64,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self { dt, t_end, snapshot_stride: 1, dealias: true, max_amplitude: 1e3 }
    }

    pub fn with_stride(self, snapshot_stride: usize) -> Self {
        Self { snapshot_stride, ..self }
    }

    pub fn with_dealias(self, dealias: bool) -> Self {
        Self { dealias, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig("dt must be positive"));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::InvalidConfig("t_end must be positive"));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidConfig("snapshot stride must be at least 1"));
        }
        if self.max_amplitude.is_nan() || self.max_amplitude <= 0.0 {
            return Err(Error::InvalidConfig("max amplitude must be positive"));
        }
        let steps = self.t_end / self.dt;
        if (steps - libm::round(steps)).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::InvalidConfig("t_end must be an integer multiple of dt"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        libm::round(self.t_end / self.dt) as usize
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub enum AbortReason {
    BlowUp { step: usize, max_abs: f64 },
    NonFinite { step: usize, error: Error },
    CflViolated { step: usize, dt: f64, limit: f64 },
}

impl AbortReason {
    pub fn code(&self) -> &'static str {
        match self {
            AbortReason::BlowUp { .. } => "blow-up",
            AbortReason::NonFinite { .. } => "non-finite",
            AbortReason::CflViolated { .. } => "cfl",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Completed,
    Aborted(AbortReason),
}

/// Output of one integration run.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub grid: Grid,
    pub coefficients: ModelCoefficients,
    pub config: IntegratorConfig,
    pub code_version: &'static str,
    /// Time of every completed step, starting at 0.
    pub times: Vec<f64>,
    pub observables: Vec<ObservableSet>,
    pub snapshot_steps: Vec<usize>,
    pub snapshot_times: Vec<f64>,
    pub snapshots: Vec<RealField>,
    pub status: RunStatus,
}

impl TrajectoryRecord {
    pub fn completed(&self) -> bool {
        self.status == RunStatus::Completed
    }

    pub fn final_snapshot(&self) -> Option<&RealField> {
        self.snapshots.last()
    }
}

/// `exp(tL)` applied modewise: the free group of the linear part.
pub fn linear_propagator(spectrum: &SpectralField, t: f64, coeffs: &ModelCoefficients) -> Result<SpectralField> {
    spectrum.apply(&linear_symbol(spectrum.grid(), coeffs).exponential(t))
}

/// 2/3 rule: zero every mode with `|m| > N/3`.
pub fn dealias(spectrum: &SpectralField) -> SpectralField {
    let grid = spectrum.grid();
    let n = grid.points();
    let coeffs = spectrum
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| if 3 * grid.mode(k).unsigned_abs() as usize <= n { *c } else { Complex64::new(0.0, 0.0) })
        .collect();
    SpectralField::from_vec_unchecked(grid, coeffs)
}

/// Fixed-step IF-RK4 stepper for one model.
#[derive(Debug, Clone)]
pub struct Stepper {
    model: Model,
    dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
}

impl Stepper {
    /// `dt` may be negative for backward integration.
    pub fn new(model: Model, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::InvalidConfig("dt must be finite and nonzero"));
        }
        let lin = model.linear_symbol();
        let half = lin.exponential(0.5 * dt).values().to_vec();
        let full = lin.exponential(dt).values().to_vec();
        Ok(Self { model, dt, half, full })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance `v` by one step in place. On error `v` is left untouched.
    pub fn step(&self, v: &mut [Complex64]) -> Result<()> {
        let dt = self.dt;
        let h = 0.5 * dt;
        let (e, e2) = (&self.half, &self.full);
        let k1 = self.model.nonlinear(v)?;
        let stage: Vec<Complex64> = v.iter().zip(&k1).zip(e).map(|((x, k), e)| e * (x + h * k)).collect();
        let k2 = self.model.nonlinear(&stage)?;
        let stage: Vec<Complex64> = v.iter().zip(&k2).zip(e).map(|((x, k), e)| e * x + h * k).collect();
        let k3 = self.model.nonlinear(&stage)?;
        let stage: Vec<Complex64> =
            v.iter().zip(&k3).zip(e).zip(e2).map(|(((x, k), e), e2)| e2 * x + dt * e * k).collect();
        let k4 = self.model.nonlinear(&stage)?;
        let sixth = dt / 6.0;
        for i in 0..v.len() {
            v[i] = e2[i] * v[i] + sixth * (e2[i] * k1[i] + 2.0 * e[i] * (k2[i] + k3[i]) + k4[i]);
        }
        Ok(())
    }

    pub fn advance(&self, v: &mut SpectralField, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step(v.coeffs_mut())?;
        }
        Ok(())
    }
}

/// One IF-RK4 step of size `dt` for the model `coeffs`, with dealiasing.
pub fn step_ifrk4(v: &RealField, dt: f64, coeffs: &ModelCoefficients) -> Result<RealField> {
    let stepper = Stepper::new(Model::new(v.grid(), *coeffs)?, dt)?;
    let mut spectrum = forward_transform(v)?;
    stepper.step(spectrum.coeffs_mut())?;
    spectrum.inverse()
}

/// Nonlinear CFL limit; unbounded when the model has no nonlinear terms.
fn cfl_limit(v: &RealField, coeffs: &ModelCoefficients) -> f64 {
    let nonlinear = coeffs.c != 0.0 || (coeffs.has_higher_order_terms() && coeffs.d != 0.0);
    let m = v.max_abs();
    if m == 0.0 || !nonlinear {
        f64::INFINITY
    } else {
        CFL_FACTOR * v.grid().spacing() / m
    }
}

/// Integrate from `v0` to `cfg.t_end`, recording observables every step
/// and snapshots every `cfg.snapshot_stride` steps. Guard trips end the run
/// early with a partial record whose last snapshot is the last valid state.
pub fn integrate(v0: &RealField, coeffs: &ModelCoefficients, cfg: &IntegratorConfig) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let grid = v0.grid().clone();
    let model = Model::new(&grid, *coeffs)?.with_dealias(cfg.dealias);
    let limit = cfl_limit(v0, coeffs);
    if cfg.dt > limit {
        return Err(Error::CflViolation { dt: cfg.dt, limit });
    }
    let mut spectrum = forward_transform(v0)?;
    let stepper = Stepper::new(model, cfg.dt)?;

    let mut record = TrajectoryRecord {
        grid: grid.clone(),
        coefficients: *coeffs,
        config: *cfg,
        code_version: CODE_VERSION,
        times: alloc::vec![0.0],
        observables: alloc::vec![ObservableSet::compute(stepper.model(), v0, &spectrum)?],
        snapshot_steps: alloc::vec![0],
        snapshot_times: alloc::vec![0.0],
        snapshots: alloc::vec![v0.clone()],
        status: RunStatus::Completed,
    };

    let steps = cfg.steps();
    let mut last_valid = v0.clone();
    let mut last_step = 0;
    for step in 1..=steps {
        let abort = match advance_once(&stepper, &mut spectrum) {
            Ok(v) => {
                let max_abs = v.max_abs();
                let limit = cfl_limit(&v, coeffs);
                if max_abs > cfg.max_amplitude {
                    Some(AbortReason::BlowUp { step, max_abs })
                } else if cfg.dt > limit {
                    Some(AbortReason::CflViolated { step, dt: cfg.dt, limit })
                } else {
                    match ObservableSet::compute(stepper.model(), &v, &spectrum) {
                        Ok(obs) => {
                            let t = step as f64 * cfg.dt;
                            record.times.push(t);
                            record.observables.push(obs);
                            if step % cfg.snapshot_stride == 0 || step == steps {
                                record.snapshot_steps.push(step);
                                record.snapshot_times.push(t);
                                record.snapshots.push(v.clone());
                            }
                            last_valid = v;
                            last_step = step;
                            None
                        }
                        Err(error) => Some(AbortReason::NonFinite { step, error }),
                    }
                }
            }
            Err(error) => Some(AbortReason::NonFinite { step, error }),
        };
        if let Some(reason) = abort {
            if record.snapshot_steps.last() != Some(&last_step) {
                record.snapshot_steps.push(last_step);
                record.snapshot_times.push(last_step as f64 * cfg.dt);
                record.snapshots.push(last_valid);
            }
            record.status = RunStatus::Aborted(reason);
            return Ok(record);
        }
    }
    Ok(record)
}

fn advance_once(stepper: &Stepper, spectrum: &mut SpectralField) -> Result<RealField> {
    stepper.step(spectrum.coeffs_mut())?;
    spectrum.inverse()
}
