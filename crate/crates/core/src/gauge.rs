//! Gauge transformation diagnostics.
//!
//! With `∂xF = Av` and `A = 2d/(3a)`, set `W = P_{+hi}(e^{iF})` and
//! `w = ∂xW`. Since `∂x e^{iF} = iAv e^{iF}`, splitting `∂x e^{iF}` with
//! `1 = P_{+hi} + P_lo + P_{-hi}` gives back
//!
//! ```text
//! iAv = e^{-iF} w + e^{-iF} ∂x P_lo(e^{iF}) + e^{-iF} ∂x P_{-hi}(e^{iF})
//! ```
//!
//! whose discrete residual is [`recovery_residual_35`]. Its high-frequency
//! localized form, with the inner projections moved onto `e^{-iF}`, is
//! [`recovery_residual_36`]. That one holds only up to frequency leakage
//! across the smooth cutoff bands.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{forward_transform, ComplexField, RealField, SpectralField};
use crate::littlewood_paley::{project, Projection};
use crate::models::{is_bo_compatible, ModelCoefficients};
use crate::multiplier::MultiplierSymbol;

/// Relative tolerance of the compatibility flag `3ac/4d = b`.
pub const COMPAT_TOLERANCE: f64 = 1e-9;

/// Mean-zero primitive `F` with `∂xF = A v`. Rejects `v` whose mean is not
/// zero to `1e-12` of its sup norm.
pub fn antiderivative(v: &RealField, a: f64) -> Result<RealField> {
    let mean = v.mean();
    if mean != 0.0 && mean.abs() >= 1e-12 * v.max_abs() {
        return Err(Error::NonZeroMean { mean });
    }
    let grid = v.grid();
    let nyq = grid.nyquist_index();
    let mut spectrum = forward_transform(v)?;
    for (k, c) in spectrum.coeffs_mut().iter_mut().enumerate() {
        *c = if k == 0 || k == nyq { Complex64::new(0.0, 0.0) } else { *c * a / Complex64::new(0.0, grid.wavenumber(k)) };
    }
    spectrum.inverse()
}

/// `e^{iF}` pointwise.
pub fn phase(f: &RealField) -> ComplexField {
    let samples = f.samples().iter().map(|&x| Complex64::new(0.0, x).exp()).collect();
    ComplexField::new(f.grid(), samples).unwrap_or_else(|_| unreachable!("unimodular samples are finite"))
}

#[derive(Debug, Clone)]
pub struct GaugeState {
    pub f: RealField,
    pub a: f64,
    pub phase: ComplexField,
    /// Spectrum of `W = P_{+hi}(e^{iF})`.
    pub w_big: SpectralField,
    /// Spectrum of `w = ∂xW`.
    pub w: SpectralField,
    pub compatible: bool,
    /// `‖w - P_{+hi}(iAv e^{iF})‖ / ‖w‖`, zero when `w = 0`.
    pub commutator_residual: f64,
}

impl GaugeState {
    /// Build the state from a given primitive `F` of `A v`. Any additive
    /// constant in `F` only rotates `W` and `w` by a global phase.
    pub fn from_antiderivative(v: &RealField, f: RealField, coeffs: &ModelCoefficients) -> Result<Self> {
        if !f.grid().same_as(v.grid()) {
            return Err(Error::GridMismatch);
        }
        let grid = v.grid();
        let a = coeffs.gauge_constant();
        let phase = phase(&f);
        let w_big = project(&phase.forward(), Projection::PlusHi)?;
        let w = w_big.apply(&MultiplierSymbol::derivative(grid, 1))?;

        let iav: Vec<Complex64> =
            v.samples().iter().zip(phase.samples()).map(|(&x, p)| Complex64::new(0.0, a * x) * p).collect();
        let direct = project(&ComplexField::new(grid, iav)?.forward(), Projection::PlusHi)?;
        let norm = w.l2_norm();
        let commutator_residual = if norm == 0.0 { 0.0 } else { w.sub(&direct)?.l2_norm() / norm };

        Ok(Self { f, a, phase, w_big, w, compatible: is_bo_compatible(coeffs, COMPAT_TOLERANCE), commutator_residual })
    }
}

/// `F`, `e^{iF}`, `W` and `w` for a mean-zero `v`.
pub fn gauge_forward(v: &RealField, coeffs: &ModelCoefficients) -> Result<GaugeState> {
    let f = antiderivative(v, coeffs.gauge_constant())?;
    GaugeState::from_antiderivative(v, f, coeffs)
}

fn derivative_of_projection(phase: &SpectralField, which: Projection) -> Result<ComplexField> {
    Ok(project(phase, which)?.apply(&MultiplierSymbol::derivative(phase.grid(), 1))?.inverse_complex())
}

fn i_a_v(v: &RealField, a: f64) -> ComplexField {
    let samples = v.samples().iter().map(|&x| Complex64::new(0.0, a * x)).collect();
    ComplexField::new(v.grid(), samples).unwrap_or_else(|_| unreachable!("finite field"))
}

/// `‖iAv - e^{-iF}(w + ∂xP_lo e^{iF} + ∂xP_{-hi} e^{iF})‖ / ‖Av‖`.
pub fn recovery_residual_35(v: &RealField, state: &GaugeState) -> Result<f64> {
    let lhs = i_a_v(v, state.a);
    let scale = lhs.l2_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let spectrum = state.phase.forward();
    let inner = state
        .w
        .inverse_complex()
        .add(&derivative_of_projection(&spectrum, Projection::Lo)?)?
        .add(&derivative_of_projection(&spectrum, Projection::MinusHi)?)?;
    let rhs = state.phase.conj().mul(&inner)?;
    Ok(lhs.sub(&rhs)?.l2_norm() / scale)
}

/// Residual of the `P_{+HI}`-localized identity
///
/// ```text
/// iA P_{+HI} v = P_{+HI}(e^{-iF} w) + P_{+HI}(P_{+hi}(e^{-iF}) ∂x P_lo(e^{iF}))
///              + P_{+HI}(P_{+HI}(e^{-iF}) ∂x P_{-hi}(e^{iF}))
/// ```
///
/// relative to `‖A P_{+HI} v‖`.
pub fn recovery_residual_36(v: &RealField, state: &GaugeState) -> Result<f64> {
    let lhs = project(&i_a_v(v, state.a).forward(), Projection::PlusHiUpper)?;
    let scale = lhs.l2_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let spectrum = state.phase.forward();
    let conj = state.phase.conj();
    let conj_spectrum = conj.forward();
    let first = conj.mul(&state.w.inverse_complex())?;
    let second = project(&conj_spectrum, Projection::PlusHi)?
        .inverse_complex()
        .mul(&derivative_of_projection(&spectrum, Projection::Lo)?)?;
    let third = project(&conj_spectrum, Projection::PlusHiUpper)?
        .inverse_complex()
        .mul(&derivative_of_projection(&spectrum, Projection::MinusHi)?)?;
    let rhs = project(&first.add(&second)?.add(&third)?.forward(), Projection::PlusHiUpper)?;
    Ok(lhs.sub(&rhs)?.l2_norm() / scale)
}
