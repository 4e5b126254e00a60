//! Conserved functionals, Sobolev norms and the frequency-interaction
//! diagnostics of the linearized flow.

use crate::error::{Error, Result};
use crate::field::{RealField, SpectralField};
use crate::models::{Model, ModelCoefficients, ModelKind};

/// Snapshot of the monitored quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSet {
    /// Zero Fourier coefficient (spatial mean).
    pub mean: f64,
    pub mass: f64,
    pub energy: f64,
    pub l2_norm: f64,
    pub h_half_norm: f64,
    pub h1_norm: f64,
}

impl ObservableSet {
    pub fn compute(model: &Model, v: &RealField, spectrum: &SpectralField) -> Result<Self> {
        Ok(Self {
            mean: spectrum.coeffs()[0].re,
            mass: mass(v),
            energy: model.energy_from_parts(v.samples(), spectrum.coeffs())?,
            l2_norm: sobolev_norm_spectral(spectrum, 0.0),
            h_half_norm: sobolev_norm_spectral(spectrum, 0.5),
            h1_norm: sobolev_norm_spectral(spectrum, 1.0),
        })
    }
}

/// `M(v) = ∫ v² dx` by trapezoidal quadrature.
pub fn mass(v: &RealField) -> f64 {
    v.samples().iter().map(|x| x * x).sum::<f64>() * v.grid().spacing()
}

/// Energy of `v` under `coeffs`, with 2/3 dealiasing of the cubic terms.
pub fn energy(v: &RealField, coeffs: &ModelCoefficients) -> Result<f64> {
    Model::new(v.grid(), *coeffs)?.energy(v)
}

/// `‖v‖_{H^s} = (L Σ_m (1 + ξ_m²)^s |v̂_m|²)^{1/2}`.
pub fn sobolev_norm(v: &RealField, s: f64) -> Result<f64> {
    Ok(sobolev_norm_spectral(&v.forward()?, s))
}

pub fn sobolev_norm_spectral(spectrum: &SpectralField, s: f64) -> f64 {
    let grid = spectrum.grid();
    let sum: f64 = spectrum
        .coeffs()
        .iter()
        .zip(grid.wavenumbers())
        .map(|(c, xi)| weight(*xi, s) * c.norm_sqr())
        .sum();
    libm::sqrt(grid.length() * sum)
}

fn weight(xi: f64, s: f64) -> f64 {
    let base = 1.0 + xi * xi;
    if s == 0.0 {
        1.0
    } else if s == 1.0 {
        base
    } else {
        libm::pow(base, s)
    }
}

/// `‖u - v‖_{H^s}` for two fields on the same grid.
pub fn sobolev_distance(u: &RealField, v: &RealField, s: f64) -> Result<f64> {
    sobolev_norm(&u.sub(v)?, s)
}

/// `ω(ξ)`, the dispersion relation of the linear part.
pub fn dispersion_relation(xi: f64, coeffs: &ModelCoefficients) -> f64 {
    coeffs.dispersion(xi)
}

/// Inflection point `ξ* = b/(3aε)` of `ω` on `ξ > 0`, where the curvature
/// of the HBO dispersion changes sign. `+∞` when the cubic term is absent.
pub fn inflection_wavenumber(coeffs: &ModelCoefficients) -> Result<f64> {
    match coeffs.kind {
        ModelKind::Bo => Ok(f64::INFINITY),
        ModelKind::Hbo if coeffs.epsilon == 0.0 || coeffs.a == 0.0 => Ok(f64::INFINITY),
        ModelKind::Hbo => Ok(coeffs.b / (3.0 * coeffs.a * coeffs.epsilon)),
        ModelKind::Ilw { .. } => Err(Error::InvalidCoefficients("inflection point is defined for HBO/BO only")),
    }
}

/// Modulation variable `σ = τ - ω(ξ)`.
pub fn modulation(xi: f64, tau: f64, coeffs: &ModelCoefficients) -> f64 {
    tau - coeffs.dispersion(xi)
}

/// Resonance function `σ - σ₁ - σ₂` for `ξ = ξ₁ + ξ₂` in the region
/// `ξ ≥ 0, ξ₁ ≥ 0, ξ₂ ≤ 0`, in factored form `ξξ₂(3aεξ₁ - 2b)`.
pub fn resonance_function(xi1: f64, xi2: f64, coeffs: &ModelCoefficients) -> Result<f64> {
    let xi = xi1 + xi2;
    if !(xi1 >= 0.0 && xi2 <= 0.0 && xi >= 0.0) {
        return Err(Error::SignPattern);
    }
    let ae = match coeffs.kind {
        ModelKind::Hbo => coeffs.a * coeffs.epsilon,
        ModelKind::Bo => 0.0,
        ModelKind::Ilw { .. } => {
            return Err(Error::InvalidCoefficients("resonance function is defined for HBO/BO only"))
        }
    };
    Ok(xi * xi2 * (3.0 * ae * xi1 - 2.0 * coeffs.b))
}
