//! Sampled fields on a [`Grid`] and their Fourier coefficients.
//!
//! The coefficient of mode `m` is `(1/N) Σ_j v_j exp(-iξ_m x_j)`, the
//! trapezoidal approximation of `(1/L) ∫ v exp(-iξx) dx`. With this
//! normalization a constant field `v ≡ c` has zero mode `c` and
//! `cos(kx)` has coefficients `1/2` at `±k`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::multiplier::MultiplierSymbol;

/// Imaginary residue (relative to the field's sup norm) above which an
/// inverse transform is not considered real.
pub const REALNESS_TOLERANCE: f64 = 1e-10;

/// Real samples `v(x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    samples: Vec<f64>,
}

/// Fourier coefficients in transform order (see [`Grid`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

/// Complex samples, e.g. `exp(iF)` or the output of `P±`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl RealField {
    pub fn new(grid: &Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.points() {
            return Err(Error::LengthMismatch { expected: grid.points(), got: samples.len() });
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { grid: grid.clone(), samples })
    }

    pub(crate) fn from_vec_unchecked(grid: &Grid, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), grid.points());
        Self { grid: grid.clone(), samples }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_vec_unchecked(grid, vec![0.0; grid.points()])
    }

    /// Samples `f(x_j)`; fails if `f` produces a non-finite value.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.coordinates().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Trapezoidal `(∫ v² dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.samples.iter().map(|v| v * v).sum::<f64>() * self.grid.spacing())
    }

    /// Copy with the spatial mean removed.
    pub fn mean_free(&self) -> Self {
        let mean = self.mean();
        Self::from_vec_unchecked(&self.grid, self.samples.iter().map(|v| v - mean).collect())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_vec_unchecked(&self.grid, self.samples.iter().map(|v| v * factor).collect())
    }

    pub fn add(&self, other: &RealField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &RealField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self::from_vec_unchecked(&self.grid, samples))
    }

    /// Periodic translation by a whole number of cells: `out_j = v_{j - cells}`.
    pub fn translated(&self, cells: isize) -> Self {
        let n = self.samples.len() as isize;
        let samples = (0..n).map(|j| self.samples[(j - cells).rem_euclid(n) as usize]).collect();
        Self::from_vec_unchecked(&self.grid, samples)
    }

    /// Reflection `x ↦ -x` on the periodic grid: `out_j = v_{-j mod N}`.
    pub fn reflected(&self) -> Self {
        let n = self.samples.len();
        let samples = (0..n).map(|j| self.samples[(n - j) % n]).collect();
        Self::from_vec_unchecked(&self.grid, samples)
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn forward(&self) -> Result<SpectralField> {
        forward_transform(self)
    }
}

/// Discrete Fourier transform of a real field.
pub fn forward_transform(v: &RealField) -> Result<SpectralField> {
    if let Some(index) = v.samples.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFiniteSample { index });
    }
    let mut buf: Vec<Complex64> = v.samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    forward_in_place(&v.grid, &mut buf);
    Ok(SpectralField { grid: v.grid.clone(), coeffs: buf })
}

/// Inverse transform of a conjugate-symmetric spectrum back to real samples.
pub fn inverse_transform(spectrum: &SpectralField) -> Result<RealField> {
    let mut buf = spectrum.coeffs.clone();
    spectrum.grid.plan().inverse(&mut buf);
    let scale = buf.iter().fold(0.0_f64, |m, c| m.max(c.re.abs()).max(c.im.abs()));
    let residue = buf.iter().fold(0.0_f64, |m, c| m.max(c.im.abs()));
    if !scale.is_finite() {
        return Err(Error::NonFiniteSpectrum { stage: "inverse transform" });
    }
    if scale > 0.0 && residue > REALNESS_TOLERANCE * scale {
        return Err(Error::NotConjugateSymmetric { residue: residue / scale });
    }
    Ok(RealField::from_vec_unchecked(&spectrum.grid, buf.into_iter().map(|c| c.re).collect()))
}

pub(crate) fn forward_in_place(grid: &Grid, buf: &mut [Complex64]) {
    grid.plan().forward(buf);
    let inv_n = 1.0 / grid.points() as f64;
    for c in buf.iter_mut() {
        *c *= inv_n;
    }
}

pub(crate) fn inverse_in_place(grid: &Grid, buf: &mut [Complex64]) {
    grid.plan().inverse(buf);
}

impl SpectralField {
    pub fn new(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.points() {
            return Err(Error::LengthMismatch { expected: grid.points(), got: coeffs.len() });
        }
        Ok(Self { grid: grid.clone(), coeffs })
    }

    pub(crate) fn from_vec_unchecked(grid: &Grid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.points());
        Self { grid: grid.clone(), coeffs }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_vec_unchecked(grid, vec![Complex64::new(0.0, 0.0); grid.points()])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of signed mode `m` (zero if `m` is off the grid).
    pub fn mode(&self, m: i64) -> Complex64 {
        self.grid.index_of(m).map_or(Complex64::new(0.0, 0.0), |k| self.coeffs[k])
    }

    pub fn set_mode(&mut self, m: i64, value: Complex64) {
        if let Some(k) = self.grid.index_of(m) {
            self.coeffs[k] = value;
        }
    }

    /// Largest `|c(-m) - conj(c(m))|` over all modes.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.coeffs.len();
        (0..n)
            .map(|k| (self.coeffs[(n - k) % n] - self.coeffs[k].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `(L Σ_m |c_m|²)^{1/2}`, equal to the trapezoidal L² norm of the samples.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.grid.length() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>())
    }

    pub fn apply(&self, symbol: &MultiplierSymbol) -> Result<Self> {
        apply_multiplier(self, symbol)
    }

    pub fn inverse(&self) -> Result<RealField> {
        inverse_transform(self)
    }

    /// Inverse transform without the realness check.
    pub fn inverse_complex(&self) -> ComplexField {
        let mut buf = self.coeffs.clone();
        inverse_in_place(&self.grid, &mut buf);
        ComplexField { grid: self.grid.clone(), samples: buf }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_vec_unchecked(&self.grid, self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &SpectralField) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self::from_vec_unchecked(&self.grid, coeffs))
    }

    pub fn sub(&self, other: &SpectralField) -> Result<Self> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }
}

/// Coefficientwise product with a cached symbol.
pub fn apply_multiplier(spectrum: &SpectralField, symbol: &MultiplierSymbol) -> Result<SpectralField> {
    if !spectrum.grid.same_as(symbol.grid()) {
        return Err(Error::GridMismatch);
    }
    let coeffs = spectrum.coeffs.iter().zip(symbol.values()).map(|(c, s)| c * s).collect();
    Ok(SpectralField::from_vec_unchecked(&spectrum.grid, coeffs))
}

impl ComplexField {
    pub fn new(grid: &Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.points() {
            return Err(Error::LengthMismatch { expected: grid.points(), got: samples.len() });
        }
        if let Some(index) = samples.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { grid: grid.clone(), samples })
    }

    pub(crate) fn from_vec_unchecked(grid: &Grid, samples: Vec<Complex64>) -> Self {
        Self { grid: grid.clone(), samples }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn forward(&self) -> SpectralField {
        let mut buf = self.samples.clone();
        forward_in_place(&self.grid, &mut buf);
        SpectralField::from_vec_unchecked(&self.grid, buf)
    }

    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.spacing())
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &ComplexField) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        Ok(Self::from_vec_unchecked(&self.grid, samples))
    }

    pub fn add(&self, other: &ComplexField) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Self::from_vec_unchecked(&self.grid, samples))
    }

    pub fn sub(&self, other: &ComplexField) -> Result<Self> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_vec_unchecked(&self.grid, self.samples.iter().map(|c| c * factor).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_vec_unchecked(&self.grid, self.samples.iter().map(|c| c.conj()).collect())
    }

    pub fn re(&self) -> RealField {
        RealField::from_vec_unchecked(&self.grid, self.samples.iter().map(|c| c.re).collect())
    }

    pub fn max_imag(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, c| m.max(c.im.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(2.0 * PI, 32).unwrap()
    }

    #[test]
    fn constant_field_has_only_zero_mode() {
        let v = RealField::new(&grid(), vec![3.0; 32]).unwrap();
        let s = v.forward().unwrap();
        assert!((s.mode(0) - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        for m in 1..16 {
            assert!(s.mode(m).norm() < 1e-15 && s.mode(-m).norm() < 1e-15);
        }
    }

    #[test]
    fn cosine_splits_evenly_between_plus_and_minus_k() {
        let v = RealField::from_fn(&grid(), |x| (3.0 * x).cos()).unwrap();
        let s = v.forward().unwrap();
        for m in -16..16 {
            let expect = if m == 3 || m == -3 { 0.5 } else { 0.0 };
            assert!((s.mode(m) - Complex64::new(expect, 0.0)).norm() < 1e-15, "mode {m}");
        }
    }

    #[test]
    fn non_finite_samples_are_rejected_with_index() {
        let mut samples = vec![0.0; 32];
        samples[5] = f64::NAN;
        assert_eq!(RealField::new(&grid(), samples), Err(Error::NonFiniteSample { index: 5 }));
    }

    #[test]
    fn inverse_of_single_modes() {
        let g = grid();
        let mut s = SpectralField::zeros(&g);
        s.set_mode(0, Complex64::new(1.0, 0.0));
        assert!(s.inverse().unwrap().samples().iter().all(|v| (v - 1.0).abs() < 1e-15));

        let mut s = SpectralField::zeros(&g);
        s.set_mode(1, Complex64::new(0.5, 0.0));
        s.set_mode(-1, Complex64::new(0.5, 0.0));
        let v = s.inverse().unwrap();
        for (x, y) in g.coordinates().zip(v.samples()) {
            assert!((x.cos() - y).abs() < 1e-14);
        }
    }

    #[test]
    fn asymmetric_spectrum_is_rejected() {
        let mut s = SpectralField::zeros(&grid());
        s.set_mode(2, Complex64::new(1.0, 0.0));
        assert!(matches!(s.inverse(), Err(Error::NotConjugateSymmetric { .. })));
    }

    #[test]
    fn translation_and_reflection_are_permutations() {
        let v = RealField::new(&grid(), (0..32).map(|j| j as f64).collect()).unwrap();
        assert_eq!(v.translated(3).samples()[3], 0.0);
        assert_eq!(v.translated(-1).samples()[0], 1.0);
        let r = v.reflected();
        assert_eq!(r.samples()[0], 0.0);
        assert_eq!(r.samples()[1], 31.0);
        assert_eq!(r.reflected(), v);
    }
}
