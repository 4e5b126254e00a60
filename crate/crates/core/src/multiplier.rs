//! Fourier multipliers cached on a grid.
//!
//! A symbol `m(ξ)` is evaluated once per mode. The Nyquist index stands for
//! both `±ξ_N`, so it stores the average `(m(ξ_N) + m(-ξ_N)) / 2`. For
//! Hermitian symbols this average is real, which keeps real fields real: odd
//! symbols such as `iξ` and `-i sgn ξ` vanish there, and the sharp
//! projections `P±` each take one half.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierSymbol {
    grid: Grid,
    values: Arc<[Complex64]>,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

impl MultiplierSymbol {
    pub fn from_fn(grid: &Grid, symbol: impl Fn(f64) -> Complex64) -> Self {
        let nyq = grid.nyquist_index();
        let xi_n = grid.nyquist_wavenumber();
        let values: Vec<Complex64> = (0..grid.points())
            .map(|k| {
                if k == nyq {
                    (symbol(xi_n) + symbol(-xi_n)) * 0.5
                } else {
                    symbol(grid.wavenumber(k))
                }
            })
            .collect();
        Self { grid: grid.clone(), values: values.into() }
    }

    pub fn from_real_fn(grid: &Grid, symbol: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |xi| Complex64::new(symbol(xi), 0.0))
    }

    /// Symbol given directly per transform index. Fails on length mismatch
    /// or non-finite entries.
    pub fn from_values(grid: &Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::LengthMismatch { expected: grid.points(), got: values.len() });
        }
        if values.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFiniteSpectrum { stage: "symbol" });
        }
        Ok(Self { grid: grid.clone(), values: values.into() })
    }

    pub fn identity(grid: &Grid) -> Self {
        Self::from_real_fn(grid, |_| 1.0)
    }

    /// `(iξ)^order`.
    pub fn derivative(grid: &Grid, order: u32) -> Self {
        Self::from_fn(grid, |xi| (I * xi).powu(order))
    }

    /// Hilbert transform, `-i sgn ξ` with `sgn 0 = 0`.
    pub fn hilbert(grid: &Grid) -> Self {
        Self::from_fn(grid, |xi| -I * sign(xi))
    }

    /// Bessel potential `J^s`, symbol `(1 + ξ²)^{s/2}`.
    pub fn bessel_potential(grid: &Grid, s: f64) -> Self {
        Self::from_real_fn(grid, |xi| libm::pow(1.0 + xi * xi, 0.5 * s))
    }

    /// Riesz potential `D^s`, symbol `|ξ|^s`. The zero mode is set to 0
    /// unless `s == 0`.
    pub fn riesz_potential(grid: &Grid, s: f64) -> Self {
        Self::from_real_fn(grid, |xi| {
            if xi == 0.0 {
                if s == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                libm::pow(xi.abs(), s)
            }
        })
    }

    /// Finite-depth operator `-i coth(hξ)`, with value 0 at `ξ = 0`.
    pub fn ilw_operator(grid: &Grid, depth: f64) -> Self {
        Self::from_fn(grid, |xi| if xi == 0.0 { Complex64::new(0.0, 0.0) } else { -I / libm::tanh(depth * xi) })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> Complex64 {
        self.values[k]
    }

    /// Pointwise product of two symbols (operator composition).
    pub fn compose(&self, other: &MultiplierSymbol) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let values: Vec<Complex64> = self.values.iter().zip(other.values.iter()).map(|(a, b)| a * b).collect();
        Ok(Self { grid: self.grid.clone(), values: values.into() })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let values: Vec<Complex64> = self.values.iter().map(|v| v * factor).collect();
        Self { grid: self.grid.clone(), values: values.into() }
    }

    pub fn add(&self, other: &MultiplierSymbol) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let values: Vec<Complex64> = self.values.iter().zip(other.values.iter()).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid.clone(), values: values.into() })
    }

    /// `exp(t·m)` modewise; the semigroup generated by this symbol.
    ///
    /// The phase `t·Im m` is formed without rounding (via `fma`), which keeps
    /// large dispersive phases accurate to a few ulps of the result.
    pub fn exponential(&self, t: f64) -> Self {
        let values: Vec<Complex64> = self.values.iter().map(|v| exp_scaled(*v, t)).collect();
        Self { grid: self.grid.clone(), values: values.into() }
    }

    /// `m(-ξ) = conj(m(ξ))` on every mode, to within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.values.len();
        (0..n).all(|k| (self.values[(n - k) % n] - self.values[k].conj()).norm() <= tol)
    }
}

fn exp_scaled(m: Complex64, t: f64) -> Complex64 {
    let phase = m.im * t;
    let tail = libm::fma(m.im, t, -phase);
    let (sin, cos) = libm::sincos(phase);
    let rotation = Complex64::new(cos - tail * sin, sin + tail * cos);
    rotation * libm::exp(m.re * t)
}

pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
