//! Evolution models and their discretization on a grid.
//!
//! All three models share the form
//!
//! ```text
//! ∂t v = L v + (c/2) ∂x(v²) - dε ∂x(v K∂x v + K(v ∂x v))
//! ```
//!
//! where `K` is the Hilbert transform (HBO, BO) or the finite-depth
//! operator `-i coth(hξ)` (ILW), and `L` is the dispersive part with
//! symbol `iω(ξ)`:
//!
//! * HBO: `ω = b|ξ|ξ - aεξ³`
//! * BO: `ω = b|ξ|ξ`
//! * ILW: `ω = bξ² coth(hξ) + εξ³(a₂ - a₁ coth²(hξ))`
//!
//! Each model is Hamiltonian for the Poisson operator `-½∂x`, which is the
//! structure [`Model::energy`] evaluates.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{forward_in_place, inverse_in_place, RealField, SpectralField};
use crate::grid::Grid;
use crate::multiplier::MultiplierSymbol;

/// Two-layer fluid parameters: lower density `rho`, upper density `rho1`,
/// upper-layer depth `h1` and gravity `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub rho: f64,
    pub rho1: f64,
    pub h1: f64,
    pub g: f64,
}

impl PhysicalParams {
    pub fn new(rho: f64, rho1: f64, h1: f64, g: f64) -> Result<Self> {
        let p = Self { rho, rho1, h1, g };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.is_finite() && self.rho1.is_finite() && self.rho1 > 0.0 && self.rho > self.rho1) {
            return Err(Error::UnstableConfiguration { rho: self.rho, rho1: self.rho1 });
        }
        if !(self.h1.is_finite() && self.h1 > 0.0) {
            return Err(Error::InvalidPhysicalParams("upper-layer depth must be positive"));
        }
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::InvalidPhysicalParams("gravity must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// Higher-order Benjamin-Ono.
    Hbo,
    /// Benjamin-Ono; `a` and `ε` are ignored.
    Bo,
    /// Intermediate long wave variant with depth `h`; `a` is replaced by
    /// the pair `a1`, `a2`.
    Ilw { depth: f64, a1: f64, a2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub epsilon: f64,
    pub kind: ModelKind,
}

impl ModelCoefficients {
    pub fn hbo(a: f64, b: f64, c: f64, d: f64, epsilon: f64) -> Self {
        Self { a, b, c, d, epsilon, kind: ModelKind::Hbo }
    }

    pub fn bo(b: f64, c: f64) -> Self {
        Self { a: 0.0, b, c, d: 0.0, epsilon: 0.0, kind: ModelKind::Bo }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn ilw(a1: f64, a2: f64, b: f64, c: f64, d: f64, epsilon: f64, depth: f64) -> Self {
        Self { a: a1 - a2, b, c, d, epsilon, kind: ModelKind::Ilw { depth, a1, a2 } }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }

    /// The Benjamin-Ono model sharing `b` and `c`.
    pub fn benjamin_ono(&self) -> Self {
        Self::bo(self.b, self.c)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |x: f64| x.is_finite() && x >= 0.0;
        if ![self.b, self.c, self.d, self.epsilon].iter().all(|&x| finite_nonneg(x)) {
            return Err(Error::InvalidCoefficients("b, c, d and epsilon must be finite and nonnegative"));
        }
        match self.kind {
            ModelKind::Hbo if !finite_nonneg(self.a) => {
                Err(Error::InvalidCoefficients("a must be finite and nonnegative"))
            }
            ModelKind::Ilw { depth, a1, a2 } if !(depth.is_finite() && depth > 0.0 && finite_nonneg(a1) && finite_nonneg(a2)) => {
                Err(Error::InvalidCoefficients("ILW depth must be positive and a1, a2 nonnegative"))
            }
            _ => Ok(()),
        }
    }

    /// Whether the `ε`-dependent terms are present.
    pub fn has_higher_order_terms(&self) -> bool {
        !matches!(self.kind, ModelKind::Bo) && self.epsilon != 0.0
    }

    /// Linear dispersion relation `ω(ξ)`; the free group multiplies mode `ξ`
    /// by `exp(itω(ξ))`.
    pub fn dispersion(&self, xi: f64) -> f64 {
        match self.kind {
            ModelKind::Hbo => self.b * xi.abs() * xi - self.a * self.epsilon * xi * xi * xi,
            ModelKind::Bo => self.b * xi.abs() * xi,
            ModelKind::Ilw { depth, a1, a2 } => {
                let xc = xcoth(xi, depth);
                self.b * xi * xc + self.epsilon * xi * (a2 * xi * xi - a1 * xc * xc)
            }
        }
    }

    /// Gauge constant `A = 2d / (3a)`.
    pub fn gauge_constant(&self) -> f64 {
        2.0 * self.d / (3.0 * self.a)
    }
}

/// `ξ coth(hξ)` with its limit `1/h` at `ξ = 0`.
pub fn xcoth(xi: f64, depth: f64) -> f64 {
    let z = depth * xi;
    if z.abs() < 1e-6 {
        (1.0 + z * z / 3.0) / depth
    } else {
        xi / libm::tanh(z)
    }
}

/// Coefficients of the two-layer model from the fluid parameters, with
/// `ε = 0` and kind HBO.
pub fn coefficients_from_physical(p: &PhysicalParams) -> Result<ModelCoefficients> {
    p.validate()?;
    let PhysicalParams { rho, rho1, h1, g } = *p;
    let drho = rho - rho1;
    let a = 0.5 * h1 * h1 * (rho * rho / (rho1 * rho1) - 1.0 / 3.0) * libm::sqrt(g * h1 * drho / rho1);
    let b = rho * h1 * h1 / (2.0 * rho1 * rho1) * libm::sqrt(g * rho1 * drho / h1);
    let quarter = libm::sqrt(libm::sqrt(g * rho1 * drho / h1));
    let c = 3.0 * core::f64::consts::SQRT_2 / (4.0 * rho1) * quarter;
    let d = core::f64::consts::SQRT_2 * rho * h1 / (2.0 * rho1 * rho1) * quarter;
    Ok(ModelCoefficients::hbo(a, b, c, d, 0.0))
}

/// `|3ac/(4d) - b| ≤ tol·|b|`: the quadratic gauge term cancels.
pub fn is_bo_compatible(coeffs: &ModelCoefficients, tol: f64) -> bool {
    let lhs = 3.0 * coeffs.a * coeffs.c / (4.0 * coeffs.d);
    (lhs - coeffs.b).abs() <= tol * coeffs.b.abs()
}

/// Symbol `iω(ξ)` of the dispersive part on a grid.
pub fn linear_symbol(grid: &Grid, coeffs: &ModelCoefficients) -> MultiplierSymbol {
    MultiplierSymbol::from_fn(grid, |xi| Complex64::new(0.0, coeffs.dispersion(xi)))
}

/// A model discretized on a grid, with cached symbols.
#[derive(Debug, Clone)]
pub struct Model {
    grid: Grid,
    coeffs: ModelCoefficients,
    dealias: bool,
    linear: MultiplierSymbol,
    derivative: MultiplierSymbol,
    /// `K∂x`: `|ξ|` for the Hilbert transform, `ξ coth(hξ)` for ILW.
    nonlocal_derivative: MultiplierSymbol,
    /// `K` itself.
    nonlocal: MultiplierSymbol,
    keep: Vec<bool>,
}

impl Model {
    pub fn new(grid: &Grid, coeffs: ModelCoefficients) -> Result<Self> {
        coeffs.validate()?;
        let linear = linear_symbol(grid, &coeffs);
        let (nonlocal, nonlocal_derivative) = match coeffs.kind {
            ModelKind::Ilw { depth, .. } => (
                MultiplierSymbol::ilw_operator(grid, depth),
                MultiplierSymbol::from_real_fn(grid, |xi| if xi == 0.0 { 0.0 } else { xcoth(xi, depth) }),
            ),
            _ => (MultiplierSymbol::hilbert(grid), MultiplierSymbol::from_real_fn(grid, f64::abs)),
        };
        let n = grid.points();
        let keep = (0..n).map(|k| 3 * grid.mode(k).unsigned_abs() as usize <= n).collect();
        Ok(Self {
            grid: grid.clone(),
            coeffs,
            dealias: true,
            linear,
            derivative: MultiplierSymbol::derivative(grid, 1),
            nonlocal_derivative,
            nonlocal,
            keep,
        })
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coefficients(&self) -> &ModelCoefficients {
        &self.coeffs
    }

    pub fn dealias(&self) -> bool {
        self.dealias
    }

    /// Symbol `iω(ξ)` of the dispersive part.
    pub fn linear_symbol(&self) -> &MultiplierSymbol {
        &self.linear
    }

    /// Modes kept by the 2/3 rule: `|m| ≤ N/3`.
    pub fn dealias_mask(&self) -> &[bool] {
        &self.keep
    }

    fn truncate(&self, buf: &mut [Complex64]) {
        if self.dealias {
            for (c, &keep) in buf.iter_mut().zip(&self.keep) {
                if !keep {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Nonlinear tendency `N(v̂)` in spectral space. Its zero mode is exactly 0.
    pub fn nonlinear(&self, spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.grid.points();
        debug_assert_eq!(spectrum.len(), n);
        if spectrum.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFiniteSpectrum { stage: "input" });
        }
        let higher = self.coeffs.has_higher_order_terms() && self.coeffs.d != 0.0;
        let mut vt = spectrum.to_vec();
        self.truncate(&mut vt);
        let deriv = self.derivative.values();
        let kdx = self.nonlocal_derivative.values();
        let i = Complex64::new(0.0, 1.0);

        // v + i v_x in one inverse transform
        let mut pair: Vec<Complex64> = vt.iter().zip(deriv).map(|(c, dk)| c + i * (dk * c)).collect();
        inverse_in_place(&self.grid, &mut pair);
        let half_c = 0.5 * self.coeffs.c;
        let de = self.coeffs.d * self.coeffs.epsilon;

        let mut products = if higher {
            let mut q: Vec<Complex64> = vt.iter().zip(kdx).map(|(c, s)| c * s).collect();
            inverse_in_place(&self.grid, &mut q);
            // real part: (c/2) v² - dε v K∂x v ; imaginary part: v v_x
            pair.iter()
                .zip(&q)
                .map(|(p, qk)| {
                    let (v, vx) = (p.re, p.im);
                    Complex64::new(half_c * v * v - de * v * qk.re, v * vx)
                })
                .collect::<Vec<_>>()
        } else {
            pair.iter().map(|p| Complex64::new(half_c * p.re * p.re, 0.0)).collect::<Vec<_>>()
        };
        if products.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFiniteSpectrum { stage: "physical products" });
        }
        forward_in_place(&self.grid, &mut products);

        let nonlocal = self.nonlocal.values();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let z = products[k];
            let zc = products[(n - k) % n].conj();
            let first = (z + zc) * 0.5;
            let mut t = deriv[k] * first;
            if higher {
                let second = (z - zc) * Complex64::new(0.0, -0.5);
                t -= de * deriv[k] * nonlocal[k] * second;
            }
            out[k] = t;
        }
        self.truncate(&mut out);
        if out.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFiniteSpectrum { stage: "nonlinear tendency" });
        }
        Ok(out)
    }

    /// Full tendency `∂t v̂ = iω v̂ + N(v̂)`.
    pub fn tendency(&self, spectrum: &SpectralField) -> Result<SpectralField> {
        if !spectrum.grid().same_as(&self.grid) {
            return Err(Error::GridMismatch);
        }
        let mut out = self.nonlinear(spectrum.coeffs())?;
        for ((o, c), l) in out.iter_mut().zip(spectrum.coeffs()).zip(self.linear.values()) {
            *o += l * c;
        }
        Ok(SpectralField::from_vec_unchecked(&self.grid, out))
    }

    /// Tendency in physical space.
    pub fn rhs(&self, v: &RealField) -> Result<RealField> {
        if !v.grid().same_as(&self.grid) {
            return Err(Error::GridMismatch);
        }
        self.tendency(&v.forward()?)?.inverse()
    }

    /// Conserved energy, by quadrature of the physical integrand.
    ///
    /// HBO/BO: `∫ aε v_x² - b v 𝓗v_x - (c/3) v³ + dε v² 𝓗v_x`.
    /// ILW: `∫ a₁ε (𝓕v_x)² - a₂ε v_x² - b v 𝓕v_x - (c/3) v³ + dε v² 𝓕v_x`.
    /// The cubic terms use the 2/3-truncated field when dealiasing is on.
    pub fn energy(&self, v: &RealField) -> Result<f64> {
        if !v.grid().same_as(&self.grid) {
            return Err(Error::GridMismatch);
        }
        let spectrum = v.forward()?;
        self.energy_from_parts(v.samples(), spectrum.coeffs())
    }

    pub(crate) fn energy_from_parts(&self, samples: &[f64], spectrum: &[Complex64]) -> Result<f64> {
        let dx = self.grid.spacing();
        let co = &self.coeffs;
        let eps = if co.has_higher_order_terms() { co.epsilon } else { 0.0 };
        let i = Complex64::new(0.0, 1.0);

        // v_x + i K∂x v
        let mut pair: Vec<Complex64> = spectrum
            .iter()
            .zip(self.derivative.values())
            .zip(self.nonlocal_derivative.values())
            .map(|((c, dk), kk)| dk * c + i * (kk * c))
            .collect();
        inverse_in_place(&self.grid, &mut pair);

        let quadratic: f64 = match co.kind {
            ModelKind::Ilw { a1, a2, .. } => samples
                .iter()
                .zip(&pair)
                .map(|(v, p)| a1 * eps * p.im * p.im - a2 * eps * p.re * p.re - co.b * v * p.im)
                .sum(),
            _ => samples.iter().zip(&pair).map(|(v, p)| co.a * eps * p.re * p.re - co.b * v * p.im).sum(),
        };

        let de = co.d * eps;
        let cubic: f64 = if self.dealias {
            let mut vt = spectrum.to_vec();
            self.truncate(&mut vt);
            let mut tp: Vec<Complex64> =
                vt.iter().zip(self.nonlocal_derivative.values()).map(|(c, kk)| c + i * (kk * c)).collect();
            inverse_in_place(&self.grid, &mut tp);
            let mut sq: Vec<Complex64> = tp.iter().map(|p| Complex64::new(p.re * p.re, 0.0)).collect();
            forward_in_place(&self.grid, &mut sq);
            self.truncate(&mut sq);
            inverse_in_place(&self.grid, &mut sq);
            sq.iter().zip(&tp).map(|(s, p)| s.re * (-co.c / 3.0 * p.re + de * p.im)).sum()
        } else {
            samples.iter().zip(&pair).map(|(v, p)| v * v * (-co.c / 3.0 * v + de * p.im)).sum()
        };
        let h = (quadratic + cubic) * dx;
        if !h.is_finite() {
            return Err(Error::NonFiniteSpectrum { stage: "energy" });
        }
        Ok(h)
    }
}

/// Tendency of `v` under the given model, with 2/3 dealiasing.
pub fn rhs(v: &RealField, coeffs: &ModelCoefficients) -> Result<RealField> {
    Model::new(v.grid(), *coeffs)?.rhs(v)
}
