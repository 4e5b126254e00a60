//! Smooth cutoff, dyadic Littlewood-Paley blocks and the frequency
//! projections built from them.
//!
//! The cutoff is `η(ξ) = h(2-|ξ|) / (h(2-|ξ|) + h(|ξ|-1))` with
//! `h(t) = exp(-1/t)` for `t > 0` and `0` otherwise. It is even, smooth,
//! identically 1 on `[-1, 1]` and vanishes outside `[-2, 2]`.
//!
//! Blocks: `φ_0(ξ) = η(2ξ)` and `φ_N(ξ) = η(ξ/N) - η(2ξ/N)` for
//! `N = 2^l`, so that partial sums telescope:
//! `Σ_{K ≤ N} φ_K = η(ξ/N)`. The aggregate projections use these closed
//! forms: `P_hi = 1 - η(ξ)`, `P_HI = 1 - η(ξ/8)`,
//! `P_{≥N} = 1 - η(2ξ/N)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{apply_multiplier, forward_transform, SpectralField};
use crate::field::RealField;
use crate::grid::Grid;
use crate::multiplier::MultiplierSymbol;

fn bump_tail(t: f64) -> f64 {
    if t > 0.0 {
        libm::exp(-1.0 / t)
    } else {
        0.0
    }
}

/// The smooth cutoff `η`.
pub fn eta(xi: f64) -> f64 {
    let r = xi.abs();
    if r <= 1.0 {
        return 1.0;
    }
    if r >= 2.0 {
        return 0.0;
    }
    let inner = bump_tail(2.0 - r);
    inner / (inner + bump_tail(r - 1.0))
}

/// `φ(ξ) = η(ξ) - η(2ξ)`, supported in `1/2 ≤ |ξ| ≤ 2`.
pub fn phi(xi: f64) -> f64 {
    eta(xi) - eta(2.0 * xi)
}

/// Dyadic block symbol `φ_N`. `n` must be 0 or a power of two.
pub fn phi_block(n: u64, xi: f64) -> Result<f64> {
    check_dyadic(n)?;
    Ok(if n == 0 { eta(2.0 * xi) } else { phi(xi / n as f64) })
}

fn check_dyadic(n: u64) -> Result<()> {
    if n == 0 || n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NonDyadicBlock { n })
    }
}

/// The blocks `{0, 1, 2, 4, …, top}` available on a grid, where `top` is
/// the largest power of two not exceeding half the Nyquist wavenumber.
/// The ladder resolves the identity exactly for `|ξ| ≤ top`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicLadder {
    blocks: Vec<u64>,
}

impl DyadicLadder {
    pub fn for_grid(grid: &Grid) -> Self {
        let half_nyquist = grid.nyquist_wavenumber() / 2.0;
        let mut blocks = alloc::vec![0_u64];
        let mut n = 1_u64;
        while (n as f64) <= half_nyquist {
            blocks.push(n);
            n *= 2;
        }
        Self { blocks }
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn top(&self) -> u64 {
        *self.blocks.last().unwrap_or(&0)
    }

    /// Wavenumbers with `|ξ| ≤ top` are covered by the ladder.
    pub fn covers(&self, xi: f64) -> bool {
        xi.abs() <= self.top() as f64
    }

    /// `Σ_N φ_N(ξ)` over the ladder.
    pub fn partition_sum(&self, xi: f64) -> f64 {
        self.blocks.iter().map(|&n| phi_block(n, xi).unwrap_or(0.0)).sum()
    }
}

/// Frequency projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `P₊`, positive frequencies.
    Plus,
    /// `P₋`, negative frequencies.
    Minus,
    /// `P_hi = Σ_{N≥2} P_N`.
    Hi,
    /// `P_lo = 1 - P_hi`.
    Lo,
    /// `P_HI = Σ_{N≥16} P_N`.
    HiUpper,
    /// `P_LO = 1 - P_HI`.
    LoUpper,
    /// Littlewood-Paley block `P_N`.
    Block(u64),
    /// `P₊ P_hi`.
    PlusHi,
    /// `P₋ P_hi`.
    MinusHi,
    /// `P₊ P_HI`.
    PlusHiUpper,
    /// `P_{≥N} = Σ_{K≥N} P_K`.
    AtLeast(u64),
}

impl Projection {
    /// Symbol value at wavenumber `ξ`. The zero mode belongs to neither `P₊`
    /// nor `P₋`.
    pub fn value(self, xi: f64) -> Result<f64> {
        let plus = if xi > 0.0 { 1.0 } else { 0.0 };
        let minus = if xi < 0.0 { 1.0 } else { 0.0 };
        let hi = 1.0 - eta(xi);
        let hi_upper = 1.0 - eta(xi / 8.0);
        Ok(match self {
            Projection::Plus => plus,
            Projection::Minus => minus,
            Projection::Hi => hi,
            Projection::Lo => eta(xi),
            Projection::HiUpper => hi_upper,
            Projection::LoUpper => eta(xi / 8.0),
            Projection::Block(n) => phi_block(n, xi)?,
            Projection::PlusHi => plus * hi,
            Projection::MinusHi => minus * hi,
            Projection::PlusHiUpper => plus * hi_upper,
            Projection::AtLeast(n) => {
                check_dyadic(n)?;
                if n == 0 {
                    1.0
                } else {
                    1.0 - eta(2.0 * xi / n as f64)
                }
            }
        })
    }

    pub fn symbol(self, grid: &Grid) -> Result<MultiplierSymbol> {
        self.value(0.0)?;
        Ok(MultiplierSymbol::from_real_fn(grid, |xi| self.value(xi).unwrap_or(0.0)))
    }
}

/// Apply a projection to a spectrum.
pub fn project(spectrum: &SpectralField, which: Projection) -> Result<SpectralField> {
    apply_multiplier(spectrum, &which.symbol(spectrum.grid())?)
}

/// Apply a projection to a real field. The result is returned as a
/// spectrum because `P±` do not preserve realness.
pub fn project_real(v: &RealField, which: Projection) -> Result<SpectralField> {
    project(&forward_transform(v)?, which)
}
