use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::fft::FftPlan;

/// Uniform periodic grid on `[0, L)` with `N` samples.
///
/// Spectral arrays are stored in transform order: index `k < N/2` holds mode
/// `m = k`, index `k >= N/2` holds mode `m = k - N`. The Nyquist index
/// `N/2` therefore carries mode `-N/2`.
#[derive(Clone)]
pub struct Grid {
    length: f64,
    points: usize,
    wavenumbers: Arc<[f64]>,
    plan: Arc<FftPlan>,
}

impl Grid {
    pub fn new(length: f64, points: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid("period length must be positive and finite"));
        }
        if points < 8 || !points.is_multiple_of(2) {
            return Err(Error::InvalidGrid("point count must be even and at least 8"));
        }
        let scale = 2.0 * PI / length;
        let wavenumbers: Vec<f64> = (0..points).map(|k| scale * mode_of(k, points) as f64).collect();
        Ok(Self {
            length,
            points,
            wavenumbers: wavenumbers.into(),
            plan: Arc::new(FftPlan::new(points)),
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Sample location `x_j = jL/N`.
    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.length / self.points as f64
    }

    pub fn coordinates(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |j| self.x(j))
    }

    /// Signed mode number stored at transform index `k`.
    pub fn mode(&self, k: usize) -> i64 {
        mode_of(k, self.points)
    }

    /// Transform index of signed mode `m`, if it is on the grid.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let n = self.points as i64;
        if m >= -(n / 2) && m < n / 2 {
            Some(m.rem_euclid(n) as usize)
        } else {
            None
        }
    }

    /// Wavenumber `2πm/L` at transform index `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        self.wavenumbers[k]
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn nyquist_index(&self) -> usize {
        self.points / 2
    }

    /// Largest resolved wavenumber magnitude, `πN/L`.
    pub fn nyquist_wavenumber(&self) -> f64 {
        PI * self.points as f64 / self.length
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.points == other.points && self.length.to_bits() == other.length.to_bits()
    }

    pub(crate) fn plan(&self) -> &FftPlan {
        &self.plan
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("length", &self.length)
            .field("points", &self.points)
            .finish()
    }
}

fn mode_of(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}
