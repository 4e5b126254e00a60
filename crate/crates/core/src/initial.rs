//! Initial-data families. Every profile is centred at `x0` (taken modulo
//! the period, with the nearest periodic image) and mean-subtracted.

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::grid::Grid;
use crate::observables::sobolev_norm;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `amplitude · exp(-(x - x0)² / width²)`.
    Gaussian { amplitude: f64, center: f64, width: f64 },
    /// `amplitude · sech²((x - x0) / width)`.
    Sech2 { amplitude: f64, center: f64, width: f64 },
    /// `amplitude · cos(k (x - x0)) · exp(-(x - x0)² / width²)`.
    WavePacket { amplitude: f64, center: f64, width: f64, wavenumber: f64 },
}

impl Profile {
    fn check(&self) -> Result<()> {
        let (amplitude, center, width) = match *self {
            Profile::Gaussian { amplitude, center, width }
            | Profile::Sech2 { amplitude, center, width }
            | Profile::WavePacket { amplitude, center, width, .. } => (amplitude, center, width),
        };
        if !(amplitude.is_finite() && center.is_finite()) {
            return Err(Error::InvalidConfig("profile amplitude and center must be finite"));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidConfig("profile width must be positive"));
        }
        if let Profile::WavePacket { wavenumber, .. } = *self {
            if !wavenumber.is_finite() {
                return Err(Error::InvalidConfig("packet wavenumber must be finite"));
            }
        }
        Ok(())
    }

    fn eval(&self, y: f64) -> f64 {
        match *self {
            Profile::Gaussian { amplitude, width, .. } => amplitude * libm::exp(-(y * y) / (width * width)),
            Profile::Sech2 { amplitude, width, .. } => {
                let s = 1.0 / libm::cosh(y / width);
                amplitude * s * s
            }
            Profile::WavePacket { amplitude, width, wavenumber, .. } => {
                amplitude * libm::cos(wavenumber * y) * libm::exp(-(y * y) / (width * width))
            }
        }
    }

    fn center(&self) -> f64 {
        match *self {
            Profile::Gaussian { center, .. } | Profile::Sech2 { center, .. } | Profile::WavePacket { center, .. } => {
                center
            }
        }
    }

    /// Sample on `grid` and subtract the discrete mean.
    pub fn sample(&self, grid: &Grid) -> Result<RealField> {
        self.check()?;
        let l = grid.length();
        let x0 = self.center();
        let raw = RealField::from_fn(grid, |x| {
            let mut y = libm::fmod(x - x0, l);
            if y < -0.5 * l {
                y += l;
            } else if y >= 0.5 * l {
                y -= l;
            }
            self.eval(y)
        })?;
        Ok(raw.mean_free())
    }

    /// Sample, then rescale so that `‖v‖_{H¹} = target`.
    pub fn sample_with_h1_norm(&self, grid: &Grid, target: f64) -> Result<RealField> {
        if !(target.is_finite() && target >= 0.0) {
            return Err(Error::InvalidConfig("target norm must be nonnegative"));
        }
        let v = self.sample(grid)?;
        let norm = sobolev_norm(&v, 1.0)?;
        if norm == 0.0 {
            return if target == 0.0 { Ok(v) } else { Err(Error::InvalidConfig("profile has zero norm")) };
        }
        Ok(v.scaled(target / norm))
    }
}
