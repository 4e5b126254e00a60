#![allow(dead_code)]

use std::f64::consts::PI;

use hobo_core::{Complex64, Grid, ModelCoefficients, PhysicalParams, Profile, RealField, SpectralField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn default_grid() -> Grid {
    Grid::new(32.0 * PI, 1024).unwrap()
}

pub fn compatible() -> ModelCoefficients {
    hobo_core::coefficients_from_physical(&PhysicalParams::new(3f64.sqrt(), 1.0, 1.0, 1.0).unwrap()).unwrap()
}

pub fn bump(grid: &Grid, h1: f64) -> RealField {
    Profile::Gaussian { amplitude: 1.0, center: grid.length() / 2.0, width: 2.0 }
        .sample_with_h1_norm(grid, h1)
        .unwrap()
}

/// Random real field with Hermitian spectrum supported on `0 < |m| < cutoff`
/// and coefficients decaying like `1/(1+|m|)`.
pub fn random_band_limited(grid: &Grid, cutoff: i64, rng: &mut impl Rng) -> RealField {
    let mut s = SpectralField::zeros(grid);
    for m in 1..cutoff {
        let scale = 1.0 / (1.0 + m as f64);
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
        s.set_mode(m, c);
        s.set_mode(-m, c.conj());
    }
    s.inverse().unwrap()
}

pub fn random_samples(grid: &Grid, rng: &mut impl Rng) -> RealField {
    RealField::new(grid, (0..grid.points()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}
