mod common;

use std::f64::consts::PI;

use common::*;
use hobo_core::integrator::linear_propagator;
use hobo_core::littlewood_paley::{phi_block, project_real};
use hobo_core::multiplier::MultiplierSymbol;
use hobo_core::observables::mass;
use hobo_core::operators::hilbert_transform;
use hobo_core::{Complex64, DyadicLadder, Grid, Projection, RealField, SpectralField};
use proptest::prelude::*;
use rand::Rng;

fn grid_strategy() -> impl Strategy<Value = Grid> {
    (prop::sample::select(vec![16usize, 64, 96, 256, 1024]), 0.5f64..200.0)
        .prop_map(|(n, l)| Grid::new(l, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parseval(grid in grid_strategy(), seed in any::<u64>()) {
        let v = random_samples(&grid, &mut rng(seed));
        let physical = mass(&v);
        let spectral = v.forward().unwrap().l2_norm().powi(2);
        prop_assert!((physical - spectral).abs() <= 1e-12 * physical);
    }

    #[test]
    fn round_trip(grid in grid_strategy(), seed in any::<u64>()) {
        let v = random_samples(&grid, &mut rng(seed));
        let back = v.forward().unwrap().inverse().unwrap();
        for (a, b) in v.samples().iter().zip(back.samples()) {
            prop_assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn hilbert_squared_is_minus_identity(seed in any::<u64>()) {
        // Nyquist content is excluded: the Hilbert symbol vanishes there.
        let grid = default_grid();
        let v = random_band_limited(&grid, 512, &mut rng(seed));
        let hh = hilbert_transform(&hilbert_transform(&v).unwrap()).unwrap();
        let err = hh.add(&v).unwrap().l2_norm();
        prop_assert!(err <= 1e-12 * v.l2_norm());
    }

    #[test]
    fn hilbert_is_difference_of_sharp_projections(seed in any::<u64>()) {
        let grid = default_grid();
        let v = random_samples(&grid, &mut rng(seed));
        let h = hilbert_transform(&v).unwrap().forward().unwrap();
        let plus = project_real(&v, Projection::Plus).unwrap();
        let minus = project_real(&v, Projection::Minus).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let rhs = plus.scaled(-i).add(&minus.scaled(i)).unwrap();
        let err = h.sub(&rhs).unwrap().l2_norm();
        prop_assert!(err <= 1e-13 * v.l2_norm());
    }

    #[test]
    fn propagator_group_law(seed in any::<u64>(), tk in -(1i64 << 20)..(1i64 << 20), sk in -(1i64 << 20)..(1i64 << 20), eps in 0.0f64..0.2) {
        // times on a dyadic lattice so that t + s is exact
        let (t, s) = (tk as f64 / (1u64 << 20) as f64, sk as f64 / (1u64 << 20) as f64);
        let grid = default_grid();
        let v = random_samples(&grid, &mut rng(seed)).forward().unwrap();
        let c = compatible().with_epsilon(eps);
        let two = linear_propagator(&linear_propagator(&v, s, &c).unwrap(), t, &c).unwrap();
        let one = linear_propagator(&v, t + s, &c).unwrap();
        prop_assert!(rel_l2(two.coeffs(), one.coeffs()) < 1e-13);
        let n0 = v.l2_norm();
        prop_assert!((one.l2_norm() - n0).abs() <= 1e-13 * n0);
    }
}

#[test]
fn littlewood_paley_partition_on_covered_modes() {
    for grid in [default_grid(), Grid::new(2.0 * PI, 1024).unwrap(), Grid::new(10.0, 4096).unwrap()] {
        let ladder = DyadicLadder::for_grid(&grid);
        let mut covered = 0;
        for &xi in grid.wavenumbers() {
            if ladder.covers(xi) {
                covered += 1;
                assert!((ladder.partition_sum(xi) - 1.0).abs() < 1e-12, "ξ = {xi}");
            }
        }
        assert!(covered > grid.points() / 4);
    }
}

#[test]
fn blocks_are_supported_on_dyadic_annuli() {
    let mut r = rng(7);
    for _ in 0..1000 {
        let xi: f64 = r.gen_range(-300.0..300.0);
        for l in 0..8 {
            let n = 1u64 << l;
            let p = phi_block(n, xi).unwrap();
            if xi.abs() < n as f64 / 2.0 || xi.abs() > 2.0 * n as f64 {
                assert_eq!(p, 0.0);
            }
        }
    }
}

#[test]
fn projections_split_the_identity() {
    let grid = default_grid();
    let v = random_samples(&grid, &mut rng(3));
    let s = v.forward().unwrap();
    let parts = [Projection::PlusHi, Projection::Lo, Projection::MinusHi]
        .map(|p| project_real(&v, p).unwrap());
    let sum = parts[0].add(&parts[1]).unwrap().add(&parts[2]).unwrap();
    assert!(sum.sub(&s).unwrap().l2_norm() < 1e-13 * s.l2_norm());
    let upper = project_real(&v, Projection::HiUpper).unwrap().add(&project_real(&v, Projection::LoUpper).unwrap()).unwrap();
    assert!(upper.sub(&s).unwrap().l2_norm() < 1e-13 * s.l2_norm());
}

#[test]
fn hilbert_commutes_with_derivative() {
    let grid = default_grid();
    let v = random_band_limited(&grid, 200, &mut rng(11)).forward().unwrap();
    let h = MultiplierSymbol::hilbert(&grid);
    let d = MultiplierSymbol::derivative(&grid, 1);
    let a = v.apply(&h).unwrap().apply(&d).unwrap();
    let b = v.apply(&d).unwrap().apply(&h).unwrap();
    assert!(rel_l2(a.coeffs(), b.coeffs()) < 1e-15);
}

#[test]
fn real_symbols_keep_fields_real() {
    let grid = Grid::new(7.0, 64).unwrap();
    let v = random_samples(&grid, &mut rng(5));
    for symbol in [
        MultiplierSymbol::hilbert(&grid),
        MultiplierSymbol::derivative(&grid, 3),
        MultiplierSymbol::bessel_potential(&grid, 0.5),
        MultiplierSymbol::ilw_operator(&grid, 1.5),
        Projection::Hi.symbol(&grid).unwrap(),
    ] {
        let out: SpectralField = v.forward().unwrap().apply(&symbol).unwrap();
        let _: RealField = out.inverse().unwrap();
    }
}
