mod common;

use common::*;
use hobo_core::field::forward_transform;
use hobo_core::integrator::{dealias, linear_propagator, step_ifrk4};
use hobo_core::observables::sobolev_norm;
use hobo_core::{integrate, Grid, IntegratorConfig, Model, ModelCoefficients, RealField, Stepper};

fn final_state(v0: &RealField, c: &ModelCoefficients, dt: f64, t: f64) -> RealField {
    let rec = integrate(v0, c, &IntegratorConfig::new(dt, t).with_stride(usize::MAX)).unwrap();
    assert!(rec.completed());
    rec.final_snapshot().unwrap().clone()
}

fn observed_order(v0: &RealField, c: &ModelCoefficients, dt: f64, t: f64) -> (f64, f64) {
    let u1 = final_state(v0, c, dt, t);
    let u2 = final_state(v0, c, dt / 2.0, t);
    let u4 = final_state(v0, c, dt / 4.0, t);
    let e1 = sobolev_norm(&u1.sub(&u2).unwrap(), 0.0).unwrap();
    let e2 = sobolev_norm(&u2.sub(&u4).unwrap(), 0.0).unwrap();
    ((e1 / e2).log2(), e2)
}

fn sech_bump(grid: &Grid) -> RealField {
    hobo_core::Profile::Sech2 { amplitude: 1.0, center: grid.length() / 2.0, width: 1.0 }
        .sample_with_h1_norm(grid, 0.5)
        .unwrap()
}

#[test]
fn self_convergence_is_fourth_order() {
    let grid = default_grid();
    let v0 = sech_bump(&grid);
    let base = compatible();
    for c in [base.with_epsilon(0.05), base.benjamin_ono(), ModelCoefficients::ilw(1.0, 0.5, base.b, base.c, base.d, 0.05, 2.0)] {
        let (p, _) = observed_order(&v0, &c, 0.02, 0.1);
        assert!(p >= 3.8, "{:?}: order {p}", c.kind);
    }
}

#[test]
fn linear_only_step_is_exact() {
    let grid = default_grid();
    let v = random_band_limited(&grid, 400, &mut rng(9));
    let c = ModelCoefficients::hbo(1.3, 0.7, 0.0, 0.0, 0.1);
    for dt in [1e-3, 0.37, 5.0] {
        let stepped = step_ifrk4(&v, dt, &c).unwrap().forward().unwrap();
        let exact = linear_propagator(&v.forward().unwrap(), dt, &c).unwrap();
        assert!(rel_l2(stepped.coeffs(), exact.coeffs()) < 1e-14, "dt {dt}");
    }
}

#[test]
fn linear_runs_do_not_depend_on_dt() {
    let grid = default_grid();
    let v = random_band_limited(&grid, 300, &mut rng(4));
    let c = ModelCoefficients::bo(1.0, 0.0);
    let a = final_state(&v, &c, 0.5, 2.0);
    let b = final_state(&v, &c, 0.01, 2.0);
    let exact = linear_propagator(&v.forward().unwrap(), 2.0, &c).unwrap().inverse().unwrap();
    for u in [a, b] {
        assert!(u.sub(&exact).unwrap().l2_norm() < 1e-13 * exact.l2_norm());
    }
}

#[test]
fn mean_is_bitwise_constant() {
    let grid = default_grid();
    let v0 = bump(&grid, 0.5).add(&RealField::new(&grid, vec![0.125; grid.points()]).unwrap()).unwrap();
    let rec = integrate(&v0, &compatible().with_epsilon(0.05), &IntegratorConfig::new(1e-3, 0.5).with_stride(100)).unwrap();
    let m0 = rec.observables[0].mean.to_bits();
    assert!(rec.observables.iter().all(|o| o.mean.to_bits() == m0));
}

#[test]
fn first_snapshot_is_the_initial_condition() {
    let grid = default_grid();
    let v0 = bump(&grid, 0.5);
    let rec = integrate(&v0, &compatible().with_epsilon(0.05), &IntegratorConfig::new(1e-3, 0.05).with_stride(10)).unwrap();
    assert_eq!(rec.snapshots[0], v0);
    assert_eq!(rec.snapshot_steps, vec![0, 10, 20, 30, 40, 50]);
    assert!(rec.times.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(rec.times.len(), rec.observables.len());
}

#[test]
fn conservation_oracles() {
    let grid = default_grid();
    let v0 = bump(&grid, 0.5);
    let cfg = IntegratorConfig::new(1e-3, 1.0).with_stride(1000);
    let bo = integrate(&v0, &compatible().benjamin_ono(), &cfg).unwrap();
    let (m0, m1) = (bo.observables[0].mass, bo.observables.last().unwrap().mass);
    assert!(((m1 - m0) / m0).abs() < 1e-10);
    let hbo = integrate(&v0, &compatible().with_epsilon(0.05), &cfg).unwrap();
    let (h0, h1) = (hbo.observables[0].energy, hbo.observables.last().unwrap().energy);
    assert!(((h1 - h0) / h0.abs().max(1e-3)).abs() < 1e-6);
}

#[test]
fn backward_integration_recovers_the_initial_data() {
    let grid = default_grid();
    let v0 = sech_bump(&grid);
    let c = compatible().with_epsilon(0.05);
    let (dt, steps) = (0.01, 50);
    let model = Model::new(&grid, c).unwrap();
    let mut s = forward_transform(&v0).unwrap();
    Stepper::new(model.clone(), dt).unwrap().advance(&mut s, steps).unwrap();
    Stepper::new(model, -dt).unwrap().advance(&mut s, steps).unwrap();
    let back = s.inverse().unwrap();
    let (_, one_way) = observed_order(&v0, &c, dt, dt * steps as f64);
    let err = sobolev_norm(&back.sub(&v0).unwrap(), 0.0).unwrap();
    assert!(err < 10.0 * one_way.max(1e-14), "{err} vs {one_way}");
}

#[test]
fn dealias_removes_aliased_products() {
    let grid = Grid::new(2.0 * std::f64::consts::PI, 96).unwrap();
    let v = RealField::from_fn(&grid, |x| (32.0 * x).cos()).unwrap();
    let square = RealField::new(&grid, v.samples().iter().map(|x| x * x).collect()).unwrap();
    let d = dealias(&square.forward().unwrap());
    for (k, c) in d.coeffs().iter().enumerate() {
        if 3 * grid.mode(k).unsigned_abs() > 96 {
            assert_eq!(c.norm(), 0.0);
        }
    }
}
