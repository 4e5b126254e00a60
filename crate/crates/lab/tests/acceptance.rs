//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use hobo_core::gauge::COMPAT_TOLERANCE;
use hobo_core::integrator::linear_propagator;
use hobo_core::littlewood_paley::project_real;
use hobo_core::observables::{mass, modulation, resonance_function, sobolev_norm};
use hobo_core::operators::hilbert_transform;
use hobo_core::{
    coefficients_from_physical, gauge_forward, integrate, is_bo_compatible, recovery_residual_35, recovery_residual_36,
    Complex64, DyadicLadder, GaugeState, Grid, IntegratorConfig, ModelCoefficients, PhysicalParams, Profile,
    Projection, RealField, SpectralField,
};
use hobo_lab::experiments::{
    gauge_residuals, run_conservation, run_epsilon_sweep, run_flowmap_continuity, run_scaling_check,
};
use hobo_lab::ExperimentConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn compatible() -> ModelCoefficients {
    coefficients_from_physical(&PhysicalParams::new(3f64.sqrt(), 1.0, 1.0, 1.0).unwrap()).unwrap()
}

fn random_samples(grid: &Grid, r: &mut impl Rng) -> RealField {
    RealField::new(grid, (0..grid.points()).map(|_| r.gen_range(-1.0..1.0)).collect()).unwrap()
}

fn random_band_limited(grid: &Grid, cutoff: i64, r: &mut impl Rng) -> RealField {
    let mut s = SpectralField::zeros(grid);
    for m in 1..cutoff {
        let c = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)) / (1.0 + m as f64);
        s.set_mode(m, c);
        s.set_mode(-m, c.conj());
    }
    s.inverse().unwrap()
}

fn rel_l2(a: &SpectralField, b: &SpectralField) -> f64 {
    a.sub(b).unwrap().l2_norm() / b.l2_norm()
}

fn coefficient_equivalence() -> Outcome {
    let root3 = 3f64.sqrt();
    let mut ratios: Vec<f64> = (0..19).map(|k| 1.1 + 1.4 * k as f64 / 18.0).collect();
    ratios.push(root3);
    let mut at_root = f64::NAN;
    let mut min_elsewhere = f64::INFINITY;
    for &r in &ratios {
        let c = coefficients_from_physical(&PhysicalParams::new(r, 1.0, 1.0, 1.0).unwrap()).unwrap();
        let gap = (3.0 * c.a * c.c / (4.0 * c.d) - c.b).abs() / c.b;
        if r == root3 {
            at_root = gap;
        } else {
            min_elsewhere = min_elsewhere.min(gap);
        }
    }
    let flagged = is_bo_compatible(&compatible(), COMPAT_TOLERANCE);
    (
        at_root < 1e-12 && min_elsewhere > 1e-3 && flagged,
        format!("gap at sqrt3 {at_root:.2e}, min gap elsewhere {min_elsewhere:.2e} over {} ratios", ratios.len()),
    )
}

fn conservation() -> Outcome {
    let r = run_conservation(&ExperimentConfig::default()).unwrap();
    (
        r.mass_ok && r.energy_ok && r.status == "completed",
        format!("drift M {:.2e} (< 1e-8), drift H {:.2e} (< 1e-6)", r.max_drift_mass, r.max_drift_energy),
    )
}

fn epsilon_sweep() -> Outcome {
    let cfg = ExperimentConfig { threads: 4, ..Default::default() };
    let r = run_epsilon_sweep(&cfg).unwrap();
    let slope = r.slope.unwrap_or(f64::NAN);
    let dists: Vec<String> = r.rows.iter().map(|row| format!("{}:{:.3e}@N{}", row.epsilon, row.dist_h1, row.points)).collect();
    (
        r.strictly_decreasing && (0.7..=1.3).contains(&slope) && r.rows.iter().all(|row| row.status == "completed"),
        format!(
            "dist_H1 [{}], slope {slope:.3} +- {:.3}",
            dists.join(", "),
            r.slope_half_width.unwrap_or(f64::NAN)
        ),
    )
}

fn scaling() -> Outcome {
    let cfg = ExperimentConfig { lambda: 2.0, scaling_time: 0.5, scaling_dt: 5e-4, threads: 4, ..Default::default() };
    let r = run_scaling_check(&cfg).unwrap();
    (
        r.mismatch_l2 < 1e-6,
        format!("lambda 2, t 0.5, dt 5e-4: mismatch {:.2e} (self-convergence {:.2e})", r.mismatch_l2, r.self_convergence),
    )
}

fn spectral_identities() -> Outcome {
    let mut r = rng(5);
    let grids = [Grid::new(32.0 * PI, 1024).unwrap(), Grid::new(2.0 * PI, 256).unwrap(), Grid::new(7.5, 96).unwrap()];
    let (mut parseval, mut hh, mut hp, mut lp, mut group, mut norm) = (0f64, 0f64, 0f64, 0f64, 0f64, 0f64);
    let i = Complex64::new(0.0, 1.0);
    let c = compatible().with_epsilon(0.05);
    for trial in 0..60 {
        let grid = &grids[trial % grids.len()];
        let v = random_samples(grid, &mut r);
        let s = v.forward().unwrap();
        let m = mass(&v);
        parseval = parseval.max((m - s.l2_norm().powi(2)).abs() / m);

        let band = random_band_limited(grid, grid.points() as i64 / 2, &mut r);
        let twice = hilbert_transform(&hilbert_transform(&band).unwrap()).unwrap();
        hh = hh.max(twice.add(&band).unwrap().l2_norm() / band.l2_norm());

        let h = hilbert_transform(&v).unwrap().forward().unwrap();
        let rhs = project_real(&v, Projection::Plus)
            .unwrap()
            .scaled(-i)
            .add(&project_real(&v, Projection::Minus).unwrap().scaled(i))
            .unwrap();
        hp = hp.max(h.sub(&rhs).unwrap().l2_norm() / v.l2_norm());

        let (t, u) = (r.gen_range(-(1i64 << 20)..(1 << 20)) as f64, r.gen_range(-(1i64 << 20)..(1 << 20)) as f64);
        let (t, u) = (t / (1u64 << 20) as f64, u / (1u64 << 20) as f64);
        let two = linear_propagator(&linear_propagator(&s, u, &c).unwrap(), t, &c).unwrap();
        let one = linear_propagator(&s, t + u, &c).unwrap();
        group = group.max(rel_l2(&two, &one));
        norm = norm.max((one.l2_norm() - s.l2_norm()).abs() / s.l2_norm());
    }
    for grid in &grids {
        let ladder = DyadicLadder::for_grid(grid);
        for &xi in grid.wavenumbers().iter().filter(|&&xi| ladder.covers(xi)) {
            lp = lp.max((ladder.partition_sum(xi) - 1.0).abs());
        }
    }
    (
        parseval < 1e-12 && hh < 1e-12 && hp < 1e-13 && lp < 1e-12 && group < 1e-13 && norm < 1e-13,
        format!(
            "parseval {parseval:.1e}, H^2+I {hh:.1e}, H vs P+/P- {hp:.1e}, LP {lp:.1e}, group {group:.1e}, norm {norm:.1e}"
        ),
    )
}

/// Trajectory of a wave packet carried above the `P_HI` leakage band,
/// resolved on 2048 points.
fn packet_snapshots(c: &ModelCoefficients) -> Vec<(f64, RealField)> {
    let grid = Grid::new(32.0 * PI, 2048).unwrap();
    let v0 = Profile::WavePacket { amplitude: 1.0, center: grid.length() / 2.0, width: 6.0, wavenumber: 20.0 }
        .sample_with_h1_norm(&grid, 0.5)
        .unwrap();
    let rec = integrate(&v0, c, &IntegratorConfig::new(1e-3, 1.0).with_stride(100)).unwrap();
    assert!(rec.completed());
    rec.snapshot_times.iter().copied().zip(rec.snapshots).collect()
}

fn gauge_identities() -> Outcome {
    let c = compatible().with_epsilon(0.05);
    let report = gauge_residuals(&packet_snapshots(&c), &c, 4).unwrap();

    let grid = Grid::new(32.0 * PI, 1024).unwrap();
    let mut r = rng(17);
    let mut shift_err = 0f64;
    for _ in 0..20 {
        let v = random_band_limited(&grid, 60, &mut r).scaled(0.3);
        let state = gauge_forward(&v, &c).unwrap();
        let shift = r.gen_range(-3.0..3.0);
        let f = RealField::new(&grid, state.f.samples().iter().map(|x| x + shift).collect()).unwrap();
        let shifted = GaugeState::from_antiderivative(&v, f, &c).unwrap();
        shift_err = shift_err
            .max((recovery_residual_35(&v, &state).unwrap() - recovery_residual_35(&v, &shifted).unwrap()).abs());
    }

    // The direct side cancels terms as large as its largest summand, so the
    // error is measured against that scale.
    let (mut scaled_err, mut plain_err) = (0f64, 0f64);
    for _ in 0..1000 {
        let xi1: f64 = r.gen_range(0.0..50.0);
        let xi2: f64 = -r.gen_range(0.0..xi1.max(f64::MIN_POSITIVE));
        let (tau1, tau2): (f64, f64) = (r.gen_range(-1e3..1e3), r.gen_range(-1e3..1e3));
        let xi = xi1 + xi2;
        let direct = modulation(xi, tau1 + tau2, &c) - modulation(xi1, tau1, &c) - modulation(xi2, tau2, &c);
        let closed = resonance_function(xi1, xi2, &c).unwrap();
        let scale = [c.dispersion(xi), c.dispersion(xi1), c.dispersion(xi2), tau1, tau2]
            .iter()
            .fold(closed.abs(), |m, x| m.max(x.abs()));
        scaled_err = scaled_err.max((direct - closed).abs() / scale);
        if closed != 0.0 {
            plain_err = plain_err.max((direct - closed).abs() / closed.abs());
        }
    }
    (
        report.max_residual_35 < 1e-9 && report.max_residual_36 < 1e-6 && shift_err < 1e-13 && scaled_err < 1e-12,
        format!(
            "{} snapshots: r35 {:.1e}, r36 {:.1e}; phase shift {shift_err:.1e}; resonance {scaled_err:.1e} (plain relative {plain_err:.1e})",
            report.rows.len(),
            report.max_residual_35,
            report.max_residual_36
        ),
    )
}

fn observed_order(v0: &RealField, c: &ModelCoefficients, dt: f64, t: f64) -> f64 {
    let run = |h: f64| {
        let rec = integrate(v0, c, &IntegratorConfig::new(h, t).with_stride(usize::MAX)).unwrap();
        rec.final_snapshot().unwrap().clone()
    };
    let (u1, u2, u4) = (run(dt), run(dt / 2.0), run(dt / 4.0));
    let e1 = sobolev_norm(&u1.sub(&u2).unwrap(), 0.0).unwrap();
    let e2 = sobolev_norm(&u2.sub(&u4).unwrap(), 0.0).unwrap();
    (e1 / e2).log2()
}

fn integrator_order() -> Outcome {
    let grid = Grid::new(32.0 * PI, 1024).unwrap();
    let v0 = Profile::Sech2 { amplitude: 1.0, center: grid.length() / 2.0, width: 1.0 }
        .sample_with_h1_norm(&grid, 0.5)
        .unwrap();
    let base = compatible();
    let kinds = [
        ("HBO", base.with_epsilon(0.05)),
        ("BO", base.benjamin_ono()),
        ("ILW", ModelCoefficients::ilw(1.0, 0.5, base.b, base.c, base.d, 0.05, 2.0)),
    ];
    let orders: Vec<(&str, f64)> = kinds.iter().map(|(n, c)| (*n, observed_order(&v0, c, 0.02, 0.1))).collect();
    (
        orders.iter().all(|(_, p)| *p >= 3.8),
        orders.iter().map(|(n, p)| format!("{n} {p:.3}")).collect::<Vec<_>>().join(", "),
    )
}

fn flowmap_continuity() -> Outcome {
    let cfg = ExperimentConfig { deltas: vec![1e-2, 1e-3, 1e-4], threads: 4, ..Default::default() };
    let r = run_flowmap_continuity(&cfg).unwrap();
    let spread = r.spread.unwrap_or(f64::NAN);
    let ratios: Vec<String> = r.rows.iter().filter_map(|row| row.ratio.map(|q| format!("{q:.6}"))).collect();
    (
        spread <= 3.0 && r.status == "completed",
        format!("ratios [{}], spread {spread:.6}, low-band fraction {:.1e}", ratios.join(", "), r.low_fraction),
    )
}

/// Not a criterion: the localized identity on a bump whose spectrum sits
/// below the `P_HI` cut, where the third term leaks.
fn bump_leakage_note() -> String {
    let grid = Grid::new(32.0 * PI, 1024).unwrap();
    let v = Profile::Gaussian { amplitude: 1.0, center: grid.length() / 2.0, width: 2.0 }
        .sample_with_h1_norm(&grid, 0.5)
        .unwrap();
    let s = gauge_forward(&v, &compatible().with_epsilon(0.05)).unwrap();
    format!(
        "INFO gauge on a smooth bump: r35 {:.1e}, r36 {:.1e} (leakage of P_HI e^(-iF) below the cut)",
        recovery_residual_35(&v, &s).unwrap(),
        recovery_residual_36(&v, &s).unwrap()
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 coefficient equivalence", coefficient_equivalence),
        ("2 conservation", conservation),
        ("3 epsilon sweep", epsilon_sweep),
        ("4 scaling relation", scaling),
        ("5 spectral identities", spectral_identities),
        ("6 gauge identities", gauge_identities),
        ("7 integrator order", integrator_order),
        ("8 flow-map continuity", flowmap_continuity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!("{} [{name}] {detail} ({:.1}s)", if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    }
    println!("{}", bump_leakage_note());
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
