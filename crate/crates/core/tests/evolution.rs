mod common;

use common::random_potential;
use jacobi_scatter::algebra::{c64, CMatrix};
use jacobi_scatter::bessel::bessel_j;
use jacobi_scatter::evolution::{evolution_kernel, Evolution, Method};
use jacobi_scatter::potential::Potential;
use jacobi_scatter::resolvent::least_squares_slope;
use jacobi_scatter::Error;

fn log_times(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64)).collect()
}

#[test]
fn free_sup_decays_like_cube_root() {
    let fit = Evolution::new(&Potential::zero(1)).decay_fit(&log_times(10.0, 400.0, 12), 900).unwrap();
    let slope = fit.slope.unwrap();
    assert!((-0.40..=-0.28).contains(&slope), "slope {slope}");
    for (t, s) in fit.times.iter().zip(&fit.sup_norms) {
        assert!(*s <= fit.bound(*t) * (1.0 + 1e-12));
        assert!(*s <= fit.wiener_sup * (1.0 + 1e-9));
    }
}

#[test]
fn free_diagonal_decays_like_square_root() {
    // envelope of |J_0(2t)| over blocks of one period
    let env = |t0: f64| (0..64).map(|j| bessel_j(0, 2.0 * (t0 + j as f64 * 0.05))).map(f64::abs).fold(0.0, f64::max);
    let ev = Evolution::new(&Potential::zero(2));
    let pts: Vec<(f64, f64)> = log_times(20.0, 2000.0, 8)
        .into_iter()
        .map(|t| {
            let k = (0..64)
                .map(|j| ev.kernel(t + j as f64 * 0.05, 3, 3, Method::FourierBessel).unwrap().norm())
                .fold(0.0, f64::max);
            assert!((k - env(t)).abs() < 1e-10);
            (t.ln(), k.ln())
        })
        .collect();
    let slope = least_squares_slope(&pts).unwrap();
    assert!(slope <= -0.45, "slope {slope}");
}

#[test]
fn fitted_constant_is_stable_when_horizon_doubles() {
    let ev = Evolution::new(&random_potential(1, 2, 2));
    let a = ev.decay_fit(&log_times(10.0, 250.0, 8), 600).unwrap();
    let b = ev.decay_fit(&log_times(10.0, 500.0, 10), 1100).unwrap();
    let change = (b.c_fit - a.c_fit).abs() / a.c_fit;
    assert!(change < 0.2, "c_fit {} -> {}", a.c_fit, b.c_fit);
    assert!(a.series_resolved && b.series_resolved);
    assert!(a.vdc_constant.is_finite() && a.vdc_constant > 0.0);
}

#[test]
fn kernel_at_time_zero_is_identity_for_free_case() {
    let ev = Evolution::new(&Potential::zero(2));
    for (s, r) in [(0, 0), (3, 3), (0, 1), (-4, 2)] {
        let want = if s == r { CMatrix::identity(2) } else { CMatrix::zeros(2) };
        for m in [Method::Kgrid, Method::FourierBessel] {
            assert!((&ev.kernel(0.0, s, r, m).unwrap() - &want).norm() < 1e-12);
        }
    }
}

#[test]
fn methods_agree_for_random_potential() {
    let v = random_potential(2, 3, 2);
    let ev = Evolution::new(&v);
    for t in [0.3, 2.0, 7.5] {
        for (s, r) in [(0, 0), (-5, 4), (8, -1), (12, 12)] {
            let (a, b, d) = ev.kernel_checked(t, s, r, 1e-9).unwrap();
            assert!(d <= 1e-9 * (1.0 + b.norm()), "t {t} ({s},{r}) diff {d}");
            assert!((&a - &b).norm() == d);
        }
    }
}

#[test]
fn free_kernel_matches_bessel() {
    let v = Potential::zero(1);
    for t in [0.5, 3.0, 12.0] {
        for n in [0i64, 1, 5, 17, 30] {
            let k = evolution_kernel(&v, t, 0, n, Method::FourierBessel).unwrap()[(0, 0)];
            let want = c64(0.0, -1.0).powi(n as i32) * bessel_j(n, 2.0 * t);
            assert!((k - want).norm() < 1e-12);
        }
    }
}

#[test]
fn column_norms_equal_dimension() {
    let ev = Evolution::new(&Potential::zero(2));
    let t = 5.0;
    let total: f64 = (-60..=60).map(|s| ev.kernel(t, s, 0, Method::FourierBessel).unwrap().frobenius().powi(2)).sum();
    assert!((total - 2.0).abs() < 1e-12, "{total}");
}

#[test]
fn invalid_inputs_are_rejected() {
    let ev = Evolution::new(&Potential::zero(1));
    assert!(matches!(ev.kernel(-1.0, 0, 0, Method::Kgrid), Err(Error::InvalidParameter(_))));
    assert!(ev.decay_fit(&[5.0, 2.0], 64).is_err());
    assert!(ev.decay_fit(&[0.0, 2.0], 64).is_err());
    let v = random_potential(1, 5, 2);
    assert!(Evolution::new(&v).decay_fit(&[1.0, 2.0], 3).is_err());
}
