mod common;

use common::{close, random_potential};
use jacobi_scatter::algebra::{c64, inverse_zhukovsky, CMatrix, Complex64, Side};
use jacobi_scatter::evolution::{spectral_measure, Evolution, Method};
use jacobi_scatter::oracle::{oracle_point_spectrum, oracle_propagator, oracle_resolvent, TruncatedOperator};
use jacobi_scatter::potential::Potential;
use jacobi_scatter::resolvent::green_kernel;

#[test]
fn free_resolvent_closed_form() {
    let v = Potential::zero(1);
    for e in [c64(3.0, 0.0), c64(-2.2, 0.0), c64(0.4, 0.7), c64(1.0, -0.2)] {
        let z = inverse_zhukovsky(e, Side::Plus).unwrap();
        let o = oracle_resolvent(&v, e, 150).unwrap();
        for n in 0..6 {
            let want = z.powi(n) / (z - z.inv());
            let g = green_kernel(&v, e, 0, n as i64).unwrap()[(0, 0)];
            assert!((g - want).norm() < 1e-12, "E = {e}, n = {n}");
            if e.im.abs() > 0.5 || e.re.abs() > 2.5 {
                assert!((o.block(0, n as i64).unwrap()[(0, 0)] - want).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn truncation_effect_decays_geometrically() {
    let v = random_potential(2, 3, 2);
    let e = c64(2.6, 0.2);
    let reference = oracle_resolvent(&v, e, 160).unwrap();
    let errs: Vec<f64> = [10, 20, 40]
        .iter()
        .map(|&n| {
            let o = oracle_resolvent(&v, e, n).unwrap();
            (&o.block(0, 2).unwrap() - &reference.block(0, 2).unwrap()).norm()
        })
        .collect();
    assert!(errs[1] < 0.05 * errs[0] && errs[2] < 0.05 * errs[1], "{errs:?}");
    let exact = green_kernel(&v, e, 0, 2).unwrap();
    assert!(close(&reference.block(0, 2).unwrap(), &exact, 1e-10));
}

#[test]
fn bound_state_of_a_single_site_well() {
    for depth in [-10.0, -3.0, 4.0] {
        let v = Potential::single_site(0, CMatrix::scalar(1, c64(depth, 0.0))).unwrap();
        let ps = oracle_point_spectrum(&v, 80).unwrap();
        assert!(ps.stable);
        assert_eq!(ps.eigenvalues.len(), 1);
        let want = depth.signum() * (depth * depth + 4.0).sqrt();
        assert!((ps.eigenvalues[0].0 - want).abs() < 1e-10, "{:?} vs {want}", ps.eigenvalues);
    }
    assert!(oracle_point_spectrum(&Potential::zero(2), 80).unwrap().eigenvalues.is_empty());
}

#[test]
fn projector_matches_spectral_measure() {
    let v = random_potential(1, 2, 2);
    let h = TruncatedOperator::new(&v, 600).unwrap();
    // ends of the interval sit between box eigenvalues, where the counting error is smallest
    let p = h.spectral_projector(-1.3, 0.9, 10).unwrap();
    let mut worst: f64 = 0.0;
    for (s, r) in [(0, 0), (1, -2), (-3, 3), (5, 5)] {
        let m = spectral_measure(&v, -1.3, 0.9, s, r).unwrap();
        worst = worst.max((&m - &p.block(s, r).unwrap()).norm());
    }
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn free_propagator_columns_have_norm_dimension() {
    let o = oracle_propagator(&Potential::zero(2), 4.0, 120).unwrap();
    for r in [0, 7, -11] {
        let total: f64 = (-120..=120).map(|s| o.block(s, r).unwrap().frobenius().powi(2)).sum();
        assert!((total - 2.0).abs() < 1e-8, "{total}");
    }
}

#[test]
fn propagator_matches_kernel_for_small_potential() {
    let v = random_potential(2, 1, 2);
    let ev = Evolution::new(&v);
    let o = oracle_propagator(&v, 3.0, 200).unwrap();
    for (s, r) in [(0, 0), (2, -3), (-6, 5)] {
        let k = ev.kernel(3.0, s, r, Method::Kgrid).unwrap();
        assert!((&k - &o.block(s, r).unwrap()).norm() < 1e-6);
    }
}

#[test]
fn resolvent_rejects_energy_on_an_eigenvalue() {
    let v = Potential::single_site(0, CMatrix::scalar(1, c64(-10.0, 0.0))).unwrap();
    let e = Complex64::new(-(104f64).sqrt(), 0.0);
    assert!(oracle_resolvent(&v, e, 50).is_err());
}
