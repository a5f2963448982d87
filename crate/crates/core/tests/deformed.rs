mod common;

use minlen_core::deformed_model::{heun_bundle, omega_params, Deformation};
use minlen_core::deformed_solver::{
    asymptotic_omegas, critical_coupling, find_spectrum_exact, find_spectrum_general, quantization_h_complex,
    regular_solution, scan_special, shoot_deformed, SearchConfig, ShootingConfig,
};
use minlen_core::special_fn::heun_local;
use proptest::prelude::*;

/// Zeros of the equal-β quantization function from a 30-digit evaluation.
const REFERENCE_3_4: [f64; 3] = [6.938878825e-2, 1.331000255e-3, 2.985509669e-5];
const REFERENCE_2: f64 = 0.3704468456;

#[test]
fn exact_levels_match_high_precision_reference() {
    let s = find_spectrum_exact(0.75, 1e-6, 0.499, 3).unwrap();
    for (w, r) in s.levels.iter().zip(REFERENCE_3_4) {
        assert!((w / r - 1.0).abs() < 1e-8, "{w} vs {r}");
    }
    let s2 = find_spectrum_exact(2.0, 1e-6, 0.499, 1).unwrap();
    assert!((s2.levels[0] / REFERENCE_2 - 1.0).abs() < 1e-8);
}

#[test]
fn ground_states_read_off_the_figures() {
    let w34 = find_spectrum_exact(0.75, 1e-6, 0.499, 1).unwrap().levels[0];
    let w2 = find_spectrum_exact(2.0, 1e-6, 0.499, 1).unwrap().levels[0];
    assert!((w34 - 0.07).abs() < 0.01);
    assert!((w2 - 0.37).abs() < 0.02);
    assert!(w2 > w34);
}

#[test]
fn weak_coupling_has_no_sign_change() {
    let scan = scan_special(0.05, 1e-3, 0.499, 40, &SearchConfig::default()).unwrap();
    assert!(scan.sign_changes().is_empty());
}

#[test]
fn general_solver_reproduces_exact_levels() {
    let d = Deformation::equal(1.0).unwrap();
    for kappa in [0.75, 2.0] {
        let exact = find_spectrum_exact(kappa, 1e-6, 0.499, 3).unwrap();
        let general = find_spectrum_general(kappa, &d, 1e-6, 0.499, 3).unwrap();
        assert_eq!(general.len(), 3);
        for (a, b) in exact.levels.iter().zip(&general.levels) {
            assert!((a / b - 1.0).abs() < 1e-6, "kappa={kappa}: {a} vs {b}");
        }
    }
}

#[test]
fn asymptotic_levels_track_exact_zeros() {
    for kappa in [0.75, 2.0] {
        let exact = find_spectrum_exact(kappa, 1e-7, 0.499, 6).unwrap();
        let asym = asymptotic_omegas(kappa, 0, 8).unwrap();
        for (n, w) in exact.indices.iter().zip(&exact.levels) {
            if *w < 0.02 {
                let a = asym.levels[asym.indices.iter().position(|m| m == n).unwrap()];
                assert!((a / w - 1.0).abs() < 0.05, "kappa={kappa}, n={n}");
            }
        }
    }
}

#[test]
fn heun_series_matches_shooting_inside_the_disc() {
    for (kappa, omega, w4) in [(0.75, 0.1, 0.5), (2.0, 0.2, 1.0 / 3.0), (0.75, 0.05, 1.0)] {
        let d = Deformation::new(w4, 1.0 - w4).unwrap();
        let p = heun_bundle(&omega_params(&d, kappa, omega).unwrap()).unwrap().heun;
        let xis: Vec<f64> = [0.1, 0.4, 0.7].iter().map(|f| f * p.radius()).collect();
        let s: Vec<f64> = xis.iter().map(|x| (x / (1.0 - x)).sqrt()).collect();
        let cfg = ShootingConfig { rtol: 1e-12, ..ShootingConfig::default() };
        let psi = regular_solution(kappa, omega, w4, &s, &cfg).unwrap();
        for (xi, y) in xis.iter().zip(&psi) {
            let h = (1.0 - xi) * heun_local(&p, *xi, 1e-15).unwrap();
            assert!((h - y[0]).abs() < 1e-8 * h.abs(), "xi={xi}: {h} vs {}", y[0]);
        }
    }
}

#[test]
fn critical_coupling_is_one_sixteenth() {
    for d in [Deformation::equal(1.0).unwrap(), Deformation::equal(1e-3).unwrap()] {
        let c = critical_coupling(&d, 1e-4).unwrap();
        assert!(c.deviation < 0.002, "{c:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantization_function_is_real(kappa in 0.01f64..4.0, omega in 1e-4f64..0.499) {
        let h = quantization_h_complex(kappa, omega).unwrap();
        prop_assert!(h.im.abs() <= 1e-10 * h.norm().max(1e-300), "{}", h);
    }

    #[test]
    fn shooting_is_covariant_under_beta_scale(omega in 0.01f64..0.4, scale in -6.0f64..2.0, w4 in 0.1f64..1.0) {
        let d = Deformation::new(w4, 1.0 - w4).unwrap();
        let r = d.rescaled(10f64.powf(scale)).unwrap();
        let w1 = r.omega1().unwrap();
        let s_min = 1e-3 * (2.0 * omega).min(1.0).sqrt();
        let a = shoot_deformed(0.75, &d, omega, s_min, 1e4).unwrap();
        let b = shoot_deformed(0.75, &r, omega, s_min / w1.sqrt(), 1e4 / w1.sqrt()).unwrap();
        prop_assert!((b.c1 * w1 - a.c1).abs() <= 1e-8 * a.c1.abs().max(1e-12), "{} vs {}", b.c1 * w1, a.c1);
        let m = 3.0 + 2.0 * w4;
        prop_assert!((b.c2 * w1.powf(m / 2.0) - a.c2).abs() <= 1e-5 * a.c2.abs().max(1e-12), "{:e} vs {:e}, c1 {:e}", b.c2 * w1.powf(m / 2.0), a.c2, a.c1);
    }
}

#[test]
fn levels_grow_with_coupling() {
    let a = find_spectrum_exact(0.75, 1e-6, 0.499, 1).unwrap().levels[0];
    let b = find_spectrum_exact(2.0, 1e-6, 0.499, 1).unwrap().levels[0];
    assert!(b > a);
}
