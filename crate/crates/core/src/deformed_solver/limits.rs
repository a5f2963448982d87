//! Zero-energy solution and numerical checks of three limits: vanishing
//! deformation, large momentum, and vanishing energy.

use super::shooting::{find_spectrum_general_with, regular_solution, ShootingConfig};
use super::{CheckOutcome, SearchConfig};
use crate::deformed_model::{omega_params, zero_energy_bundle, Deformation};
use crate::error::{Error, Result};
use crate::ordinary_qm::{wavefunction_momentum, Coupling};
use crate::roots::log_grid;
use crate::special_fn::hyp2f1;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `(1-ξ)ξ^(-5/4)[A ξ^(-iν/2) F(a,b;c;ξ) + B ξ^(iν/2) F(a-c+1,b-c+1;2-c;ξ)]`.
pub fn zero_energy_wavefunction(kappa: f64, omega4: f64, xi: f64, coef_a: Complex64, coef_b: Complex64) -> Result<Complex64> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::OutOfDomain { what: "zero-energy solution (0 < xi < 1)", x: xi });
    }
    let d = Deformation::new(omega4, 1.0 - omega4)?;
    let p = zero_energy_bundle(&omega_params(&d, kappa, 0.0)?)?;
    let half_inu = (1.0 - p.c) * 0.5;
    let ln_xi = xi.ln();
    let first = (-half_inu * ln_xi).exp() * hyp2f1(&p, xi)?;
    let second_params = crate::special_fn::Hyp2F1Params::new(p.a - p.c + 1.0, p.b - p.c + 1.0, 2.0 - p.c)?;
    let second = (half_inu * ln_xi).exp() * hyp2f1(&second_params, xi)?;
    Ok((1.0 - xi) * xi.powf(-1.25) * (coef_a * first + coef_b * second))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub kappa: f64,
    pub omega4: f64,
    pub checks: Vec<CheckOutcome>,
}

impl LimitReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const TOL_A: f64 = 1e-4;
const TOL_B: f64 = 1e-3;
const TOL_C: f64 = 1e-4;

/// Run the three limit checks for `(κ, ω₄)` taken from `d`.
pub fn validate_limits(kappa: f64, d: &Deformation) -> Result<LimitReport> {
    let c = Coupling::new(kappa)?;
    if !c.supports_bound_states() {
        return Err(Error::WrongRegime(format!("limit checks need kappa > 1/16, got {kappa}")));
    }
    let w4 = d.omega4()?;
    let checks = vec![
        check_a(&c, w4).unwrap_or_else(|e| CheckOutcome::failed("limit_a_undeformed", TOL_A, e.to_string())),
        check_b(kappa, d, w4).unwrap_or_else(|e| CheckOutcome::failed("limit_b_tail_exponents", TOL_B, e.to_string())),
        check_c(kappa, w4).unwrap_or_else(|e| CheckOutcome::failed("limit_c_zero_energy", TOL_C, e.to_string())),
    ];
    Ok(LimitReport { kappa, omega4: w4, checks })
}

/// Small deformation: the deformed regular solution at `k = 1` matches the
/// ordinary hypergeometric solution.
fn check_a(c: &Coupling, w4: f64) -> Result<CheckOutcome> {
    let w1: f64 = 2e-7;
    let k = 1.0;
    let omega = 0.5 * w1 * k * k;
    let ps = [0.25, 0.5, 1.0, 2.0, 4.0];
    let s: Vec<f64> = ps.iter().map(|p| w1.sqrt() * p).collect();
    let ys = regular_solution(c.kappa, omega, w4, &s, &ShootingConfig::default())?;
    let flat: Result<Vec<f64>> = ps.iter().map(|&p| wavefunction_momentum(c, k, p)).collect();
    let flat = flat?;
    let env = flat.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = ys.iter().zip(&flat).map(|(y, f)| (y[0] - f).abs()).fold(0.0f64, f64::max) / env;
    Ok(CheckOutcome::below(
        "limit_a_undeformed",
        err,
        TOL_A,
        format!("beta+beta' = {w1:e}, k = 1, p in [0.25, 4]"),
    ))
}

/// Least-squares local exponent: fit `ln|ψ| = α - e ln s + Σ γ_j s^(-2j)`.
fn fitted_exponent(s: &[f64], psi: &[f64], corrections: usize) -> Result<f64> {
    let n = s.len();
    let cols = 2 + corrections;
    let a = DMatrix::from_fn(n, cols, |i, j| match j {
        0 => 1.0,
        1 => -s[i].ln(),
        k => s[i].powi(-2 * (k as i32 - 1)),
    });
    if psi.iter().any(|v| *v == 0.0) {
        return Err(Error::FitDegenerate("solution vanishes inside the fit window".into()));
    }
    let b = DVector::from_iterator(n, psi.iter().map(|v| v.abs().ln()));
    let x = a.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::FitDegenerate(e.to_string()))?;
    Ok(x[1])
}

/// Large momentum: generic ω shows `s⁻²`; at a level the `s⁻²` part cancels
/// and `s^-(3+2ω₄)` remains.
fn check_b(kappa: f64, d: &Deformation, w4: f64) -> Result<CheckOutcome> {
    let search = SearchConfig { log_xtol: 1e-14, ..SearchConfig::default() };
    let cfg = ShootingConfig { rtol: 1e-12, ..ShootingConfig::default() };
    let levels = find_spectrum_general_with(kappa, d, 1e-9, 0.499, 2, &search, &cfg)?;
    if levels.len() < 2 {
        return Err(Error::NoBracket { lo: 1e-9, hi: 0.499 });
    }
    let (w0, w1) = (levels.levels[0], levels.levels[1]);

    let generic = (w0 * w1).sqrt();
    let far = log_grid(1e3, 1e4, 24);
    let ys = regular_solution(kappa, generic, w4, &far, &cfg)?;
    let e1 = fitted_exponent(&far, &ys.iter().map(|y| y[0]).collect::<Vec<_>>(), 1)?;

    let near = log_grid(10.0, 100.0, 24);
    let ys = regular_solution(kappa, w0, w4, &near, &cfg)?;
    let e2 = fitted_exponent(&near, &ys.iter().map(|y| y[0]).collect::<Vec<_>>(), 2)?;

    let m = 3.0 + 2.0 * w4;
    let err = (e1 - 2.0).abs().max((e2 - m).abs());
    Ok(CheckOutcome::below(
        "limit_b_tail_exponents",
        err,
        TOL_B,
        format!("exponents {e1:.8} (expect 2) at omega = {generic:.6e}, {e2:.8} (expect {m}) at level omega = {w0:.10e}"),
    ))
}

/// Vanishing energy: the solution at `ω = 1e-10` matches the zero-energy
/// solution with `(A, B = A*)` fitted at two points.
fn check_c(kappa: f64, w4: f64) -> Result<CheckOutcome> {
    let omega = 1e-10;
    let fit_xi = [0.01, 0.5];
    let test_xi = [0.002, 0.03, 0.1, 0.3, 0.7, 0.9];
    let mut all: Vec<f64> = fit_xi.iter().chain(test_xi.iter()).copied().collect();
    all.sort_by(|a, b| a.total_cmp(b));
    let s: Vec<f64> = all.iter().map(|x| (x / (1.0 - x)).sqrt()).collect();
    let ys = regular_solution(kappa, omega, w4, &s, &ShootingConfig { rtol: 1e-12, ..ShootingConfig::default() })?;
    let psi_at = |xi: f64| ys[all.iter().position(|&v| v == xi).expect("grid point")][0];
    let basis = |xi: f64| zero_energy_wavefunction(kappa, w4, xi, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));

    // ψ = A φ + A* φ* = 2(A_r φ_r - A_i φ_i)
    let (p0, p1) = (basis(fit_xi[0])?, basis(fit_xi[1])?);
    let m = nalgebra::Matrix2::new(2.0 * p0.re, -2.0 * p0.im, 2.0 * p1.re, -2.0 * p1.im);
    let rhs = nalgebra::Vector2::new(psi_at(fit_xi[0]), psi_at(fit_xi[1]));
    let sol = m.lu().solve(&rhs).ok_or_else(|| Error::FitDegenerate("zero-energy two-point fit".into()))?;
    let coef = Complex64::new(sol[0], sol[1]);

    let mut worst = 0.0f64;
    for &xi in &test_xi {
        let z = zero_energy_wavefunction(kappa, w4, xi, coef, coef.conj())?;
        let env = 2.0 * (coef * basis(xi)?).norm();
        worst = worst.max((psi_at(xi) - z.re).abs() / env);
    }
    Ok(CheckOutcome::below(
        "limit_c_zero_energy",
        worst,
        TOL_C,
        format!("omega = {omega:e}, fitted A = {:.6e}{:+.6e}i", coef.re, coef.im),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_beta_reduces_to_power_law() {
        let nu = 2.75f64.sqrt();
        let a = Complex64::new(0.3, -1.1);
        let b = Complex64::new(-0.4, 0.2);
        for xi in [0.01, 0.2, 0.8] {
            let v = zero_energy_wavefunction(0.75, 0.5, xi, a, b).unwrap();
            let phase = Complex64::new(0.0, 0.5 * nu * xi.ln());
            let exact = (1.0 - xi) * xi.powf(-1.25) * (a * (-phase).exp() + b * phase.exp());
            assert!((v - exact).norm() < 1e-13 * exact.norm());
        }
    }

    #[test]
    fn origin_is_rejected() {
        let one = Complex64::new(1.0, 0.0);
        assert!(zero_energy_wavefunction(0.75, 0.5, 0.0, one, one).is_err());
    }
}

#[cfg(test)]
mod checks {
    use super::*;

    #[test]
    fn limits_hold_across_deformation_ratios() {
        for d in [Deformation::equal(1.0).unwrap(), Deformation::new(1.0, 2.0).unwrap(), Deformation::new(1.0, 0.0).unwrap()] {
            let r = validate_limits(0.75, &d).unwrap();
            assert!(r.all_passed());
        }
    }
}
