//! Property checks shared by the proptest suite and the acceptance runner.
//! Each returns `Err` with a description when the property fails.

use minlen_core::deformed_model::{heun_bundle, omega_params, Deformation};
use minlen_core::special_fn::{heun_coefficients, heun_local, hyp2f1, HeunParams, Hyp2F1Params};
use num_complex::Complex64;

fn f(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64, String> {
    let p = Hyp2F1Params::new(a, b, c).map_err(|e| e.to_string())?;
    hyp2f1(&p, x).map_err(|e| e.to_string())
}

fn rel(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1e-300)
}

pub fn schwarz(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<(), String> {
    let v = f(a, b, c, x)?;
    let w = f(a.conj(), b.conj(), c.conj(), x)?;
    let err = rel(w, v.conj());
    if err < 1e-10 {
        Ok(())
    } else {
        Err(format!("Schwarz symmetry off by {err:e} at a={a}, b={b}, c={c}, x={x}"))
    }
}

/// `(c-a)F(a-1) + (2a-c+(b-a)x)F(a) + a(x-1)F(a+1) = 0`.
pub fn contiguous(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<(), String> {
    let fm = f(a - 1.0, b, c, x)?;
    let f0 = f(a, b, c, x)?;
    let fp = f(a + 1.0, b, c, x)?;
    let t = [(c - a) * fm, (2.0 * a - c + (b - a) * x) * f0, a * (x - 1.0) * fp];
    let scale: f64 = t.iter().map(|v| v.norm()).sum();
    let err = (t[0] + t[1] + t[2]).norm() / scale.max(1e-300);
    if err < 1e-9 {
        Ok(())
    } else {
        Err(format!("contiguous relation residual {err:e} at a={a}, b={b}, c={c}, x={x}"))
    }
}

/// `F(a, b; b; x) = (1-x)^(-a)`.
pub fn collapse(a: Complex64, b: Complex64, x: f64) -> Result<(), String> {
    let v = f(a, b, b, x)?;
    let exact = (-a * (1.0 - x).ln()).exp();
    let err = rel(v, exact);
    if err < 1e-10 {
        Ok(())
    } else {
        Err(format!("F(a,b;b;x) off by {err:e} at a={a}, b={b}, x={x}"))
    }
}

fn bundle(kappa: f64, omega: f64, omega4: f64) -> Result<HeunParams, String> {
    let d = Deformation::new(omega4, 1.0 - omega4).map_err(|e| e.to_string())?;
    let op = omega_params(&d, kappa, omega).map_err(|e| e.to_string())?;
    heun_bundle(&op).map(|b| b.heun).map_err(|e| e.to_string())
}

pub fn heun_recurrence(kappa: f64, omega: f64, omega4: f64) -> Result<(), String> {
    let p = bundle(kappa, omega, omega4)?;
    let cs = heun_coefficients(&p, 60).map_err(|e| e.to_string())?;
    let res = super::heun_substitution_residuals(&cs, p.xi0, p.q, p.ab(), p.c, p.d, p.e);
    let worst = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if worst < 1e-12 {
        Ok(())
    } else {
        Err(format!("Heun recurrence residual {worst:e} at kappa={kappa}, omega={omega}, omega4={omega4}"))
    }
}

/// Series value against the integrated equation at `ξ = frac·radius`.
pub fn heun_series_vs_ode(kappa: f64, omega: f64, omega4: f64, frac: f64) -> Result<(), String> {
    let p = bundle(kappa, omega, omega4)?;
    let xi = frac * p.radius();
    let series = heun_local(&p, xi, 1e-15).map_err(|e| e.to_string())?;
    let ode = super::heun_ode_solution(p.xi0, p.q, p.ab(), p.c, p.d, p.e, xi);
    let err = (series - ode).abs() / series.abs().max(ode.abs()).max(1e-300);
    if err < 1e-8 {
        Ok(())
    } else {
        Err(format!("Heun series {series} vs ODE {ode} (rel {err:e}) at xi={xi}, kappa={kappa}, omega={omega}"))
    }
}

/// The deformed bundle obeys `a + b + 1 = c + d + e`, and a violated relation is rejected.
pub fn fuchsian(kappa: f64, omega: f64, omega4: f64) -> Result<(), String> {
    let p = bundle(kappa, omega, omega4)?;
    let sum = p.a + p.b + 1.0 - p.c - p.d - p.e;
    if sum.norm() > 1e-12 {
        return Err(format!("Fuchsian sum {sum} at kappa={kappa}, omega={omega}, omega4={omega4}"));
    }
    if HeunParams::new(p.xi0, p.q, p.a, p.b, p.c, p.d, p.e + 1e-6).is_ok() {
        return Err("a violated Fuchsian relation was accepted".into());
    }
    Ok(())
}
