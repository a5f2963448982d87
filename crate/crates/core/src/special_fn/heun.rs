//! Local Heun function about `ξ = 0`.
//!
//! Canonical form, with the exponent parameter `d` attached to the singular
//! point `ξ₀` and `e` to `ξ = 1`:
//!
//! `f'' + (c/ξ + e/(ξ-1) + d/(ξ-ξ₀)) f' + (abξ + q)/(ξ(ξ-1)(ξ-ξ₀)) f = 0`.
//!
//! `a` and `b` may be a complex-conjugate pair; only `a + b` and `ab` enter
//! the equation, so coefficients and values remain real.

use crate::error::{Error, Result};
use crate::ode::{self, OdeConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunParams {
    pub xi0: f64,
    pub q: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl HeunParams {
    pub fn new(xi0: f64, q: f64, a: Complex64, b: Complex64, c: f64, d: f64, e: f64) -> Result<Self> {
        let all = [xi0, q, a.re, a.im, b.re, b.im, c, d, e];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("Heun parameters"));
        }
        if xi0 == 0.0 || xi0 == 1.0 {
            return Err(Error::invalid("Heun singular point xi0 must differ from 0 and 1"));
        }
        if c <= 0.0 && c == c.round() {
            return Err(Error::Pole { function: "Heun (parameter c)", at: format!("{c}") });
        }
        let p = Self { xi0, q, a, b, c, d, e };
        let scale = 1.0 + a.norm() + b.norm() + c.abs() + d.abs() + e.abs();
        if p.fuchsian_residual() > 1e-12 * scale {
            return Err(Error::invalid(format!(
                "Fuchsian relation violated by {:e}",
                p.fuchsian_residual()
            )));
        }
        let (s, prod) = (a + b, a * b);
        if s.im.abs() > 1e-12 * scale || prod.im.abs() > 1e-12 * (1.0 + prod.norm()) {
            return Err(Error::invalid("a and b must be real or a conjugate pair"));
        }
        Ok(p)
    }

    /// `|a + b + 1 - c - d - e|`.
    pub fn fuchsian_residual(&self) -> f64 {
        (self.a + self.b + 1.0 - self.c - self.d - self.e).norm()
    }

    pub fn ab(&self) -> f64 {
        (self.a * self.b).re
    }

    pub fn a_plus_b(&self) -> f64 {
        (self.a + self.b).re
    }

    /// Radius of convergence of the series about 0.
    pub fn radius(&self) -> f64 {
        self.xi0.abs().min(1.0)
    }

    /// Coefficients `(P, Q)` of `f'' + P f' + Q f = 0` at `ξ`.
    pub fn ode_coefficients(&self, xi: f64) -> (f64, f64) {
        let p = self.c / xi + self.e / (xi - 1.0) + self.d / (xi - self.xi0);
        let q = (self.ab() * xi + self.q) / (xi * (xi - 1.0) * (xi - self.xi0));
        (p, q)
    }

    fn recurrence(&self, n: usize, c_n: f64, c_prev: f64) -> f64 {
        let k = n as f64;
        let big_p = (k - 1.0) * (k - 1.0) + (k - 1.0) * self.a_plus_b() + self.ab();
        let big_q = k * ((k - 1.0 + self.c) * (1.0 + self.xi0) + self.xi0 * self.e + self.d);
        let big_r = (k + 1.0) * (k + self.c);
        ((big_q - self.q) * c_n - big_p * c_prev) / (self.xi0 * big_r)
    }
}

/// Series coefficients `C₀ … C_{n_max}` with `C₀ = 1`.
pub fn heun_coefficients(p: &HeunParams, n_max: usize) -> Result<Vec<f64>> {
    if n_max < 2 {
        return Err(Error::invalid("n_max must be at least 2"));
    }
    let mut cs = Vec::with_capacity(n_max + 1);
    cs.push(1.0);
    cs.push(-p.q / (p.c * p.xi0));
    for n in 1..n_max {
        let next = p.recurrence(n, cs[n], cs[n - 1]);
        cs.push(next);
    }
    if cs.iter().all(|v| v.is_finite()) {
        Ok(cs)
    } else {
        Err(Error::NonFinite("Heun coefficients"))
    }
}

/// Local Heun function and its derivative at `ξ` inside the disc.
pub fn heun_local_with_derivative(p: &HeunParams, xi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(xi.abs() < p.radius()) {
        return Err(Error::OutOfDomain { what: "Heun series disc", x: xi });
    }
    if xi == 0.0 {
        return Ok((1.0, -p.q / (p.c * p.xi0)));
    }
    let mut c_prev = 1.0;
    let mut c_n = -p.q / (p.c * p.xi0);
    let mut pow = xi;
    let mut sum = 1.0 + c_n * xi;
    let mut dsum = c_n;
    let mut small_run = 0;
    for n in 1..MAX_TERMS {
        let c_next = p.recurrence(n, c_n, c_prev);
        let dterm = (n + 1) as f64 * c_next * pow;
        pow *= xi;
        let term = c_next * pow;
        sum += term;
        dsum += dterm;
        if term.abs() <= tol * sum.abs() && dterm.abs() <= tol * dsum.abs().max(sum.abs()) {
            small_run += 1;
            if small_run >= 2 {
                return if sum.is_finite() && dsum.is_finite() {
                    Ok((sum, dsum))
                } else {
                    Err(Error::NonFinite("Heun series"))
                };
            }
        } else {
            small_run = 0;
        }
        c_prev = c_n;
        c_n = c_next;
    }
    Err(Error::NonConvergence { what: "Heun series", iterations: MAX_TERMS })
}

/// Local Heun function `H(ξ)`, normalized to `H(0) = 1`.
pub fn heun_local(p: &HeunParams, xi: f64, tol: f64) -> Result<f64> {
    heun_local_with_derivative(p, xi, tol).map(|(f, _)| f)
}

#[derive(Debug, Clone, Copy)]
pub struct HeunOdeConfig {
    pub rtol: f64,
    /// Minimum distance between the path and any singular point.
    pub delta_sing: f64,
}

impl Default for HeunOdeConfig {
    fn default() -> Self {
        Self { rtol: 1e-10, delta_sing: 1e-3 }
    }
}

/// Continue `(f, f')` along the real segment from `xi_start` to `xi_end`.
pub fn heun_ode_eval(
    p: &HeunParams,
    xi_start: f64,
    f_start: f64,
    fprime_start: f64,
    xi_end: f64,
    cfg: &HeunOdeConfig,
) -> Result<(f64, f64)> {
    if xi_start == xi_end {
        return Ok((f_start, fprime_start));
    }
    let (lo, hi) = (xi_start.min(xi_end), xi_start.max(xi_end));
    for s in [0.0, 1.0, p.xi0] {
        let dist = if s < lo {
            lo - s
        } else if s > hi {
            s - hi
        } else {
            0.0
        };
        if dist < cfg.delta_sing {
            return Err(Error::SingularityProximity { point: s, distance: dist });
        }
    }
    let ocfg = OdeConfig { rtol: cfg.rtol, atol: cfg.rtol * 1e-6 * (f_start.abs() + fprime_start.abs()).max(1e-300), ..OdeConfig::default() };
    let sol = ode::solve(
        |xi, y: &[f64; 2]| {
            let (pp, qq) = p.ode_coefficients(xi);
            [y[1], -pp * y[1] - qq * y[0]]
        },
        xi_start,
        [f_start, fprime_start],
        xi_end,
        &ocfg,
        &[],
        |_, _| {},
    )?;
    Ok((sol.y_end[0], sol.y_end[1]))
}
