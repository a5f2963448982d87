//! Shooting on the deformed momentum-space equation for arbitrary β, β'.
//!
//! In `s = √(β+β')·p` the equation reads
//!
//! `ψ'' + (2/s){4(s²+ω)/(s²+2ω) - (1+(1-ω₄)s²)/(1+s²)}ψ'
//!      + {[6+(6+4ω₄)s²]/(1+s²) + 4κ/(1+s²)²} ψ/(s²+2ω) = 0`
//!
//! and is integrated in `t = ln s` for `(ψ, sψ')`. The regular solution starts
//! from `ψ = 1 + c₂s²`, `c₂ = -(3+2κ)/(6ω)`; at large `s` it is fitted to
//! `C₁s⁻² + C₂s^-(3+2ω₄)`, and bound states are the zeros of `C₁(ω)`.

use super::exact::{brackets, check_window, polish};
use super::{QuantizationScan, ScanMethod, SearchConfig};
use crate::deformed_model::Deformation;
use crate::error::{Error, Result};
use crate::ode::{self, OdeConfig};
use crate::ordinary_qm::{Coupling, LevelUnits, SpectrumMethod, SpectrumResult};
use crate::roots::log_grid;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy)]
pub struct ShootingConfig {
    /// Start point in `s`; `None` picks `s² = 1e-6·min(1, 2ω)`.
    pub s_min: Option<f64>,
    /// End of integration; the tail fit uses `[s_max/10, s_max]`.
    pub s_max: f64,
    pub rtol: f64,
    pub samples: usize,
    pub residual_threshold: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self { s_min: None, s_max: 1e4, rtol: 1e-11, samples: 32, residual_threshold: 1e-4 }
    }
}

impl ShootingConfig {
    fn start(&self, omega: f64) -> Result<f64> {
        let bound = (1e-6 * (2.0 * omega).min(1.0)).sqrt();
        match self.s_min {
            None => Ok(bound),
            Some(s) if s > 0.0 && s <= bound * (1.0 + 1e-12) => Ok(s),
            Some(s) => Err(Error::invalid(format!(
                "start point s = {s:e} too large for the two-term series (need s <= {bound:e})"
            ))),
        }
    }
}

/// Tail coefficients in the scaled variable unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub fit_residual: f64,
    pub omega4: f64,
}

fn rhs(kappa: f64, omega: f64, w4: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |t, y| {
        let x = (2.0 * t).exp();
        let sp = 2.0 * (4.0 * (x + omega) / (x + 2.0 * omega) - (1.0 + (1.0 - w4) * x) / (1.0 + x));
        let one_x = 1.0 + x;
        let s2q = x * ((6.0 + (6.0 + 4.0 * w4) * x) / one_x + 4.0 * kappa / (one_x * one_x)) / (x + 2.0 * omega);
        [y[1], y[1] * (1.0 - sp) - s2q * y[0]]
    }
}

fn check_inputs(kappa: f64, omega: f64, w4: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::invalid("kappa must be positive"));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid("omega must be positive"));
    }
    if !(0.0..=1.0).contains(&w4) {
        return Err(Error::invalid("omega4 must lie in [0, 1]"));
    }
    Ok(())
}

/// `(ψ, sψ')` of the regular solution at ascending points `s_points`.
pub fn regular_solution(kappa: f64, omega: f64, omega4: f64, s_points: &[f64], cfg: &ShootingConfig) -> Result<Vec<[f64; 2]>> {
    check_inputs(kappa, omega, omega4)?;
    let s0 = cfg.start(omega)?;
    if s_points.iter().any(|&s| s < s0) {
        return Err(Error::invalid("requested points lie below the start point"));
    }
    let Some(&s_end) = s_points.last() else { return Ok(Vec::new()) };
    let c2 = -(3.0 + 2.0 * kappa) / (6.0 * omega);
    let y0 = [1.0 + c2 * s0 * s0, 2.0 * c2 * s0 * s0];
    let t_out: Vec<f64> = s_points.iter().map(|s| s.ln()).collect();
    let ocfg = OdeConfig { rtol: cfg.rtol, atol: 0.0, norm_scale: true, ..OdeConfig::default() };
    let sol = ode::solve(rhs(kappa, omega, omega4), s0.ln(), y0, s_end.ln(), &ocfg, &t_out, |_, _| {})?;
    Ok(sol.outputs)
}

/// Integrate the regular solution and fit its tail.
pub fn shoot_scaled(kappa: f64, omega: f64, omega4: f64, cfg: &ShootingConfig) -> Result<ShootingResult> {
    let m = 3.0 + 2.0 * omega4;
    if m - 2.0 < 1e-6 {
        return Err(Error::FitDegenerate("tail exponents coincide".into()));
    }
    let s_lo = cfg.s_max / 10.0;
    if s_lo < 10.0 {
        return Err(Error::invalid("tail window must start at s >= 10"));
    }
    let pts = log_grid(s_lo, cfg.s_max, cfg.samples.max(4));
    let ys = regular_solution(kappa, omega, omega4, &pts, cfg)?;
    let n = pts.len();
    let a = DMatrix::from_fn(n, 2, |i, j| {
        let r = pts[i] / s_lo;
        if j == 0 { r.powi(-2) } else { r.powf(-m) }
    });
    let b = DVector::from_iterator(n, ys.iter().map(|y| y[0]));
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-14).map_err(|e| Error::FitDegenerate(e.to_string()))?;
    let resid = (&a * &x - &b).norm() / b.norm().max(f64::MIN_POSITIVE);
    if !(resid <= cfg.residual_threshold) {
        return Err(Error::FitResidual { residual: resid, threshold: cfg.residual_threshold });
    }
    Ok(ShootingResult { c1: x[0] * s_lo * s_lo, c2: x[1] * s_lo.powf(m), fit_residual: resid, omega4 })
}

/// Shooting in physical momentum. `p_min`, `p_max` map to `s = √(β+β')·p`;
/// the returned `C₁`, `C₂` multiply `p⁻²` and `p^-(3+2ω₄)`.
pub fn shoot_deformed(kappa: f64, d: &Deformation, omega: f64, p_min: f64, p_max: f64) -> Result<ShootingResult> {
    let w1 = d.omega1()?;
    let w4 = d.omega4()?;
    let r = w1.sqrt();
    let cfg = ShootingConfig { s_min: Some(r * p_min), s_max: r * p_max, ..ShootingConfig::default() };
    let mut out = shoot_scaled(kappa, omega, w4, &cfg)?;
    out.c1 /= w1;
    out.c2 *= w1.powf(-(3.0 + 2.0 * w4) / 2.0);
    Ok(out)
}

/// Sign changes of the regular solution on `(0, s_max]`.
///
/// The state is renormalized every few e-folds so arbitrarily small `ω`
/// neither underflows nor overflows.
pub fn count_nodes(kappa: f64, omega: f64, omega4: f64, cfg: &ShootingConfig) -> Result<usize> {
    check_inputs(kappa, omega, omega4)?;
    let s0 = cfg.start(omega)?;
    let c2 = -(3.0 + 2.0 * kappa) / (6.0 * omega);
    let mut y = [1.0 + c2 * s0 * s0, 2.0 * c2 * s0 * s0];
    let (mut t, t_end) = (s0.ln(), cfg.s_max.ln());
    let ocfg = OdeConfig { rtol: cfg.rtol.max(1e-10), atol: 0.0, norm_scale: true, ..OdeConfig::default() };
    let mut sign = y[0].signum();
    let mut nodes = 0usize;
    while t < t_end {
        let t_next = (t + 4.0).min(t_end);
        let sol = ode::solve(rhs(kappa, omega, omega4), t, y, t_next, &ocfg, &[], |_, state| {
            let s = state[0].signum();
            if state[0] != 0.0 && s != sign {
                nodes += 1;
                sign = s;
            }
        })?;
        let norm = sol.y_end[0].abs().max(sol.y_end[1].abs());
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NonFinite("node count"));
        }
        y = [sol.y_end[0] / norm, sol.y_end[1] / norm];
        t = t_next;
    }
    Ok(nodes)
}

pub fn scan_general(
    kappa: f64,
    d: &Deformation,
    omega_min: f64,
    omega_max: f64,
    per_decade: usize,
    search: &SearchConfig,
    cfg: &ShootingConfig,
) -> Result<QuantizationScan> {
    if !(omega_min > 0.0 && omega_min < omega_max) {
        return Err(Error::invalid("need 0 < omega_min < omega_max"));
    }
    let w4 = d.omega4()?;
    let grid = log_grid(omega_min, omega_max, per_decade);
    let vals: Result<Vec<f64>> = search.exec.map(&grid, |&w| shoot_scaled(kappa, w, w4, cfg).map(|r| r.c1)).into_iter().collect();
    Ok(QuantizationScan {
        kappa,
        deformation: Some(*d),
        grid: grid.into_iter().zip(vals?).collect(),
        method: ScanMethod::ShootingGeneral,
    })
}

pub fn find_spectrum_general(kappa: f64, d: &Deformation, omega_min: f64, omega_max: f64, max_levels: usize) -> Result<SpectrumResult> {
    find_spectrum_general_with(kappa, d, omega_min, omega_max, max_levels, &SearchConfig::default(), &ShootingConfig::default())
}

/// Zeros of `C₁(ω)`, ground state first, labelled `n = 0, 1, …`.
pub fn find_spectrum_general_with(
    kappa: f64,
    d: &Deformation,
    omega_min: f64,
    omega_max: f64,
    max_levels: usize,
    search: &SearchConfig,
    cfg: &ShootingConfig,
) -> Result<SpectrumResult> {
    check_window(omega_min, omega_max)?;
    Coupling::new(kappa)?;
    let w4 = d.omega4()?;
    let f = |w: f64| shoot_scaled(kappa, w, w4, cfg).map(|r| r.c1);
    let br: Vec<(f64, f64)> = brackets(f, omega_min, omega_max, search)?.into_iter().take(max_levels).collect();
    let roots = polish(f, &br, search)?;
    let mut out = SpectrumResult::new(SpectrumMethod::ShootingGeneral, LevelUnits::Omega)
        .with_param("kappa", kappa)
        .with_param("beta", d.beta)
        .with_param("beta_prime", d.beta_prime)
        .with_param("omega4", w4)
        .with_param("omega_min", omega_min)
        .with_param("omega_max", omega_max);
    for (n, w) in roots.into_iter().enumerate() {
        out.push(n as i64, w);
    }
    if out.len() < max_levels && kappa > 1.0 / 16.0 {
        out.warnings.push(format!("found {} of {} requested levels above omega_min = {omega_min:e}", out.len(), max_levels));
    }
    Ok(out)
}
