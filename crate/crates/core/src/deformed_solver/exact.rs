//! Equal-β quantization function `h(ω) = F(a, b; 3/2; (2ω-1)/(2ω))` and
//! the small-ω asymptotic spectrum.

use super::{QuantizationScan, ScanMethod, SearchConfig};
use crate::deformed_model::{special_hyp_params, Deformation};
use crate::error::{Error, Result};
use crate::ordinary_qm::{level_factor, Coupling, LevelUnits, SpectrumMethod, SpectrumResult, F_VALID};
use crate::roots::{brent, log_grid, sign_changes};
use crate::special_fn::pfaff_reduced;
use num_complex::Complex64;

/// Below this ν the asymptotic formula is not evaluated.
pub const NU_MIN: f64 = 1e-4;

/// `h(ω)/(2ω)^(5/4)` as computed, before discarding the imaginary part.
///
/// With `τ = 2ω`, `h = τ^a F(a, c-b; c; 1-τ)`; dropping `τ^(5/4)` keeps the
/// value representable down to `ω ~ 1e-300`.
pub fn quantization_h_complex(kappa: f64, omega: f64) -> Result<Complex64> {
    if !(kappa > 0.0) {
        return Err(Error::invalid("kappa must be positive"));
    }
    if !(omega > 0.0 && omega < 0.5) {
        return Err(Error::OutOfDomain { what: "quantization function (0 < omega < 1/2)", x: omega });
    }
    let p = special_hyp_params(kappa, omega)?;
    let tau = 2.0 * omega;
    let g = pfaff_reduced(&p, tau)?;
    Ok(((p.a - 1.25) * tau.ln()).exp() * g)
}

/// `h(ω)/(2ω)^(5/4)`: same sign and zeros as `h`.
pub fn quantization_h_reduced(kappa: f64, omega: f64) -> Result<f64> {
    let z = quantization_h_complex(kappa, omega)?;
    if z.im.abs() > 1e-10 * z.norm() + 1e-12 {
        return Err(Error::NonFinite("quantization function has a non-negligible imaginary part"));
    }
    Ok(z.re)
}

/// `h(ω)`, real by conjugate symmetry of the parameters.
pub fn quantization_h_special(kappa: f64, omega: f64) -> Result<f64> {
    Ok((2.0 * omega).powf(1.25) * quantization_h_reduced(kappa, omega)?)
}

/// Sample `h` on a log grid over `[omega_min, omega_max]`.
pub fn scan_special(kappa: f64, omega_min: f64, omega_max: f64, per_decade: usize, cfg: &SearchConfig) -> Result<QuantizationScan> {
    check_window(omega_min, omega_max)?;
    let grid = log_grid(omega_min, omega_max, per_decade);
    let values = cfg.exec.map(&grid, |&w| quantization_h_special(kappa, w));
    let mut out = Vec::with_capacity(grid.len());
    for (w, h) in grid.into_iter().zip(values) {
        out.push((w, h?));
    }
    Ok(QuantizationScan { kappa, deformation: None, grid: out, method: ScanMethod::HypergeometricExact })
}

pub(crate) fn check_window(omega_min: f64, omega_max: f64) -> Result<()> {
    if !(omega_min > 0.0 && omega_min < omega_max && omega_max < 0.5) {
        return Err(Error::invalid(format!("need 0 < omega_min < omega_max < 1/2, got ({omega_min}, {omega_max})")));
    }
    Ok(())
}

/// Sign-change brackets of `f` on a log grid, highest ω first.
pub(crate) fn brackets<F>(f: F, omega_min: f64, omega_max: f64, cfg: &SearchConfig) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    let grid = log_grid(omega_min, omega_max, cfg.per_decade);
    let values: Result<Vec<f64>> = cfg.exec.map(&grid, |&w| f(w)).into_iter().collect();
    let values = values?;
    let mut out: Vec<(f64, f64)> = sign_changes(&values).into_iter().map(|i| (grid[i], grid[i + 1])).collect();
    out.reverse();
    Ok(out)
}

/// Polish brackets in `ln ω` and return roots in bracket order.
pub(crate) fn polish<F>(f: F, brackets: &[(f64, f64)], cfg: &SearchConfig) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    cfg.exec
        .map(brackets, |&(lo, hi)| brent(|u| f(u.exp()), lo.ln(), hi.ln(), cfg.log_xtol, 0.0, 200).map(f64::exp))
        .into_iter()
        .collect()
}

pub fn find_spectrum_exact(kappa: f64, omega_min: f64, omega_max: f64, max_levels: usize) -> Result<SpectrumResult> {
    find_spectrum_exact_with(kappa, omega_min, omega_max, max_levels, &SearchConfig::default())
}

/// Zeros of `h` in the window, ground state first, labelled `n = 0, 1, …`.
pub fn find_spectrum_exact_with(
    kappa: f64,
    omega_min: f64,
    omega_max: f64,
    max_levels: usize,
    cfg: &SearchConfig,
) -> Result<SpectrumResult> {
    check_window(omega_min, omega_max)?;
    Coupling::new(kappa)?;
    let f = |w: f64| quantization_h_reduced(kappa, w);
    let br = brackets(f, omega_min, omega_max, cfg)?;
    let take: Vec<(f64, f64)> = br.into_iter().take(max_levels).collect();
    let roots = polish(f, &take, cfg)?;
    let mut out = SpectrumResult::new(SpectrumMethod::ExactDeformed, LevelUnits::Omega)
        .with_param("kappa", kappa)
        .with_param("omega_min", omega_min)
        .with_param("omega_max", omega_max);
    for (n, w) in roots.into_iter().enumerate() {
        out.push(n as i64, w);
    }
    if out.len() < max_levels && kappa > 1.0 / 16.0 {
        out.warnings.push(format!(
            "found {} of {} requested levels above omega_min = {omega_min:e}",
            out.len(),
            max_levels
        ));
    }
    Ok(out)
}

fn asymptotic_coupling(kappa: f64) -> Result<Coupling> {
    let c = Coupling::new(kappa)?;
    if !c.supports_bound_states() {
        return Err(Error::WrongRegime(format!("kappa = {kappa} has no bound states")));
    }
    if c.nu < NU_MIN {
        return Err(Error::NearCritical { nu: c.nu });
    }
    Ok(c)
}

/// `ω_n = ½ exp{(2/ν)[arg A - (n + ½)π]}` for `n_lo ≤ n ≤ n_hi`, no filter.
pub fn asymptotic_omegas(kappa: f64, n_lo: i64, n_hi: i64) -> Result<SpectrumResult> {
    let c = asymptotic_coupling(kappa)?;
    let mut out = SpectrumResult::new(SpectrumMethod::AsymptoticDeformed, LevelUnits::Omega).with_param("kappa", kappa);
    for n in n_lo..=n_hi {
        out.push(n, 0.5 * level_factor(&c, n)?);
    }
    Ok(out)
}

/// `E_n = -exp{(2/ν)[arg A - (n + ½)π]} / (2m(β+β'))`, keeping levels with
/// `|E_n| < F_VALID/(2m(β+β'))`.
pub fn asymptotic_spectrum(kappa: f64, d: &Deformation, mass: f64, n_lo: i64, n_hi: i64) -> Result<SpectrumResult> {
    let c = asymptotic_coupling(kappa)?;
    if !(mass > 0.0) {
        return Err(Error::invalid("mass must be positive"));
    }
    let w1 = d.omega1()?;
    let scale = 1.0 / (2.0 * mass * w1);
    let mut out = SpectrumResult::new(SpectrumMethod::AsymptoticDeformed, LevelUnits::Energy)
        .with_param("kappa", kappa)
        .with_param("beta", d.beta)
        .with_param("beta_prime", d.beta_prime)
        .with_param("mass", mass)
        .with_param("f_valid", F_VALID);
    for n in n_lo..=n_hi {
        let f = level_factor(&c, n)?;
        if f < F_VALID {
            out.push(n, -scale * f);
        }
    }
    if out.is_empty() {
        out.warnings.push("no level passes the validity filter".into());
    }
    Ok(out)
}
