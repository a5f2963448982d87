//! Ordinary quantum mechanics: the momentum-space solution regular at the
//! origin, its scalar products, and the two regularized spectra.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::special_fn::{hyp2f1, ln_gamma_complex, Hyp2F1Params};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Default retention threshold for the cutoff and asymptotic spectra.
pub const F_VALID: f64 = 0.01;

/// Critical coupling of the inverse-square potential.
pub const KAPPA_CRITICAL: f64 = 1.0 / 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `κ > 1/16`: ν real, log-periodic solutions and bound states.
    Oscillatory,
    /// `κ = 1/16`: ν = 0.
    Critical,
    /// `κ < 1/16`: ν imaginary, no bound states.
    Subcritical,
}

/// Dimensionless coupling `κ = mα/2ℏ²` and `ν = √(4κ - 1/4)`.
///
/// `nu` holds `|ν|`; `regime` says whether ν is real or imaginary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub kappa: f64,
    pub nu: f64,
    pub regime: Regime,
}

impl Coupling {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::invalid(format!("kappa must be positive, got {kappa}")));
        }
        let nu2 = 4.0 * kappa - 0.25;
        let regime = if nu2 > 0.0 {
            Regime::Oscillatory
        } else if nu2 == 0.0 {
            Regime::Critical
        } else {
            Regime::Subcritical
        };
        Ok(Self { kappa, nu: nu2.abs().sqrt(), regime })
    }

    /// Signed `ν²`.
    pub fn nu_squared(&self) -> f64 {
        match self.regime {
            Regime::Subcritical => -self.nu * self.nu,
            _ => self.nu * self.nu,
        }
    }

    pub fn supports_bound_states(&self) -> bool {
        self.regime == Regime::Oscillatory
    }

    fn require_oscillatory(&self) -> Result<()> {
        if self.supports_bound_states() {
            Ok(())
        } else {
            Err(Error::WrongRegime(format!("kappa = {} is not above 1/16", self.kappa)))
        }
    }

    /// Parameters `(5/4 + iν/2, 5/4 - iν/2; 3/2)` of the regular solution.
    pub fn hyp_params(&self) -> Result<Hyp2F1Params> {
        self.require_oscillatory()?;
        let a = Complex64::new(1.25, 0.5 * self.nu);
        Hyp2F1Params::new(a, a.conj(), Complex64::new(1.5, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    Orthogonality,
    Cutoff,
    ExactDeformed,
    AsymptoticDeformed,
    ShootingGeneral,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelUnits {
    /// Physical energies `E_n < 0`, ascending.
    Energy,
    /// Dimensionless `ω_n > 0`, descending (ground state first).
    Omega,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub levels: Vec<f64>,
    /// Level labels `n` matching `levels`.
    pub indices: Vec<i64>,
    pub units: LevelUnits,
    pub method: SpectrumMethod,
    pub parameters: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    pub fn new(method: SpectrumMethod, units: LevelUnits) -> Self {
        Self { levels: Vec::new(), indices: Vec::new(), units, method, parameters: BTreeMap::new(), warnings: Vec::new() }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn push(&mut self, n: i64, level: f64) {
        self.indices.push(n);
        self.levels.push(level);
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }
}

/// `arg A` with `A = Γ(iν) / (Γ(5/4 + iν/2) Γ(1/4 + iν/2))`, principal value.
pub fn phase_arg_a(c: &Coupling) -> Result<f64> {
    c.require_oscillatory()?;
    let nu = c.nu;
    let ln_a = ln_gamma_complex(Complex64::new(0.0, nu))?
        - ln_gamma_complex(Complex64::new(1.25, 0.5 * nu))?
        - ln_gamma_complex(Complex64::new(0.25, 0.5 * nu))?;
    let phase = ln_a.im.rem_euclid(2.0 * PI);
    Ok(if phase > PI { phase - 2.0 * PI } else { phase })
}

/// `exp{(2/ν)[arg A - (n + 1/2)π]}`, the level factor shared by the cutoff
/// and minimal-length spectra.
pub fn level_factor(c: &Coupling, n: i64) -> Result<f64> {
    let arg = phase_arg_a(c)?;
    Ok(((2.0 / c.nu) * (arg - (n as f64 + 0.5) * PI)).exp())
}

/// Regular momentum-space solution `F(a, b; 3/2; -p²/k²)`, unit normalization.
pub fn wavefunction_momentum(c: &Coupling, k: f64, p: f64) -> Result<f64> {
    if !(k > 0.0 && p >= 0.0) {
        return Err(Error::invalid("need k > 0 and p >= 0"));
    }
    Ok(hyp2f1(&c.hyp_params()?, -(p * p) / (k * k))?.re)
}

/// Ω prefactor of the closed-form scalar product, with unit normalizations.
pub fn omega_prefactor(c: &Coupling, k1: f64, k2: f64) -> Result<f64> {
    c.require_oscillatory()?;
    let nu = c.nu;
    let num = 2.0 * ln_gamma_complex(Complex64::new(1.5, 0.0))?.re
        + 2.0 * ln_gamma_complex(Complex64::new(1.0, nu))?.re;
    let den = 4.0 * ln_gamma_complex(Complex64::new(1.25, 0.5 * nu))?.re;
    Ok(0.5 * k1.powf(2.5) * k2.sqrt() * (num - den).exp())
}

/// Closed-form `⟨ψ₁|ψ₂⟩ = 2Ω sin(ν ln(k₁/k₂)) / (ν (k₁²/k₂² - 1))`.
///
/// Near `k₁ = k₂` the ratio is replaced by its Taylor expansion in
/// `x = ln(k₁/k₂)`: `1 - x + (1/3 - ν²/6) x²`.
pub fn scalar_product_closed(c: &Coupling, k1: f64, k2: f64) -> Result<f64> {
    if !(k1 > 0.0 && k2 > 0.0) {
        return Err(Error::invalid("momenta must be positive"));
    }
    let omega = omega_prefactor(c, k1, k2)?;
    let nu = c.nu;
    let x = (k1 / k2).ln();
    let ratio = if x.abs() < 1e-4 {
        1.0 - x + (1.0 / 3.0 - nu * nu / 6.0) * x * x
    } else {
        2.0 * (nu * x).sin() / (nu * (2.0 * x).exp_m1())
    };
    Ok(omega * ratio)
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Upper end of the numerical range in units of `max(k₁, k₂)`.
    pub p_max_factor: f64,
    /// Lower end in units of `min(k₁, k₂)`.
    pub p_min_factor: f64,
    /// Panels per unit of `ln p`.
    pub panels_per_e_fold: f64,
    pub order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { p_max_factor: 50.0, p_min_factor: 1e-3, panels_per_e_fold: 4.0, order: 20 }
    }
}

/// `⟨ψ₁|ψ₂⟩ = ∫ p² ψ₁ ψ₂ dp` by Gauss–Legendre in `ln p` up to
/// `P = 50·max(k)`, plus the analytic integral of the leading
/// `p^(-5/2)` oscillatory asymptotics beyond `P`.
pub fn scalar_product_quadrature(c: &Coupling, k1: f64, k2: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(k1 > 0.0 && k2 > 0.0) {
        return Err(Error::invalid("momenta must be positive"));
    }
    let params = c.hyp_params()?;
    let p_lo = cfg.p_min_factor * k1.min(k2);
    let p_hi = cfg.p_max_factor * k1.max(k2);
    let (u0, u1) = (p_lo.ln(), p_hi.ln());
    let panels = ((u1 - u0) * cfg.panels_per_e_fold).ceil() as usize;
    let (x, w) = gauss_legendre(cfg.order);
    let h = (u1 - u0) / panels as f64;
    let mut body = 0.0;
    for j in 0..panels {
        let mid = u0 + (j as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            let p = (mid + 0.5 * h * xi).exp();
            let f1 = hyp2f1(&params, -(p / k1).powi(2))?.re;
            let f2 = hyp2f1(&params, -(p / k2).powi(2))?.re;
            body += 0.5 * h * wi * p * p * p * f1 * f2;
        }
    }
    let head = p_lo.powi(3) / 3.0;
    Ok(head + body + asymptotic_tail(c, &params, k1, k2, p_hi)?)
}

/// `∫_P^∞ p² ψ₁ψ₂ dp` with `ψ_j ≈ g_j p^(-2a) + c.c.`, `g_j = G k_j^(2a)`.
fn asymptotic_tail(c: &Coupling, params: &Hyp2F1Params, k1: f64, k2: f64, p: f64) -> Result<f64> {
    let (a, b, cc) = (params.a, params.b, params.c);
    let ln_g = ln_gamma_complex(cc)? + ln_gamma_complex(b - a)? - ln_gamma_complex(b)? - ln_gamma_complex(cc - a)?;
    let g1 = (ln_g + 2.0 * a * k1.ln()).exp();
    let g2 = (ln_g + 2.0 * a * k2.ln()).exp();
    let lp = p.ln();
    // ∫_P^∞ p^s dp = -P^(s+1)/(s+1)
    let tail = |s: Complex64| -((s + 1.0) * lp).exp() / (s + 1.0);
    let s_same = 2.0 - 4.0 * a;
    let s_mixed = Complex64::new(2.0 - 4.0 * a.re, 0.0);
    let total = g1 * g2 * tail(s_same) + g1 * g2.conj() * tail(s_mixed);
    let _ = c;
    Ok(2.0 * total.re)
}

/// `E_n = E₁ exp(-2nπ/ν)` for `n_lo ≤ n ≤ n_hi`.
pub fn orthogonality_spectrum(c: &Coupling, e1: f64, n_lo: i64, n_hi: i64) -> Result<SpectrumResult> {
    c.require_oscillatory()?;
    if !(e1 < 0.0) {
        return Err(Error::invalid("E1 must be negative"));
    }
    if n_hi < n_lo {
        return Err(Error::invalid("empty level range"));
    }
    let mut out = SpectrumResult::new(SpectrumMethod::Orthogonality, LevelUnits::Energy)
        .with_param("kappa", c.kappa)
        .with_param("e1", e1);
    for n in n_lo..=n_hi {
        out.push(n, e1 * (-2.0 * n as f64 * PI / c.nu).exp());
    }
    Ok(out)
}

/// Cutoff spectrum with the default validity threshold.
pub fn cutoff_spectrum(c: &Coupling, lambda_cut: f64, mass: f64, n_lo: i64, n_hi: i64) -> Result<SpectrumResult> {
    cutoff_spectrum_with(c, lambda_cut, mass, n_lo, n_hi, F_VALID)
}

/// `E_n = -(Λ²/2m) exp{(2/ν)[arg A - (n + 1/2)π]}`, keeping only levels with
/// `|E_n| < f_valid·Λ²/2m`.
pub fn cutoff_spectrum_with(
    c: &Coupling,
    lambda_cut: f64,
    mass: f64,
    n_lo: i64,
    n_hi: i64,
    f_valid: f64,
) -> Result<SpectrumResult> {
    c.require_oscillatory()?;
    if !(lambda_cut > 0.0 && mass > 0.0 && f_valid > 0.0) {
        return Err(Error::invalid("need lambda_cut, mass and f_valid positive"));
    }
    let scale = lambda_cut * lambda_cut / (2.0 * mass);
    let mut out = SpectrumResult::new(SpectrumMethod::Cutoff, LevelUnits::Energy)
        .with_param("kappa", c.kappa)
        .with_param("lambda_cut", lambda_cut)
        .with_param("mass", mass)
        .with_param("f_valid", f_valid);
    for n in n_lo..=n_hi {
        let f = level_factor(c, n)?;
        if f < f_valid {
            out.push(n, -scale * f);
        }
    }
    if out.is_empty() {
        out.warnings.push("no level passes the validity filter".into());
    }
    Ok(out)
}

/// Roots of `1 = 4κ[1/(s+3) - 1/(s+2)]`, i.e. `s = -5/2 ± √(1 - 16κ)/2`.
pub fn characteristic_roots(c: &Coupling) -> (Complex64, Complex64) {
    let disc = Complex64::new(1.0 - 16.0 * c.kappa, 0.0).sqrt() * 0.5;
    (Complex64::new(-2.5, 0.0) + disc, Complex64::new(-2.5, 0.0) - disc)
}

/// Flat-space Green function `1/max(p, p')`.
pub fn green_kernel_flat(p: f64, pprime: f64) -> f64 {
    1.0 / p.max(pprime)
}
