//! Deformation parameters, the ω notation, minimal lengths, and the
//! hypergeometric and Heun parameter bundles built from them.

use crate::error::{Error, Result};
use crate::special_fn::{HeunParams, Hyp2F1Params};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Deformation `[X_i, P_j] = i[(1 + βP²)δ_ij + β' P_i P_j]`, ℏ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deformation {
    pub beta: f64,
    pub beta_prime: f64,
    pub gamma: f64,
}

impl Deformation {
    pub fn new(beta: f64, beta_prime: f64) -> Result<Self> {
        if !(beta.is_finite() && beta_prime.is_finite() && beta >= 0.0 && beta_prime >= 0.0) {
            return Err(Error::invalid(format!("beta = {beta}, beta' = {beta_prime} must be finite and non-negative")));
        }
        Ok(Self { beta, beta_prime, gamma: 0.0 })
    }

    pub fn equal(beta: f64) -> Result<Self> {
        Self::new(beta, beta)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn is_deformed(&self) -> bool {
        self.beta + self.beta_prime > 0.0
    }

    pub fn omega1(&self) -> Result<f64> {
        let s = self.beta + self.beta_prime;
        if s > 0.0 {
            Ok(s)
        } else {
            Err(Error::invalid("beta + beta' must be positive"))
        }
    }

    pub fn omega4(&self) -> Result<f64> {
        Ok(self.beta / self.omega1()?)
    }

    /// Deformation with the same ω₄ and `β + β' = omega1`.
    pub fn rescaled(&self, omega1: f64) -> Result<Self> {
        let w4 = self.omega4()?;
        Self::new(w4 * omega1, (1.0 - w4) * omega1)
    }

    /// `ω = -m(β + β')E`.
    pub fn omega_from_energy(&self, mass: f64, energy: f64) -> Result<f64> {
        Ok(-mass * self.omega1()? * energy)
    }

    pub fn energy_from_omega(&self, mass: f64, omega: f64) -> Result<f64> {
        Ok(-omega / (mass * self.omega1()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaParams {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub omega4: f64,
    pub omega: f64,
    pub kappa: f64,
}

pub fn omega_params(d: &Deformation, kappa: f64, omega: f64) -> Result<OmegaParams> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::invalid("kappa must be positive"));
    }
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::invalid("omega must be non-negative"));
    }
    let (b, bp) = (d.beta, d.beta_prime);
    Ok(OmegaParams {
        omega1: d.omega1()?,
        omega2: b + 2.0 * bp,
        omega3: 2.0 * b + 3.0 * bp,
        omega4: d.omega4()?,
        omega,
        kappa,
    })
}

/// `(ΔX)_min = √(Dβ + β')` in units ℏ = 1.
pub fn minimal_length(d: &Deformation, dim: u32) -> Result<f64> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok((dim as f64 * d.beta + d.beta_prime).sqrt())
}

/// Exponent `α = (γ - β'(D-1)/2)/(β + β')` of the scalar-product weight
/// `[1 + (β+β')p²]^(α-1)`.
pub fn weight_exponent(d: &Deformation, dim: u32) -> Result<f64> {
    Ok((d.gamma - d.beta_prime * (dim as f64 - 1.0) / 2.0) / d.omega1()?)
}

/// `p → z = (ω₁p² - 1)/(ω₁p² + 1) ∈ [-1, 1)`.
pub fn z_of_p(omega1: f64, p: f64) -> f64 {
    let x = omega1 * p * p;
    (x - 1.0) / (x + 1.0)
}

/// `ξ = (z + 1)/2 = ω₁p²/(1 + ω₁p²) ∈ [0, 1)`.
pub fn xi_of_p(omega1: f64, p: f64) -> f64 {
    let x = omega1 * p * p;
    x / (1.0 + x)
}

/// `ξ₀ = 2ω/(2ω - 1)`.
pub fn xi0_of_omega(omega: f64) -> f64 {
    2.0 * omega / (2.0 * omega - 1.0)
}

/// Principal square root of a real radicand, `+i√|r|` when negative.
pub fn real_or_imaginary_sqrt(r: f64) -> Complex64 {
    if r >= 0.0 {
        Complex64::new(r.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-r).sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformedHeunBundle {
    pub heun: HeunParams,
    pub nu_tilde: Complex64,
    pub xi0: f64,
    pub q: f64,
}

fn check_bound_branch(omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega < 0.5) {
        return Err(Error::OutOfDomain { what: "bound-state branch 0 < omega < 1/2", x: omega });
    }
    Ok(())
}

/// Heun parameters of the deformed equation in `ξ`.
pub fn heun_bundle(op: &OmegaParams) -> Result<DeformedHeunBundle> {
    check_bound_branch(op.omega)?;
    let w4 = op.omega4;
    let g = op.kappa / (1.0 - 2.0 * op.omega);
    let nu_tilde = real_or_imaginary_sqrt((w4 - 1.0).powi(2) - 4.0 * g);
    let a = (Complex64::new(3.0 - w4, 0.0) - nu_tilde) * 0.5;
    let b = (Complex64::new(3.0 - w4, 0.0) + nu_tilde) * 0.5;
    let q = -(1.5 + g);
    let xi0 = xi0_of_omega(op.omega);
    let heun = HeunParams::new(xi0, q, a, b, 1.5, 2.0, 0.5 - w4)?;
    Ok(DeformedHeunBundle { heun, nu_tilde, xi0, q })
}

/// `ν̃ = √(1/4 - 4κ/(1 - 2ω))` of the equal-β reduction.
pub fn nu_tilde_special(kappa: f64, omega: f64) -> Complex64 {
    real_or_imaginary_sqrt(0.25 - 4.0 * kappa / (1.0 - 2.0 * omega))
}

/// `(5/4 - ν̃/2, 5/4 + ν̃/2; 3/2)` for given `(κ, ω)`.
pub fn special_hyp_params(kappa: f64, omega: f64) -> Result<Hyp2F1Params> {
    if omega == 0.5 {
        return Err(Error::OutOfDomain { what: "equal-beta quantization (pole at omega = 1/2)", x: omega });
    }
    let nt = nu_tilde_special(kappa, omega);
    let base = Complex64::new(1.25, 0.0);
    Hyp2F1Params::new(base - nt * 0.5, base + nt * 0.5, Complex64::new(1.5, 0.0))
}

/// Hypergeometric parameters of the equal-β quantization function.
pub fn hyp_bundle_special(op: &OmegaParams) -> Result<Hyp2F1Params> {
    if (op.omega4 - 0.5).abs() > 1e-12 {
        return Err(Error::WrongRegime(format!("omega4 = {} but the reduction needs beta = beta'", op.omega4)));
    }
    special_hyp_params(op.kappa, op.omega)
}

/// Zero-energy parameters `a, b = 1/4 - ω₄/2 ∓ μ/2 - iν/2`, `c = 1 - iν`,
/// with `μ = √((ω₄ - 1)² - 4κ)`.
pub fn zero_energy_bundle(op: &OmegaParams) -> Result<Hyp2F1Params> {
    let nu2 = 4.0 * op.kappa - 0.25;
    if !(nu2 > 0.0) {
        return Err(Error::WrongRegime("zero-energy solution needs kappa > 1/16".into()));
    }
    let inu = Complex64::new(0.0, nu2.sqrt());
    let mu = Complex64::new((op.omega4 - 1.0).powi(2) - 4.0 * op.kappa, 0.0).sqrt();
    let base = Complex64::new(0.25 - 0.5 * op.omega4, 0.0) - inu * 0.5;
    Hyp2F1Params::new(base - mu * 0.5, base + mu * 0.5, 1.0 - inu)
}
