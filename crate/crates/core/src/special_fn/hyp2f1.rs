//! Gauss hypergeometric function ₂F₁(a, b; c; x) for complex parameters and
//! real argument `x ≤ 1`.
//!
//! Region map:
//! - `|x| ≤ 1/2`: direct series.
//! - `1/2 < x < 1`: connection formula about `x = 1`.
//! - `x < -1/2`: Pfaff transform onto `1 - τ` with `τ = 1/(1 - x)`; the
//!   resulting function is summed directly or through the connection formula
//!   in `τ` itself, which stays accurate when `τ` is tiny.
//!
//! When `c - a - b` sits within `δ/2` of an integer the connection formula
//! cancels catastrophically; the value is then taken as a Richardson
//! combination of evaluations at `c ± δ` and `c ± 2δ`, with `δ` shrinking
//! like `1/|ln y|` so the `y^(c-a-b)` factor stays smooth over the stencil.

use super::gamma::{ln_gamma_complex, rgamma};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const MAX_TERMS: usize = 100_000;
const DEGENERATE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyp2F1Params {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl Hyp2F1Params {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        if is_nonpositive_integer(c) {
            return Err(Error::Pole { function: "2F1 (parameter c)", at: format!("{}", c.re) });
        }
        if ![a, b, c].iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("2F1 parameters"));
        }
        Ok(Self { a, b, c })
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a.conj(), b: self.b.conj(), c: self.c.conj() }
    }

    /// Coefficients `(P, Q)` of `f'' + P f' + Q f = 0` for the
    /// hypergeometric equation at `x`.
    pub fn ode_coefficients(&self, x: f64) -> (Complex64, Complex64) {
        let den = x * (1.0 - x);
        let p = (self.c - (self.a + self.b + 1.0) * x) / den;
        let q = -(self.a * self.b) / den;
        (p, q)
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn terminating_degree(p: &Hyp2F1Params) -> Option<usize> {
    [p.a, p.b]
        .iter()
        .filter(|z| is_nonpositive_integer(**z))
        .map(|z| (-z.re) as usize)
        .min()
}

fn direct_series(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_run = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.norm() <= f64::EPSILON * 0.5 * sum.norm() {
            small_run += 1;
            if small_run >= 2 {
                return finite(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence { what: "2F1 series", iterations: MAX_TERMS })
}

fn polynomial(a: Complex64, b: Complex64, c: Complex64, x: f64, degree: usize) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..degree {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
    }
    finite(sum)
}

fn finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite("2F1 value"))
    }
}


/// `F(a, b; c; 1 - y)` for `0 ≤ y ≤ 1/2` through the connection formula.
fn about_one(a: Complex64, b: Complex64, c: Complex64, y: f64) -> Result<Complex64> {
    let s = c - a - b;
    if y == 0.0 {
        if s.re <= 0.0 {
            return Err(Error::OutOfDomain { what: "2F1 at x = 1 with Re(c-a-b) <= 0", x: 1.0 });
        }
        return gauss_sum(a, b, c);
    }
    let delta = DEGENERATE_STEP / y.ln().abs().max(1.0);
    if (s - s.re.round()).norm() < 0.5 * delta {
        let eval = |dc: f64| about_one_generic(a, b, c + dc, y);
        let avg1 = (eval(delta)? + eval(-delta)?) * 0.5;
        let avg2 = (eval(2.0 * delta)? + eval(-2.0 * delta)?) * 0.5;
        return finite((avg1 * 4.0 - avg2) / 3.0);
    }
    about_one_generic(a, b, c, y)
}

fn gauss_sum(a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
    let s = c - a - b;
    let ln = ln_gamma_complex(c)? + ln_gamma_complex(s)?;
    finite(ln.exp() * rgamma(c - a) * rgamma(c - b))
}

fn about_one_generic(a: Complex64, b: Complex64, c: Complex64, y: f64) -> Result<Complex64> {
    let s = c - a - b;
    let lg_c = ln_gamma_complex(c)?;
    let first = if is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b) {
        Complex64::new(0.0, 0.0)
    } else {
        let coef = (lg_c + ln_gamma_complex(s)?).exp() * rgamma(c - a) * rgamma(c - b);
        coef * direct_series(a, b, 1.0 - s, y)?
    };
    let second = if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        Complex64::new(0.0, 0.0)
    } else {
        let coef = (lg_c + ln_gamma_complex(-s)?).exp() * rgamma(a) * rgamma(b);
        coef * (s * y.ln()).exp() * direct_series(c - a, c - b, 1.0 + s, y)?
    };
    finite(first + second)
}

/// `F(a, c - b; c; 1 - τ)` for `0 < τ ≤ 1`, so that
/// `F(a, b; c; 1 - 1/τ) = τ^a · pfaff_reduced(p, τ)`.
pub fn pfaff_reduced(p: &Hyp2F1Params, tau: f64) -> Result<Complex64> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::OutOfDomain { what: "pfaff_reduced (needs 0 < tau <= 1)", x: tau });
    }
    let (a, b2, c) = (p.a, p.c - p.b, p.c);
    if let Some(deg) = terminating_degree(&Hyp2F1Params { a, b: b2, c }) {
        return polynomial(a, b2, c, 1.0 - tau, deg);
    }
    if tau >= 0.5 {
        direct_series(a, b2, c, 1.0 - tau)
    } else {
        about_one(a, b2, c, tau)
    }
}

/// ₂F₁(a, b; c; x) for real `x ≤ 1`.
pub fn hyp2f1(p: &Hyp2F1Params, x: f64) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("2F1 argument"));
    }
    if let Some(deg) = terminating_degree(p) {
        return polynomial(p.a, p.b, p.c, x, deg);
    }
    if x == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if x.abs() <= 0.5 {
        return direct_series(p.a, p.b, p.c, x);
    }
    if x > 1.0 {
        return Err(Error::OutOfDomain { what: "2F1 beyond the branch point", x });
    }
    if x > 0.5 {
        return about_one(p.a, p.b, p.c, 1.0 - x);
    }
    let tau = 1.0 / (1.0 - x);
    let pref = (p.a * tau.ln()).exp();
    finite(pref * pfaff_reduced(p, tau)?)
}
