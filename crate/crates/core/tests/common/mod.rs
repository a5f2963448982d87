//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use num_complex::Complex64;
use std::f64::consts::PI;

/// `ln Γ(z)` from the Stirling series after shifting `Re z` above 40, with
/// reflection for `Re z < 1/2`.
pub fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - stirling_ln_gamma(1.0 - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 40.0 {
        shift += w.ln();
        w += 1.0;
    }
    let b = bernoulli_even(25);
    let mut series = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut pow = inv;
    for (n, b2n) in b.iter().enumerate().skip(1) {
        let two_n = 2.0 * n as f64;
        series += pow * (b2n / (two_n * (two_n - 1.0)));
        pow *= inv2;
    }
    series - shift
}

pub fn stirling_gamma(z: Complex64) -> Complex64 {
    stirling_ln_gamma(z).exp()
}

/// `B₀, B₂, …, B_{2(n-1)}` from the Akiyama–Tanigawa recurrence.
fn bernoulli_even(n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut a = vec![0.0f64; m + 1];
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..=m {
        a[i] = 1.0 / (i as f64 + 1.0);
        for j in (1..=i).rev() {
            a[j - 1] = j as f64 * (a[j - 1] - a[j]);
        }
        out.push(a[0]);
    }
    (0..n).map(|k| out[2 * k]).collect()
}

/// Classic fixed-step RK4.
pub fn rk4<const N: usize, F: Fn(f64, [f64; N]) -> [f64; N]>(f: F, t0: f64, y0: [f64; N], t1: f64, steps: usize) -> [f64; N] {
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let mut t = t0;
    let add = |y: [f64; N], k: [f64; N], s: f64| std::array::from_fn(|i| y[i] + s * k[i]);
    for _ in 0..steps {
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, add(y, k1, 0.5 * h));
        let k3 = f(t + 0.5 * h, add(y, k2, 0.5 * h));
        let k4 = f(t + h, add(y, k3, h));
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        t += h;
    }
    y
}

/// `∫₀^∞ p² ψ₁ψ₂ dp` for two regular ordinary solutions, accumulated while
/// integrating both equations in `t = ln p` up to `10⁴·max(k)`. The
/// neglected tail is `O(10⁻⁸)` of the norms.
pub fn ordinary_overlap(kappa: f64, k1: f64, k2: f64) -> f64 {
    let lo = 1e-6 * k1.min(k2);
    let hi = 1e4 * k1.max(k2);
    let seed = |k: f64| {
        let c2 = -(3.0 + 2.0 * kappa) / (3.0 * k * k);
        [1.0 + c2 * lo * lo, 2.0 * c2 * lo * lo]
    };
    let (s1, s2) = (seed(k1), seed(k2));
    let y0 = [s1[0], s1[1], s2[0], s2[1], lo.powi(3) / 3.0];
    let rhs = |t: f64, y: [f64; 5]| {
        let q = t.exp();
        let mut out = [0.0; 5];
        for (j, k) in [k1, k2].into_iter().enumerate() {
            let d = q * q + k * k;
            let pcoef = (2.0 / q) * (3.0 * q * q + k * k) / d;
            out[2 * j] = y[2 * j + 1];
            out[2 * j + 1] = y[2 * j + 1] - q * pcoef * y[2 * j + 1] - q * q * (6.0 + 4.0 * kappa) / d * y[2 * j];
        }
        out[4] = q * q * q * y[0] * y[2];
        out
    };
    let steps = ((hi / lo).ln() * 4000.0) as usize;
    rk4(rhs, lo.ln(), y0, hi.ln(), steps)[4]
}

/// Regular solution of the ordinary momentum-space equation
/// `ψ'' + (2/p)(3p²+k²)/(p²+k²) ψ' + (6+4κ)/(p²+k²) ψ = 0`, `ψ(0) = 1`,
/// integrated in `t = ln p` with state `(ψ, pψ')`.
pub fn ordinary_ode_solution(kappa: f64, k: f64, p: f64) -> f64 {
    let k2 = k * k;
    let c2 = -(3.0 + 2.0 * kappa) / (3.0 * k2);
    let p0 = 1e-6 * k;
    let y0 = [1.0 + c2 * p0 * p0, 2.0 * c2 * p0 * p0];
    let rhs = |t: f64, y: [f64; 2]| {
        let q = t.exp();
        let d = q * q + k2;
        let pcoef = (2.0 / q) * (3.0 * q * q + k2) / d;
        [y[1], y[1] - q * pcoef * y[1] - q * q * (6.0 + 4.0 * kappa) / d * y[0]]
    };
    rk4(rhs, p0.ln(), y0, p.ln(), 40_000)[0]
}

/// Heun equation `f'' + (c/ξ + e/(ξ-1) + d/(ξ-ξ₀)) f' + (αξ + q)/(ξ(ξ-1)(ξ-ξ₀)) f = 0`
/// integrated in `t = ln|ξ|` from a tiny `ξ` seeded with the first two
/// Frobenius terms, state `(f, ξf')`.
pub fn heun_ode_solution(xi0: f64, q: f64, ab: f64, c: f64, d: f64, e: f64, xi: f64) -> f64 {
    let sign = xi.signum();
    let c1 = -q / (c * xi0);
    let x0 = 1e-9 * xi;
    let y0 = [1.0 + c1 * x0, c1 * x0];
    let rhs = |t: f64, y: [f64; 2]| {
        let x = sign * t.exp();
        let p = c / x + e / (x - 1.0) + d / (x - xi0);
        let qq = (ab * x + q) / (x * (x - 1.0) * (x - xi0));
        [y[1], y[1] - x * p * y[1] - x * x * qq * y[0]]
    };
    rk4(rhs, x0.abs().ln(), y0, xi.abs().ln(), 40_000)[0]
}

/// Residual of the Heun equation after substituting `Σ Cₙ ξⁿ`: the
/// coefficient of `ξⁿ` in `ξ(ξ-1)(ξ-ξ₀)f'' + [c(ξ-1)(ξ-ξ₀) + eξ(ξ-ξ₀) + dξ(ξ-1)]f' + (αξ+q)f`
/// for every `n` whose terms are fully determined by the truncation.
pub fn heun_substitution_residuals(coeffs: &[f64], xi0: f64, q: f64, ab: f64, c: f64, d: f64, e: f64) -> Vec<f64> {
    let n_max = coeffs.len() - 1;
    let cf = |k: usize| coeffs.get(k).copied().unwrap_or(0.0);
    // ξ(ξ-1)(ξ-ξ₀) = ξ³ - (1+ξ₀)ξ² + ξ₀ξ
    // c(ξ-1)(ξ-ξ₀) + eξ(ξ-ξ₀) + dξ(ξ-1) = (c+d+e)ξ² - (c(1+ξ₀) + eξ₀ + d)ξ + cξ₀
    let p2 = c + d + e;
    let p1 = -(c * (1.0 + xi0) + e * xi0 + d);
    let p0 = c * xi0;
    (0..n_max)
        .map(|n| {
            let nf = n as f64;
            let prev = if n >= 1 { cf(n - 1) } else { 0.0 };
            let terms = [
                xi0 * (nf + 1.0) * nf * cf(n + 1),
                -(1.0 + xi0) * nf * (nf - 1.0) * cf(n),
                (nf - 1.0) * (nf - 2.0) * prev,
                p0 * (nf + 1.0) * cf(n + 1),
                p1 * nf * cf(n),
                p2 * (nf - 1.0) * prev,
                q * cf(n),
                ab * prev,
            ];
            let scale: f64 = terms.iter().map(|t| t.abs()).sum();
            terms.iter().sum::<f64>() / scale.max(1e-300)
        })
        .collect()
}

/// `F(a, b; c; x)` by direct summation for `|x| < 1`, in complex arithmetic.
pub fn series_2f1(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..20_000 {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() && n > 5 {
            break;
        }
    }
    sum
}
