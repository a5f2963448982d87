//! Dormand–Prince 5(4) integrator with step-size control and dense output.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; zero selects one automatically.
    pub h_init: f64,
    /// Largest allowed step magnitude; zero means unbounded.
    pub h_max: f64,
    pub max_steps: usize,
    /// Scale every component's error by the state's max-norm rather than
    /// by its own magnitude; suits oscillating solutions with frequent zeros.
    pub norm_scale: bool,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-14, h_init: 0.0, h_max: 0.0, max_steps: 1_000_000, norm_scale: false }
    }
}

impl OdeConfig {
    pub fn with_rtol(rtol: f64) -> Self {
        Self { rtol, atol: rtol * 1e-4, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub y_end: [f64; N],
    /// States at the requested output points, in request order.
    pub outputs: Vec<[f64; N]>,
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

fn check_finite<const N: usize>(y: &[f64; N]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("ode state"))
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
///
/// `t_out` must be ordered in the direction of integration and lie within
/// `[t0, t1]`; states there come from the continuous extension. `on_step`
/// sees `(t, y)` after every accepted step.
pub fn solve<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    cfg: &OdeConfig,
    t_out: &[f64],
    mut on_step: O,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    check_finite(&y0)?;
    let mut sol = Solution { y_end: y0, outputs: Vec::with_capacity(t_out.len()), accepted: 0, rejected: 0 };
    let span = t1 - t0;
    if span == 0.0 {
        for _ in t_out {
            sol.outputs.push(y0);
        }
        return Ok(sol);
    }
    let dir = span.signum();
    let within = |t: f64| (t - t0) * dir >= -1e-12 * span.abs() && (t1 - t) * dir >= -1e-12 * span.abs();
    if !t_out.iter().all(|&t| within(t)) || t_out.windows(2).any(|w| (w[1] - w[0]) * dir < 0.0) {
        return Err(Error::invalid("output points must be ordered inside the integration span"));
    }

    let inf = |v: &[f64; N]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = |a: &[f64; N], b: &[f64; N], i: usize| {
        if cfg.norm_scale {
            cfg.atol + cfg.rtol * inf(a).max(inf(b))
        } else {
            cfg.atol + cfg.rtol * a[i].abs().max(b[i].abs())
        }
    };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    check_finite(&k1)?;
    let h_max = if cfg.h_max > 0.0 { cfg.h_max } else { span.abs() };

    let mut h = if cfg.h_init > 0.0 {
        cfg.h_init
    } else {
        let norm = |v: &[f64; N]| {
            (v.iter().enumerate().map(|(i, x)| (x / scale(&y, &y, i)).powi(2)).sum::<f64>() / N as f64).sqrt()
        };
        let d0 = norm(&y);
        let d1 = norm(&k1);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(h_max);
        let y1 = axpy(&y, dir * h0, &[(1.0, &k1)]);
        let f1 = f(t + dir * h0, &y1);
        let diff: [f64; N] = std::array::from_fn(|i| f1[i] - k1[i]);
        let d2 = norm(&diff) / h0;
        let m = d1.max(d2);
        let h1 = if m <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / m).powf(0.2) };
        (100.0 * h0).min(h1).min(h_max)
    };

    let mut next_out = 0usize;
    let mut last_rejected = false;
    loop {
        if sol.accepted + sol.rejected >= cfg.max_steps {
            return Err(Error::TooManySteps(cfg.max_steps));
        }
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            break;
        }
        let mut last = false;
        if h >= remaining * (1.0 - 1e-12) {
            h = remaining;
            last = true;
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t, h });
        }
        let hs = dir * h;
        let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + hs, &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t_new = if last { t1 } else { t + hs };
        let k7 = f(t_new, &y_new);

        let mut err = 0.0;
        for i in 0..N {
            let e = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            err += (e / scale(&y, &y_new, i)).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() {
            h *= 0.2;
            last_rejected = true;
            sol.rejected += 1;
            continue;
        }

        if err <= 1.0 {
            while next_out < t_out.len() && (t_out[next_out] - t_new) * dir <= 0.0 {
                let theta = ((t_out[next_out] - t) / hs).clamp(0.0, 1.0);
                let th1 = 1.0 - theta;
                let mut yo = [0.0; N];
                for i in 0..N {
                    let ydiff = y_new[i] - y[i];
                    let bspl = hs * k1[i] - ydiff;
                    let r4 = ydiff - hs * k7[i] - bspl;
                    let r5 = hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                    yo[i] = y[i] + theta * (ydiff + th1 * (bspl + theta * (r4 + th1 * r5)));
                }
                sol.outputs.push(yo);
                next_out += 1;
            }
            t = t_new;
            y = y_new;
            check_finite(&y)?;
            k1 = k7;
            sol.accepted += 1;
            on_step(t, &y);
            if last {
                break;
            }
            let mut fac = 0.9 * err.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 10.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(h_max);
            last_rejected = false;
        } else {
            let fac = (0.9 * err.powf(-0.2)).max(0.2);
            h *= fac;
            last_rejected = true;
            sol.rejected += 1;
        }
    }
    while next_out < t_out.len() {
        sol.outputs.push(y);
        next_out += 1;
    }
    sol.y_end = y;
    Ok(sol)
}
