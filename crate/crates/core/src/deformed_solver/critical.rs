//! Critical coupling by bisection on the existence of a bound state.

use super::exact::quantization_h_reduced;
use super::shooting::{count_nodes, ShootingConfig};
use super::SearchConfig;
use crate::deformed_model::Deformation;
use crate::error::{Error, Result};
use crate::roots::{log_grid, sign_changes};
use serde::{Deserialize, Serialize};

/// Lowest ω probed for a level. Near κ = 1/16 the ground state sits at
/// `ω ≈ exp(-2π/ν)`, so the floor fixes how close to 1/16 the bisection can
/// resolve: 1e-280 corresponds to κ - 1/16 ≈ 2.4e-5.
pub const OMEGA_FLOOR: f64 = 1e-280;
/// Upper end of the ω window.
pub const OMEGA_CEIL: f64 = 0.499;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalMethod {
    /// Sign changes of the equal-β quantization function.
    QuantizationScan,
    /// Nodes of the regular shooting solution at the ω floor.
    NodeCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalCoupling {
    pub kappa_star: f64,
    /// `|κ* - 1/16|`.
    pub deviation: f64,
    pub bracket: (f64, f64),
    pub omega_floor: f64,
    pub method: CriticalMethod,
    pub iterations: usize,
}

pub fn critical_coupling(d: &Deformation, tol: f64) -> Result<CriticalCoupling> {
    critical_coupling_with(d, tol, OMEGA_FLOOR, &SearchConfig { per_decade: 8, ..SearchConfig::default() })
}

/// Bisection on `κ ∈ [0.02, 0.25]` for the existence of a level with
/// `ω ∈ (omega_floor, OMEGA_CEIL)`.
///
/// Equal β uses the quantization function; otherwise a level exists above
/// the floor iff the regular solution at the floor has a node, since each
/// level crossed while lowering ω adds one.
pub fn critical_coupling_with(d: &Deformation, tol: f64, omega_floor: f64, search: &SearchConfig) -> Result<CriticalCoupling> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if !(omega_floor > 0.0 && omega_floor < OMEGA_CEIL) {
        return Err(Error::invalid("omega floor must lie in (0, 0.499)"));
    }
    let w4 = d.omega4()?;
    let method = if (w4 - 0.5).abs() < 1e-12 { CriticalMethod::QuantizationScan } else { CriticalMethod::NodeCount };
    let grid = log_grid(omega_floor, OMEGA_CEIL, search.per_decade);
    let shoot = ShootingConfig::default();
    let has_level = |kappa: f64| -> Result<bool> {
        match method {
            CriticalMethod::QuantizationScan => {
                let vals: Result<Vec<f64>> = search.exec.map(&grid, |&w| quantization_h_reduced(kappa, w)).into_iter().collect();
                Ok(!sign_changes(&vals?).is_empty())
            }
            CriticalMethod::NodeCount => Ok(count_nodes(kappa, omega_floor, w4, &shoot)? > 0),
        }
    };
    let (mut lo, mut hi) = (0.02, 0.25);
    if has_level(lo)? || !has_level(hi)? {
        return Err(Error::NoBracket { lo, hi });
    }
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if has_level(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let kappa_star = 0.5 * (lo + hi);
    Ok(CriticalCoupling {
        kappa_star,
        deviation: (kappa_star - 1.0 / 16.0).abs(),
        bracket: (lo, hi),
        omega_floor,
        method,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shallow_floor_overestimates() {
        let d = Deformation::equal(1.0).unwrap();
        let search = SearchConfig { per_decade: 8, ..SearchConfig::default() };
        let shallow = critical_coupling_with(&d, 1e-4, 1e-6, &search).unwrap();
        let deep = critical_coupling_with(&d, 1e-4, 1e-100, &search).unwrap();
        assert!(shallow.kappa_star > deep.kappa_star);
        assert!(deep.kappa_star > 1.0 / 16.0);
    }
}
