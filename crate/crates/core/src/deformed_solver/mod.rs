//! Bound states with a minimal length.
//!
//! - [`exact`]: the equal-β quantization function and its zeros, plus the
//!   small-ω asymptotic spectrum.
//! - [`shooting`]: the general-β shooting solver on the momentum-space ODE.
//! - [`critical`]: the critical coupling below which no level exists.
//! - [`limits`]: the zero-energy solution and the three limit checks.
//!
//! All solvers work in the scaled momentum `s = √(β+β')·p` and the
//! dimensionless energy `ω = -m(β+β')E`, so only `κ` and `ω₄` matter.

pub mod critical;
pub mod exact;
pub mod limits;
pub mod shooting;

pub use critical::{critical_coupling, critical_coupling_with, CriticalCoupling, CriticalMethod};
pub use exact::{
    asymptotic_omegas, asymptotic_spectrum, find_spectrum_exact, find_spectrum_exact_with, quantization_h_complex,
    quantization_h_reduced, quantization_h_special, scan_special,
};
pub use limits::{validate_limits, zero_energy_wavefunction, LimitReport};
pub use shooting::{
    count_nodes, find_spectrum_general, find_spectrum_general_with, regular_solution, scan_general, shoot_deformed,
    shoot_scaled, ShootingConfig, ShootingResult,
};

use crate::deformed_model::Deformation;
use crate::exec::Execution;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMethod {
    HypergeometricExact,
    ShootingGeneral,
    HeunSeries,
}

/// Sampled quantization function, ascending in ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationScan {
    pub kappa: f64,
    /// `None` for the scale-free equal-β function.
    pub deformation: Option<Deformation>,
    pub grid: Vec<(f64, f64)>,
    pub method: ScanMethod,
}

impl QuantizationScan {
    pub fn sign_changes(&self) -> Vec<(f64, f64)> {
        let h: Vec<f64> = self.grid.iter().map(|g| g.1).collect();
        crate::roots::sign_changes(&h)
            .into_iter()
            .map(|i| (self.grid[i].0, self.grid[i + 1].0))
            .collect()
    }
}

/// Root-search settings shared by the spectrum finders.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub per_decade: usize,
    /// Bracket width at which polishing stops, in `ln ω`.
    pub log_xtol: f64,
    pub exec: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { per_decade: 40, log_xtol: 1e-12, exec: Execution::default() }
    }
}

/// Outcome of one named numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub metric: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    pub fn below(name: &str, metric: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed: metric.is_finite() && metric < tolerance, metric, tolerance, detail: detail.into() }
    }

    pub fn failed(name: &str, tolerance: f64, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed: false, metric: f64::NAN, tolerance, detail: detail.into() }
    }
}
