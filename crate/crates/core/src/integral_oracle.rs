//! Nyström discretization of the momentum-space integral equations.
//!
//! The coupling is the eigenvalue: for fixed binding `k` (or `ω`) the
//! discretized equation `ψ(p)(p² + k²) = λ ∫ G(p, p') μ(p') ψ(p') dp'` is a
//! symmetric eigenproblem in `λ = 4κ`. Levels are the points where an
//! eigenvalue curve `κ_j(ω)` crosses the requested coupling. Nothing here
//! shares numerics with the quantization-function solvers beyond the
//! hypergeometric series inside the kernel.

use crate::deformed_model::Deformation;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ordinary_qm::{LevelUnits, SpectrumMethod, SpectrumResult};
use crate::quadrature::gauss_legendre;
use crate::roots::{brent, log_grid};
use crate::special_fn::{gamma, hyp2f1, Hyp2F1Params};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridMap {
    Linear,
    Log,
    RationalCompactified,
}

/// Momentum quadrature rule: strictly increasing positive nodes, positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub map: GridMap,
}

impl KernelGrid {
    /// `p = scale·t/(1-t)` with Gauss–Legendre `t ∈ (0, 1)`; covers `(0, ∞)`.
    pub fn rational(n: usize, scale: f64) -> Result<Self> {
        check_size(n)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid("grid scale must be positive"));
        }
        let (t, w) = gauss_legendre(n);
        let (nodes, weights) = t
            .iter()
            .zip(&w)
            .map(|(&x, &wx)| {
                let u = 0.5 * (x + 1.0);
                let one_minus = 1.0 - u;
                (scale * u / one_minus, scale * 0.5 * wx / (one_minus * one_minus))
            })
            .unzip();
        Ok(Self { nodes, weights, map: GridMap::RationalCompactified })
    }

    /// Gauss–Legendre in `ln p` on `[lo, hi]`.
    pub fn log(n: usize, lo: f64, hi: f64) -> Result<Self> {
        check_size(n)?;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::invalid("log grid needs 0 < lo < hi"));
        }
        let (a, b) = (lo.ln(), hi.ln());
        let (t, w) = gauss_legendre(n);
        let (nodes, weights) = t
            .iter()
            .zip(&w)
            .map(|(&x, &wx)| {
                let p = (a + 0.5 * (b - a) * (x + 1.0)).exp();
                (p, 0.5 * (b - a) * wx * p)
            })
            .unzip();
        Ok(Self { nodes, weights, map: GridMap::Log })
    }

    /// Gauss–Legendre in `p` on `(0, hi]`.
    pub fn linear(n: usize, hi: f64) -> Result<Self> {
        check_size(n)?;
        if !(hi > 0.0 && hi.is_finite()) {
            return Err(Error::invalid("linear grid needs hi > 0"));
        }
        let (t, w) = gauss_legendre(n);
        let nodes = t.iter().map(|x| 0.5 * hi * (x + 1.0)).collect();
        let weights = w.iter().map(|wx| 0.5 * hi * wx).collect();
        Ok(Self { nodes, weights, map: GridMap::Linear })
    }

    /// Same rule under `p → factor·p`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|p| p * factor).collect(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
            map: self.map,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid("a kernel grid needs at least two nodes"));
    }
    Ok(())
}

/// `√π Γ(1/2+ω₄)/Γ(ω₄)`, the scaled subtraction constant; zero at `ω₄ = 0`.
pub fn kernel_constant(omega4: f64) -> Result<f64> {
    if omega4 == 0.0 {
        return Ok(0.0);
    }
    let num = gamma(Complex64::new(0.5 + omega4, 0.0))?;
    let den = gamma(Complex64::new(omega4, 0.0))?;
    Ok(PI.sqrt() * (num / den).re)
}

/// Deformed Green function in the scaled momentum `s = √ω₁·p_>`,
/// `F(-1/2, ω₄; 1/2; -s²)/s - C̃`. Above `s = 1` the equivalent
/// `s^(-1-2ω₄) F(ω₄, ω₄+1/2; ω₄+3/2; -1/s²)/(1+2ω₄)` avoids the cancellation.
pub fn scaled_kernel(omega4: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::OutOfDomain { what: "deformed kernel (s > 0)", x: s });
    }
    if s <= 1.0 {
        let p = Hyp2F1Params::real(-0.5, omega4, 0.5)?;
        Ok(hyp2f1(&p, -s * s)?.re / s - kernel_constant(omega4)?)
    } else {
        let p = Hyp2F1Params::real(omega4, omega4 + 0.5, omega4 + 1.5)?;
        Ok(s.powf(-1.0 - 2.0 * omega4) / (1.0 + 2.0 * omega4) * hyp2f1(&p, -1.0 / (s * s))?.re)
    }
}

/// `G(p, p')` with a minimal length; depends only on `max(p, p')`.
pub fn green_kernel_deformed(d: &Deformation, p: f64, pprime: f64) -> Result<f64> {
    if !(p > 0.0 && pprime > 0.0) {
        return Err(Error::invalid("kernel arguments must be positive"));
    }
    let w1 = d.omega1()?;
    let root = w1.sqrt();
    Ok(root * scaled_kernel(d.omega4()?, root * p.max(pprime))?)
}

/// `D K D` for a kernel depending on `max(p_i, p_j)`, `D = diag √(w_i μ_i)`.
fn max_kernel_operator(grid: &KernelGrid, kernel_at_node: &[f64], measure: &[f64]) -> DMatrix<f64> {
    let n = grid.len();
    let d: Vec<f64> = grid.weights.iter().zip(measure).map(|(w, m)| (w * m).sqrt()).collect();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let v = d[i] * kernel_at_node[j] * d[j];
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn check_grid(grid: &KernelGrid) -> Result<()> {
    check_size(grid.len())?;
    if grid.nodes.len() != grid.weights.len() {
        return Err(Error::invalid("grid nodes and weights differ in length"));
    }
    let increasing = grid.nodes.windows(2).all(|w| w[1] > w[0]);
    if !increasing || grid.nodes[0] <= 0.0 || grid.weights.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::invalid("grid nodes must be positive and increasing, weights positive"));
    }
    Ok(())
}

/// Eigenvalues of the symmetric operator, largest first.
fn operator_eigenvalues(m: DMatrix<f64>) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    if ev.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Positive operator eigenvalues `μ` turned into couplings `κ = 1/(4μ)`, ascending.
fn couplings(mu: &[f64], n_eigs: usize) -> Vec<f64> {
    mu.iter().filter(|m| **m > 0.0).take(n_eigs).map(|m| 0.25 / m).collect()
}

/// Symmetrized deformed operator at dimensionless energy `ω`; its eigenvalues
/// are `1/(4κ)`.
pub fn deformed_operator(d: &Deformation, omega: f64, grid: &KernelGrid) -> Result<DMatrix<f64>> {
    check_grid(grid)?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid("omega must be positive"));
    }
    let w1 = d.omega1()?;
    let w4 = d.omega4()?;
    let k2 = 2.0 * omega / w1;
    let root = w1.sqrt();
    let kernel: Result<Vec<f64>> = grid.nodes.iter().map(|p| Ok(root * scaled_kernel(w4, root * p)?)).collect();
    let measure: Vec<f64> = grid
        .nodes
        .iter()
        .map(|p| p * p * (1.0 + w1 * p * p).powf(w4 - 2.0) / (p * p + k2))
        .collect();
    Ok(max_kernel_operator(grid, &kernel?, &measure))
}

/// Coupling eigenvalue curves `κ_j(ω)`, each list ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingEigencurve {
    pub omega_samples: Vec<f64>,
    pub kappa_eigenvalues: Vec<Vec<f64>>,
}

impl CouplingEigencurve {
    /// Curve `j` over all samples; `NaN` where fewer eigenvalues exist.
    pub fn curve(&self, j: usize) -> Vec<f64> {
        self.kappa_eigenvalues.iter().map(|k| k.get(j).copied().unwrap_or(f64::NAN)).collect()
    }
}

fn deformed_couplings(d: &Deformation, omega: f64, grid: &KernelGrid, n_eigs: usize) -> Result<Vec<f64>> {
    Ok(couplings(&operator_eigenvalues(deformed_operator(d, omega, grid)?)?, n_eigs))
}

/// The `n_eigs` smallest coupling eigenvalues at every `ω` sample.
pub fn nystrom_eigencurve(
    d: &Deformation,
    omega_samples: &[f64],
    grid: &KernelGrid,
    n_eigs: usize,
    exec: Execution,
) -> Result<CouplingEigencurve> {
    check_grid(grid)?;
    let rows = exec.map(omega_samples, |&w| deformed_couplings(d, w, grid, n_eigs));
    Ok(CouplingEigencurve { omega_samples: omega_samples.to_vec(), kappa_eigenvalues: rows.into_iter().collect::<Result<_>>()? })
}

/// Settings for the deformed crossing search.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub nodes: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    /// Coarse ω samples per decade before polishing.
    pub per_decade: usize,
    /// Also solve on the doubled grid and report the relative shift.
    pub check_doubling: bool,
    pub exec: Execution,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { nodes: 400, omega_min: 1e-6, omega_max: 0.499, per_decade: 4, check_doubling: true, exec: Execution::default() }
    }
}

/// Largest tolerated relative shift under grid doubling.
pub const DOUBLING_TOLERANCE: f64 = 1e-3;

/// Default deformed grid: rational map at the deformation scale `1/√ω₁`.
pub fn deformed_grid(d: &Deformation, nodes: usize) -> Result<KernelGrid> {
    KernelGrid::rational(nodes, 1.0 / d.omega1()?.sqrt())
}

fn crossings_on(kappa: f64, d: &Deformation, n_levels: usize, grid: &KernelGrid, cfg: &OracleConfig) -> Result<Vec<f64>> {
    let samples = log_grid(cfg.omega_min, cfg.omega_max, cfg.per_decade);
    let curve = nystrom_eigencurve(d, &samples, grid, n_levels, cfg.exec)?;
    let brackets: Vec<(usize, f64, f64)> = (0..n_levels)
        .filter_map(|j| {
            let g = curve.curve(j);
            (0..g.len() - 1)
                .rev()
                .find(|&i| g[i].is_finite() && g[i + 1].is_finite() && (g[i] - kappa) * (g[i + 1] - kappa) <= 0.0)
                .map(|i| (j, samples[i].ln(), samples[i + 1].ln()))
        })
        .collect();
    let roots = cfg.exec.map(&brackets, |&(j, a, b)| {
        let f = |lw: f64| {
            let k = deformed_couplings(d, lw.exp(), grid, j + 1)?;
            k.get(j).map(|v| v - kappa).ok_or_else(|| Error::Eigen(format!("fewer than {} positive eigenvalues", j + 1)))
        };
        brent(f, a, b, 1e-11, 0.0, 200).map(f64::exp)
    });
    roots.into_iter().collect()
}

/// Levels `ω_n` where the coupling curves cross `κ`, ground state first.
pub fn nystrom_crossings(kappa: f64, d: &Deformation, n_levels: usize, cfg: &OracleConfig) -> Result<SpectrumResult> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::invalid("kappa must be positive"));
    }
    let grid = deformed_grid(d, cfg.nodes)?;
    let levels = crossings_on(kappa, d, n_levels, &grid, cfg)?;
    let mut out = SpectrumResult::new(SpectrumMethod::Oracle, LevelUnits::Omega)
        .with_param("kappa", kappa)
        .with_param("nodes", cfg.nodes as f64)
        .with_param("omega4", d.omega4()?);
    for (n, w) in levels.iter().enumerate() {
        out.push(n as i64, *w);
    }
    if cfg.check_doubling {
        let fine = crossings_on(kappa, d, n_levels, &deformed_grid(d, 2 * cfg.nodes)?, cfg)?;
        let shift = grid_shift(&levels, &fine);
        out.parameters.insert("doubling_shift".into(), shift);
        for (n, (a, b)) in levels.iter().zip(&fine).enumerate() {
            out.parameters.insert(format!("doubling_shift_{n}"), (b / a - 1.0).abs());
        }
        if shift > DOUBLING_TOLERANCE {
            out.warnings.push(format!("levels shift by {shift:.3e} under grid doubling"));
        }
    }
    if out.len() < n_levels {
        out.warnings.push(format!("found {} of {n_levels} crossings", out.len()));
    }
    Ok(out)
}

/// Largest relative change between matching entries; infinite if counts differ.
pub fn grid_shift(coarse: &[f64], fine: &[f64]) -> f64 {
    if coarse.len() != fine.len() {
        return f64::INFINITY;
    }
    coarse.iter().zip(fine).map(|(a, b)| ((a - b) / b).abs()).fold(0.0, f64::max)
}

/// Largest relative change of the coupling curves between `n` and `2n` nodes.
pub fn grid_convergence(d: &Deformation, omega_samples: &[f64], nodes: usize, n_eigs: usize, exec: Execution) -> Result<f64> {
    let coarse = nystrom_eigencurve(d, omega_samples, &deformed_grid(d, nodes)?, n_eigs, exec)?;
    let fine = nystrom_eigencurve(d, omega_samples, &deformed_grid(d, 2 * nodes)?, n_eigs, exec)?;
    Ok(coarse
        .kappa_eigenvalues
        .iter()
        .zip(&fine.kappa_eigenvalues)
        .map(|(a, b)| grid_shift(a, b))
        .fold(0.0, f64::max))
}

fn flat_operator(k: f64, grid: &KernelGrid, lambda_cut: Option<f64>) -> Result<DMatrix<f64>> {
    check_grid(grid)?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid("k must be positive"));
    }
    let kernel: Vec<f64> = match lambda_cut {
        Some(cut) => {
            if grid.nodes[grid.len() - 1] >= cut {
                return Err(Error::invalid("cutoff grid must lie below the cutoff"));
            }
            grid.nodes.iter().map(|p| 1.0 / p - 1.0 / cut).collect()
        }
        None => grid.nodes.iter().map(|p| 1.0 / p).collect(),
    };
    let measure: Vec<f64> = grid.nodes.iter().map(|p| p * p / (p * p + k * k)).collect();
    Ok(max_kernel_operator(grid, &kernel, &measure))
}

/// Eigenvalues `λ_n = 4κ_n` of the undeformed equation at fixed `k`, ascending.
///
/// The lowest one approaches `1/4` for every `k` on a wide enough grid, so
/// any `κ > 1/16` is reached at any binding.
pub fn nystrom_flat(kappa: f64, k: f64, grid: &KernelGrid) -> Result<Vec<f64>> {
    if !(kappa > 0.0) {
        return Err(Error::invalid("kappa must be positive"));
    }
    let mu = operator_eigenvalues(flat_operator(k, grid, None)?)?;
    Ok(mu.iter().filter(|m| **m > 0.0).map(|m| 1.0 / m).collect())
}

/// Eigenvalues `λ_n` with the Dirichlet condition `ψ(Λ) = 0`, kernel `1/p_> - 1/Λ`.
pub fn nystrom_cutoff(k: f64, lambda_cut: f64, grid: &KernelGrid) -> Result<Vec<f64>> {
    if !(lambda_cut > 0.0) {
        return Err(Error::invalid("cutoff must be positive"));
    }
    let mu = operator_eigenvalues(flat_operator(k, grid, Some(lambda_cut))?)?;
    Ok(mu.iter().filter(|m| **m > 0.0).map(|m| 1.0 / m).collect())
}

/// Default cutoff grid: log-spaced nodes on `[Λ·1e-10, Λ]`.
pub fn cutoff_grid(lambda_cut: f64, nodes: usize) -> Result<KernelGrid> {
    KernelGrid::log(nodes, 1e-10 * lambda_cut, lambda_cut)
}

/// Energies `E_n = -k_n²/2m` where the cutoff eigenvalues cross `4κ`.
pub fn nystrom_cutoff_spectrum(
    kappa: f64,
    lambda_cut: f64,
    mass: f64,
    n_levels: usize,
    grid: &KernelGrid,
) -> Result<SpectrumResult> {
    if !(kappa > 0.0 && mass > 0.0) {
        return Err(Error::invalid("kappa and mass must be positive"));
    }
    let target = 4.0 * kappa;
    let lo = grid.nodes[0].max(1e-300);
    let samples = log_grid(lo, lambda_cut, 8);
    let lambdas: Vec<Vec<f64>> = samples.iter().map(|&k| nystrom_cutoff(k, lambda_cut, grid)).collect::<Result<_>>()?;
    let mut out = SpectrumResult::new(SpectrumMethod::Oracle, LevelUnits::Energy)
        .with_param("kappa", kappa)
        .with_param("lambda_cut", lambda_cut)
        .with_param("mass", mass)
        .with_param("nodes", grid.len() as f64);
    for j in 0..n_levels {
        let at = |i: usize| lambdas[i].get(j).copied().unwrap_or(f64::NAN) - target;
        let Some(i) = (0..samples.len() - 1).rev().find(|&i| at(i) * at(i + 1) <= 0.0) else {
            out.warnings.push(format!("no crossing for level {j}"));
            break;
        };
        let f = |lk: f64| {
            let l = nystrom_cutoff(lk.exp(), lambda_cut, grid)?;
            l.get(j).map(|v| v - target).ok_or_else(|| Error::Eigen("missing eigenvalue".into()))
        };
        let k = brent(f, samples[i].ln(), samples[i + 1].ln(), 1e-11, 0.0, 200)?.exp();
        out.push(j as i64, -k * k / (2.0 * mass));
    }
    out.levels.reverse();
    out.indices.reverse();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_beta_constant_is_one() {
        assert!((kernel_constant(0.5).unwrap() - 1.0).abs() < 1e-14);
        let d = Deformation::equal(0.3).unwrap();
        let c = d.omega1().unwrap().sqrt() * kernel_constant(0.5).unwrap();
        assert!((c - 0.6f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zero_beta_has_no_subtraction() {
        assert_eq!(kernel_constant(0.0).unwrap(), 0.0);
        let v = scaled_kernel(0.0, 0.7).unwrap();
        assert!((v - 1.0 / 0.7).abs() < 1e-14);
    }

    #[test]
    fn kernel_branches_join() {
        for w4 in [0.1, 0.5, 0.9] {
            let below = scaled_kernel(w4, 1.0).unwrap();
            let p = Hyp2F1Params::real(w4, w4 + 0.5, w4 + 1.5).unwrap();
            let above = hyp2f1(&p, -1.0).unwrap().re / (1.0 + 2.0 * w4);
            assert!((below - above).abs() < 1e-12, "{w4}: {below} {above}");
        }
    }

    #[test]
    fn kernel_decays_like_power() {
        let w4 = 0.5;
        let r = scaled_kernel(w4, 2e3).unwrap() / scaled_kernel(w4, 1e3).unwrap();
        assert!((r - 2f64.powf(-2.0)).abs() < 1e-6);
    }

    #[test]
    fn deformed_kernel_symmetry_and_flat_limit() {
        let d = Deformation::equal(0.5e-14).unwrap();
        for &(p, q) in &[(0.3, 2.0), (5.0, 0.1), (1.0, 1.0)] {
            let g = green_kernel_deformed(&d, p, q).unwrap();
            assert_eq!(g, green_kernel_deformed(&d, q, p).unwrap());
            let flat = crate::ordinary_qm::green_kernel_flat(p, q);
            assert!((g - flat).abs() < 1e-6);
        }
    }

    #[test]
    fn grids_are_ordered_and_exact_on_polynomials() {
        let g = KernelGrid::linear(8, 2.0).unwrap();
        let s: f64 = g.nodes.iter().zip(&g.weights).map(|(p, w)| w * p * p * p).sum();
        assert!((s - 4.0).abs() < 1e-13);
        let r = KernelGrid::rational(40, 1.0).unwrap();
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(p, w)| w / ((1.0 + p) * (1.0 + p))).sum();
        assert!((s - 1.0).abs() < 1e-13);
        for grid in [g, r, KernelGrid::log(20, 1e-3, 1e3).unwrap()] {
            assert!(check_grid(&grid).is_ok());
        }
    }

    #[test]
    fn operator_is_symmetric() {
        let d = Deformation::equal(1.0).unwrap();
        let m = deformed_operator(&d, 1e-3, &deformed_grid(&d, 60).unwrap()).unwrap();
        assert_eq!(m, m.transpose());
    }

    #[test]
    fn flat_eigenvalues_are_scale_free() {
        let grid = KernelGrid::log(120, 1e-6, 1e6).unwrap();
        let a = nystrom_flat(0.75, 1.0, &grid).unwrap();
        let b = nystrom_flat(0.75, 2.0, &grid.scaled(2.0)).unwrap();
        for (x, y) in a.iter().zip(&b).take(10) {
            assert!((x - y).abs() < 1e-10 * x);
        }
    }

    #[test]
    fn curves_are_sorted() {
        let d = Deformation::equal(1.0).unwrap();
        let c = nystrom_eigencurve(&d, &[1e-4, 1e-2], &deformed_grid(&d, 80).unwrap(), 3, Execution::Sequential).unwrap();
        for row in &c.kappa_eigenvalues {
            assert_eq!(row.len(), 3);
            assert!(row.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
