//! Command-line arguments and the validated run configuration.

use clap::{Args, Parser, Subcommand, ValueEnum};
use minlen_core::deformed_model::Deformation;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "minlen", version, about = "Inverse-square potential with and without a minimal length")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state levels with a minimal length.
    Spectrum(SpectrumArgs),
    /// Quantization function sampled over the omega window.
    Scan(CommonArgs),
    /// Orthogonality or cutoff spectrum of ordinary quantum mechanics.
    Ordinary(OrdinaryArgs),
    /// Nystrom integral-equation levels compared with the direct solver.
    Oracle(CommonArgs),
    /// Limit checks, oracle, orthogonality, cutoff and critical-coupling checks.
    Validate(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0.75)]
    pub kappa: f64,
    /// β; defaults to 1.
    #[arg(long)]
    pub beta: Option<f64>,
    /// β'; defaults to 1, or to β with `--equal-betas`.
    #[arg(long = "beta-prime")]
    pub beta_prime: Option<f64>,
    /// Force β' = β and use the exact hypergeometric solver.
    #[arg(long = "equal-betas")]
    pub equal_betas: bool,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long = "omega-min", default_value_t = 1e-6)]
    pub omega_min: f64,
    #[arg(long = "omega-max", default_value_t = 0.499)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Root tolerance in ln ω.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Samples per decade for scans, or quadrature nodes for the oracle.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "no-timestamp")]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
}

#[derive(Debug, Clone, Args)]
pub struct OrdinaryArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = OrdinaryMode::Cutoff)]
    pub mode: OrdinaryMode,
    /// Reference energy of level 0 for the orthogonality spectrum.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub e1: f64,
    /// Ultraviolet cutoff Λ.
    #[arg(long = "lambda-cut", default_value_t = 1.0)]
    pub lambda_cut: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    General,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrdinaryMode {
    Orthogonality,
    Cutoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Spectrum,
    Scan,
    Ordinary,
    Oracle,
    Validate,
}

/// Everything a run depends on; serialized into every output header.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub kappa: f64,
    pub beta: f64,
    pub beta_prime: f64,
    /// Whether β and β' were given explicitly, which enables physical energies.
    pub betas_supplied: bool,
    pub equal_betas: bool,
    pub mass: Option<f64>,
    pub omega_window: (f64, f64),
    pub levels: usize,
    pub tol: f64,
    pub grid: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<OrdinaryMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_cut: Option<f64>,
    pub format: Format,
    pub output_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

impl RunConfig {
    pub fn from_common(command: CommandKind, a: &CommonArgs) -> Result<Self, String> {
        let beta = a.beta.unwrap_or(1.0);
        let beta_prime = if a.equal_betas { beta } else { a.beta_prime.unwrap_or(1.0) };
        if a.equal_betas && a.beta_prime.is_some_and(|b| b != beta) {
            return Err("--equal-betas conflicts with a different --beta-prime".into());
        }
        let default_grid = match command {
            CommandKind::Oracle | CommandKind::Validate => 400,
            _ => 40,
        };
        let generated_unix = if a.no_timestamp {
            None
        } else {
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).ok().map(|d| d.as_secs())
        };
        let cfg = Self {
            command,
            kappa: a.kappa,
            beta,
            beta_prime,
            betas_supplied: a.beta.is_some() && (a.beta_prime.is_some() || a.equal_betas),
            equal_betas: a.equal_betas,
            mass: a.mass,
            omega_window: (a.omega_min, a.omega_max),
            levels: a.levels,
            tol: a.tol,
            grid: a.grid.unwrap_or(default_grid),
            method: None,
            mode: None,
            e1: None,
            lambda_cut: None,
            format: a.format,
            output_path: a.out.as_ref().map(|p| p.display().to_string()),
            generated_unix,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let finite = [self.kappa, self.beta, self.beta_prime, self.omega_window.0, self.omega_window.1, self.tol];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err("all numeric parameters must be finite".into());
        }
        if !(self.kappa > 0.0) {
            return Err(format!("kappa must be positive, got {}", self.kappa));
        }
        if self.beta < 0.0 || self.beta_prime < 0.0 || self.beta + self.beta_prime <= 0.0 {
            return Err("need beta, beta' >= 0 with beta + beta' > 0".into());
        }
        let (lo, hi) = self.omega_window;
        if !(lo > 0.0 && lo < hi && hi < 0.5) {
            return Err(format!("omega window ({lo}, {hi}) must satisfy 0 < min < max < 1/2"));
        }
        if !(self.tol > 0.0) {
            return Err("tolerance must be positive".into());
        }
        if self.levels == 0 {
            return Err("--levels must be at least 1".into());
        }
        if self.grid < 2 {
            return Err("--grid must be at least 2".into());
        }
        if let Some(m) = self.mass {
            if !(m > 0.0 && m.is_finite()) {
                return Err("mass must be positive".into());
            }
        }
        if let Some(l) = self.lambda_cut {
            if !(l > 0.0 && l.is_finite()) {
                return Err("cutoff must be positive".into());
            }
        }
        if let Some(e) = self.e1 {
            if !(e < 0.0) {
                return Err("--e1 must be negative".into());
            }
        }
        Ok(())
    }

    pub fn deformation(&self) -> Result<Deformation, String> {
        Deformation::new(self.beta, self.beta_prime).map_err(|e| e.to_string())
    }

    /// β = β' to machine precision.
    pub fn betas_equal(&self) -> bool {
        (self.beta - self.beta_prime).abs() <= 1e-14 * (self.beta + self.beta_prime)
    }

    /// Physical energies are reported only with a mass and explicit β, β'.
    pub fn energy_scale(&self) -> Option<(f64, Deformation)> {
        match (self.mass, self.betas_supplied) {
            (Some(m), true) => self.deformation().ok().map(|d| (m, d)),
            _ => None,
        }
    }
}
