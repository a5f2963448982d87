//! `minlen`: spectra of the inverse-square potential with a minimal length.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid configuration,
//! 3 numerical failure.

mod commands;
mod config;
mod report;

use clap::Parser;
use config::{Cli, Command, CommandKind, Format, RunConfig};
use std::process::ExitCode;

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("MINLEN_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| format!("MINLEN_THREADS must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err("MINLEN_THREADS must be a positive integer".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn build(cli: &Cli) -> Result<RunConfig, String> {
    match &cli.command {
        Command::Spectrum(a) => {
            let mut cfg = RunConfig::from_common(CommandKind::Spectrum, &a.common)?;
            cfg.method = a.method;
            Ok(cfg)
        }
        Command::Scan(a) => RunConfig::from_common(CommandKind::Scan, a),
        Command::Ordinary(a) => {
            let mut cfg = RunConfig::from_common(CommandKind::Ordinary, &a.common)?;
            cfg.mode = Some(a.mode);
            cfg.e1 = Some(a.e1);
            cfg.lambda_cut = Some(a.lambda_cut);
            cfg.validate()?;
            Ok(cfg)
        }
        Command::Oracle(a) => RunConfig::from_common(CommandKind::Oracle, a),
        Command::Validate(a) => RunConfig::from_common(CommandKind::Validate, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let cfg = match build(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cfg.command {
        CommandKind::Spectrum => commands::spectrum(&cfg),
        CommandKind::Scan => commands::scan(&cfg),
        CommandKind::Ordinary => commands::ordinary(&cfg),
        CommandKind::Oracle => commands::oracle(&cfg),
        CommandKind::Validate => commands::validate(&cfg),
    };
    let report = match result {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.exit_code() as u8);
        }
    };
    let text = match cfg.format {
        Format::Csv => report.to_csv(&cfg),
        Format::Json => report.to_json(&cfg),
    };
    let written = match &cfg.output_path {
        Some(path) => std::fs::write(path, &text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(3);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.any_failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
