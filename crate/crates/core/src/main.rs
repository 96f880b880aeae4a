use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quartic_solids::quadpencil::NumericOptions;
use quartic_solids::vcli::{
    emit_report, parse_fixture, parse_override, run_verification, Format, Options, VcliError, EXIT_ERROR,
};

/// Verify fixture files of exact claims about quartic surfaces.
#[derive(Parser)]
#[command(name = "qsverify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a fixture and report the verdicts.
    Verify {
        file: PathBuf,
        /// Write the report to this file instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Cross-check exact node and base-point verdicts numerically.
        #[arg(long)]
        numeric_oracle: bool,
        /// Override a declared parameter, e.g. `--param t=-1`.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[arg(long, default_value_t = 1e-9)]
        residual_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        dedup_tol: f64,
        /// Largest group the closure may enumerate.
        #[arg(long, default_value_t = 10_000)]
        closure_cap: usize,
    },
}

fn error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("qsverify: {}", e);
    ExitCode::from(EXIT_ERROR as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Verify { file, report, format, numeric_oracle, params, residual_tol, dedup_tol, closure_cap } =
        cli.command;
    if !(residual_tol > 0.0 && dedup_tol > 0.0) {
        return error(VcliError::Option("tolerances must be positive".into()));
    }
    let mut overrides = BTreeMap::new();
    for p in &params {
        match parse_override(p) {
            Ok((k, v)) => {
                overrides.insert(k, v);
            }
            Err(e) => return error(e),
        }
    }
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => return error(format!("{}: {}", file.display(), e)),
    };
    let fixture = match parse_fixture(&text) {
        Ok(f) => f,
        Err(e) => return error(format!("{}: {}", file.display(), e)),
    };
    let opts = Options {
        numeric_oracle,
        param_overrides: overrides,
        numeric: NumericOptions { residual_tol, dedup_tol },
        closure_cap,
    };
    if let Err(e) = fixture.check_overrides(&opts) {
        return error(e);
    }
    let r = run_verification(&fixture, &opts);
    let out = emit_report(&r, format);
    match report {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, out) {
                return error(format!("{}: {}", path.display(), e));
            }
        }
        None => print!("{}", out),
    }
    ExitCode::from(r.exit_status() as u8)
}
