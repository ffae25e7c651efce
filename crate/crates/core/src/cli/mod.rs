//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 configuration error,
//! 3 quadrature convergence or divergent integral, 4 a checked criterion failed.

mod commands;
pub mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::dispersion::StressChoice;
use crate::error::Error;

pub use config::SystemConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICS: u8 = 3;
pub const EXIT_CRITERION: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Numerics(#[from] Error),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerics(Error::Convergence { .. } | Error::Divergent(_)) => EXIT_NUMERICS,
            CliError::Numerics(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "casimir-media",
    version,
    about = "Dispersion coefficients of small spheres in media"
)]
pub struct Cli {
    /// System configuration (TOML, SI units).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write the result table as CSV to this path.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Relative quadrature tolerance, overriding the config.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Monte Carlo seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChoiceArg {
    Abraham,
    Maxwell,
    Both,
}

impl ChoiceArg {
    pub fn choices(self) -> &'static [StressChoice] {
        match self {
            ChoiceArg::Abraham => &[StressChoice::Abraham],
            ChoiceArg::Maxwell => &[StressChoice::Maxwell],
            ChoiceArg::Both => &StressChoice::ALL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Duality,
    Correspondence,
    Microscopic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Hamaker,
    AxilrodTeller,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariable {
    Separation,
    Density,
    Radius,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-sphere coefficient C6 with potential and force.
    C6 {
        #[arg(long, value_enum, default_value_t = ChoiceArg::Both)]
        choice: ChoiceArg,
        /// Centre separation in m, overriding the config.
        #[arg(long)]
        separation: Option<f64>,
        /// Report the spectral density at this imaginary frequency (rad/s) instead.
        #[arg(long)]
        xi: Option<f64>,
    },
    /// Sphere–perfect-mirror coefficient C3.
    C3 {
        #[arg(long, value_enum, default_value_t = ChoiceArg::Both)]
        choice: ChoiceArg,
        /// Which configured sphere faces the mirror.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        sphere: u8,
        #[arg(long)]
        xi: Option<f64>,
    },
    /// Check one of the consistency criteria for both stress choices.
    Verify {
        #[arg(value_enum)]
        criterion: VerifyKind,
        /// Finite-difference step of the susceptibility expansion.
        #[arg(long, default_value_t = crate::oracles::expansion::DEFAULT_STEP)]
        step: f64,
    },
    /// Run a brute-force oracle against its analytic target.
    Oracle {
        #[arg(value_enum)]
        which: OracleKind,
        /// Centre separation in m.
        #[arg(long)]
        separation: Option<f64>,
        /// Lattice cells per radius for the Hamaker sum.
        #[arg(long, default_value_t = 20)]
        divisions: u32,
        /// Monte Carlo sample count, overriding the config.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Tabulate C6, U and F over a range of one parameter.
    Sweep {
        #[arg(long, value_enum)]
        variable: SweepVariable,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Space the points logarithmically.
        #[arg(long)]
        log: bool,
    },
}

/// Rectangular result table with unit-annotated headers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Fixed-width text rendering.
    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Formats a number so that parsing it back gives the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub text: String,
    pub warnings: Vec<String>,
    pub table: Option<Table>,
    /// False when a checked criterion failed.
    pub passed: bool,
    /// Print the CSV itself on stdout when no output path is given.
    pub csv_to_stdout: bool,
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let load = || -> Result<SystemConfig, CliError> {
        let path = cli
            .config
            .as_ref()
            .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
        let mut cfg = SystemConfig::load(path)?;
        if let Some(seed) = cli.seed {
            cfg.mc = cfg.mc.with_seed(seed);
        }
        Ok(cfg)
    };
    let tol = cli.tolerance;
    match &cli.command {
        Command::C6 {
            choice,
            separation,
            xi,
        } => commands::cmd_c6(&load()?, choice.choices(), *separation, *xi, tol),
        Command::C3 { choice, sphere, xi } => {
            commands::cmd_c3(&load()?, choice.choices(), *sphere, *xi, tol)
        }
        Command::Verify { criterion, step } => {
            let cfg = load()?;
            match criterion {
                VerifyKind::Duality => commands::verify_duality(&cfg, tol),
                VerifyKind::Correspondence => commands::verify_correspondence(&cfg, tol),
                VerifyKind::Microscopic => commands::verify_microscopic(&cfg, *step),
            }
        }
        Command::Oracle {
            which,
            separation,
            divisions,
            samples,
        } => {
            let cfg = match cli.config {
                Some(_) => Some(load()?),
                None => None,
            };
            match which {
                OracleKind::Hamaker => {
                    commands::oracle_hamaker(cfg.as_ref(), *separation, *divisions)
                }
                OracleKind::AxilrodTeller => {
                    commands::oracle_axilrod_teller(cfg.as_ref(), *separation, *samples, cli.seed)
                }
                OracleKind::Quadrature => commands::oracle_quadrature(cfg.as_ref(), tol),
            }
        }
        Command::Sweep {
            variable,
            from,
            to,
            steps,
            log,
        } => commands::sweep(&load()?, *variable, *from, *to, *steps, *log, tol),
    }
}

/// Print a report, write any CSV, and return the process exit code.
pub fn emit(cli: &Cli, result: Result<Report, CliError>) -> u8 {
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut stdout = std::io::stdout().lock();
    let written = match (&cli.output, &report.table) {
        (Some(path), Some(table)) => std::fs::File::create(path)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))
            .and_then(|f| table.write_csv(std::io::BufWriter::new(f))),
        (None, Some(table)) if report.csv_to_stdout => table.write_csv(&mut stdout),
        _ => Ok(()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    if !(report.csv_to_stdout && cli.output.is_none()) {
        let _ = stdout.write_all(report.text.as_bytes());
    }
    if report.passed {
        EXIT_OK
    } else {
        EXIT_CRITERION
    }
}
