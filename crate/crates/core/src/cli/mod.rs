//! Command-line runner: `liminf run <config>` and `liminf plot <report>`.

pub mod config;
pub mod plot;
pub mod report;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{ConfigError, ExperimentConfig, Format, Task};
pub use plot::{render, PlotError, PlotKind};
pub use report::Report;
pub use run::{run, write_outputs, RunError, RunOutcome};

/// Success.
pub const EXIT_OK: i32 = 0;
/// A budget ran out or a task failed at runtime; partial output is written.
pub const EXIT_RUNTIME: i32 = 1;
/// The configuration or command line is invalid.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "liminf", version, about = "Certified estimators for exponentially shrinking liminf sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        /// Restrict to these tasks (repeatable); replaces the config list.
        #[arg(long = "task")]
        tasks: Vec<Task>,
        #[arg(long)]
        depth: Option<usize>,
        /// Working precision in bits.
        #[arg(long, env = "LIMINF_PREC")]
        prec: Option<u32>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Omit timing so identical configs give identical bytes.
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render an SVG plot from a JSON report.
    Plot {
        report: PathBuf,
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

/// Loads a config and applies command-line overrides.
#[allow(clippy::too_many_arguments)]
pub fn load_config(
    path: &std::path::Path,
    tasks: Vec<Task>,
    depth: Option<usize>,
    prec: Option<u32>,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    seed: Option<u64>,
) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::from_path(path)?;
    if !tasks.is_empty() {
        let mut tasks = tasks;
        tasks.sort();
        tasks.dedup();
        cfg.tasks = tasks;
    }
    if let Some(d) = depth {
        cfg.depth = d;
    }
    if let Some(p) = prec {
        cfg.precision = p;
    }
    if let Some(o) = out {
        cfg.out_dir = o;
    }
    if let Some(f) = format {
        cfg.formats = vec![f.into()];
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.check_tasks()?;
    Ok(cfg)
}

/// Executes a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Run {
            config,
            tasks,
            depth,
            prec,
            out,
            format,
            canonical,
            seed,
        } => {
            let cfg = match load_config(&config, tasks, depth, prec, out, format, seed) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return EXIT_CONFIG;
                }
            };
            let outcome = match run(&cfg, canonical) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_RUNTIME;
                }
            };
            for w in &outcome.report.warnings {
                eprintln!("warning: {w}");
            }
            match write_outputs(&outcome.report, &cfg) {
                Ok(paths) => {
                    for p in paths {
                        println!("{}", p.display());
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_RUNTIME;
                }
            }
            if outcome.budget_exhausted {
                EXIT_RUNTIME
            } else {
                EXIT_OK
            }
        }
        Command::Plot { report, kind, out } => {
            let text = match std::fs::read_to_string(&report) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", report.display());
                    return EXIT_CONFIG;
                }
            };
            let parsed = match Report::from_json(&text) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {}: {e}", report.display());
                    return EXIT_CONFIG;
                }
            };
            let svg = match render(&parsed, kind) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_RUNTIME;
                }
            };
            if let Err(e) = std::fs::write(&out, svg) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return EXIT_RUNTIME;
            }
            println!("{}", out.display());
            EXIT_OK
        }
    }
}
