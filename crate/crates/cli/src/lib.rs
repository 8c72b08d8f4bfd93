//! Command-line frontend: dataset and config loading, the `solve`, `verify`,
//! `geometry` and `laws` subcommands, and their exit codes.
//!
//! | exit | meaning                         |
//! |------|---------------------------------|
//! | 0    | success                         |
//! | 1    | a verification check failed     |
//! | 2    | malformed input                 |
//! | 3    | invalid configuration           |
//! | 4    | solver reported infeasibility   |

pub mod commands;
pub mod config;
pub mod data;
pub mod error;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use granapprox_core::connectives::TNormKind;

use crate::commands::Overrides;
use crate::config::ToleranceConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "granapprox",
    version,
    about = "Multi-class granular approximation of labeled data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the approximation problem; writes result.csv, relabels.csv and summary.json.
    Solve {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Relabel threshold.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        alpha_level: Option<f64>,
        /// Record the wall-clock time in summary.json (breaks byte-identical reruns).
        #[arg(long)]
        with_runtime: bool,
    },
    /// Re-check feasibility and tightness of a result file.
    Verify {
        #[arg(long)]
        result: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Export the level sets of the granules as JSON lines.
    Geometry {
        #[arg(long)]
        result: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        alpha_level: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also check the records against sampled granule memberships.
        #[arg(long)]
        check: bool,
    },
    /// Evaluate the connective laws on a grid.
    Laws {
        /// T-norm kind; every kind when omitted.
        #[arg(long)]
        kind: Option<TNormKind>,
        /// Isomorphism names; identity and square when omitted.
        #[arg(long = "isomorphism")]
        isomorphisms: Vec<String>,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Optional JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> CliResult<i32> {
    match command {
        Command::Solve {
            dataset,
            config,
            out,
            seed,
            threshold,
            alpha_level,
            with_runtime,
        } => {
            let over = Overrides {
                seed,
                threshold,
                alpha_level,
            };
            let s = commands::solve(&dataset, &config, &out, &over, with_runtime)?;
            println!(
                "solved {} instances: objective {}, max violation {:e}, {} relabel(s), {} ambiguous",
                s["instances"], s["objective"], s["max_violation"].as_f64().unwrap_or(0.0),
                s["relabels"], s["ambiguous"]
            );
            Ok(0)
        }
        Command::Verify {
            result,
            dataset,
            config,
        } => {
            let report = commands::verify(&result, &dataset, &config)?;
            for line in &report.lines {
                println!("{line}");
            }
            if report.passed {
                Ok(0)
            } else {
                Err(CliError::VerifyFailed("verification failed".into()))
            }
        }
        Command::Geometry {
            result,
            dataset,
            config,
            out,
            alpha_level,
            seed,
            check,
        } => {
            let over = Overrides {
                seed,
                threshold: None,
                alpha_level,
            };
            let g = commands::geometry(&result, &dataset, &config, &out, &over, check)?;
            println!("{} records, {} drawable", g.records, g.drawable);
            match g.check_failures {
                Some(f) if !f.is_empty() => Err(CliError::VerifyFailed(format!(
                    "sampled membership check failed for {}",
                    f.join(", ")
                ))),
                Some(_) => {
                    println!("sampled membership check PASS");
                    Ok(0)
                }
                None => Ok(0),
            }
        }
        Command::Laws {
            kind,
            isomorphisms,
            step,
            out,
        } => {
            let kinds = kind.map_or(TNormKind::ALL.to_vec(), |k| vec![k]);
            let isos = if isomorphisms.is_empty() {
                vec!["identity".to_owned(), "square".to_owned()]
            } else {
                isomorphisms
            };
            let tol = ToleranceConfig::default().resolve()?;
            let lines = commands::laws(&kinds, &isos, step, &tol)?;
            let mut all = true;
            for l in &lines {
                let verdict = match l.max_violation {
                    None => "n/a",
                    Some(_) if l.passed => "PASS",
                    Some(_) => "FAIL",
                };
                all &= l.passed;
                println!(
                    "{:<18} {:<9} {:<28} {:>12} {verdict}",
                    l.kind.name(),
                    l.isomorphism,
                    l.law,
                    l.max_violation.map_or("-".into(), |v| format!("{v:.3e}"))
                );
            }
            if let Some(path) = out {
                let json: Vec<_> = lines
                    .iter()
                    .map(|l| {
                        serde_json::json!({
                            "kind": l.kind.name(),
                            "isomorphism": l.isomorphism,
                            "law": l.law,
                            "max_violation": l.max_violation,
                            "passed": l.passed,
                        })
                    })
                    .collect();
                let text = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
                data::write_text(&path, &text)?;
            }
            if all {
                Ok(0)
            } else {
                Err(CliError::VerifyFailed("some laws fail on the grid".into()))
            }
        }
    }
}
