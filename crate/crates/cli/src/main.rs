//! `fano5`: exact cohomology and classification on the quintic del Pezzo threefold.

mod cache;
mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "fano5", version, about = "Exact cohomology calculator for bundles on V5")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Neither read nor write the on-disk Bott cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Rank2,
    Rank3,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cohomology of EXPR, or its table over a window of twists.
    Coh {
        expr: String,
        /// Twists `A..B`, inclusive.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Euler characteristic by Riemann-Roch.
    Chi {
        expr: String,
    },
    /// Hilbert polynomial chi(E(t)).
    Hilb {
        expr: String,
    },
    /// Dimensions of Ext^i(E, F).
    Hom {
        e: String,
        f: String,
    },
    /// Gram matrices of the standard and mutated exceptional collections.
    Gram,
    /// Class of R_F(E) or L_E(F).
    Mutate {
        side: Side,
        e: String,
        f: String,
    },
    HelixCheck,
    DiagonalCheck,
    /// Beilinson complexes of EXPR, or of a table read from FILE.
    Beilinson {
        #[arg(required_unless_present = "table", conflicts_with = "table")]
        expr: Option<String>,
        #[arg(long)]
        table: Option<std::path::PathBuf>,
    },
    /// Splitting criterion over a window.
    Split {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Vanishing of intermediate cohomology over a window.
    Acm {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Presentations allowed for a normalized aCM semistable bundle.
    Classify {
        #[arg(long)]
        rank: i64,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
    },
    /// Test EXPR against a characterization of U, Q* and O.
    Characterize {
        expr: String,
        #[arg(long, default_value = "UorO")]
        mode: String,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Split off line bundles from the section-jump pattern.
    Horrocks {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    Report {
        which: Which,
    },
}

// a closed pipe (e.g. `| head`) is not an error worth reporting
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut warnings = Vec::new();
    let engine = fano5_core::engine::Engine::shared();
    let cache_path = if cli.no_cache { None } else { cache::default_path() };
    if let Some(p) = &cache_path {
        cache::preload(engine, p, &mut warnings);
    }
    let (name, input) = commands::describe(&cli.command);
    let outcome = commands::run(&cli.command);
    if let Some(p) = &cache_path {
        cache::save(engine, p, &mut warnings);
    }
    match outcome {
        Ok(out) => {
            warnings.extend(out.warnings);
            match cli.format {
                Format::Json => {
                    let doc = json!({"command": name, "input": input, "result": out.result, "warnings": warnings});
                    emit(&serde_json::to_string_pretty(&doc).expect("serializable"));
                }
                Format::Text => {
                    emit(out.text.trim_end());
                    for w in &warnings {
                        eprintln!("warning: {w}");
                    }
                }
            }
            if out.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Json => {
                    let err = json!({"code": e.code(), "message": e.to_string()});
                    let doc = json!({"command": name, "input": input, "result": null, "error": err, "warnings": warnings});
                    emit(&serde_json::to_string_pretty(&doc).expect("serializable"));
                }
                Format::Text => {
                    for w in &warnings {
                        eprintln!("warning: {w}");
                    }
                    eprintln!("error [{}]: {e}", e.code());
                }
            }
            ExitCode::from(1)
        }
    }
}
