//! Argument parsing and command dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use leibniz_moment::catalog::{self, CATALOG};
use leibniz_moment::extensions::{build_general_extension, build_solvable_extension};
use leibniz_moment::flow::{descend, perturb_in_orbit, FlowParams};
use leibniz_moment::moment::{CRITICAL_TOL, MAX_DENOMINATOR};
use leibniz_moment::Bracket;
use serde::Serialize;

use crate::algebra_file::AlgebraFile;
use crate::error::CliError;
use crate::extension_file::ExtensionFile;
use crate::names;
use crate::report::{Analysis, CheckReport, EntryReport, ExtensionReport, FlowReport, RowReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Moment map and critical points of complex Leibniz algebras.
///
/// An ALGEBRA argument is a path to a JSON algebra file, or `catalog:LABEL`
/// such as `catalog:S1`, `catalog:S5(1+i)` or `catalog:mu_he(4)`.
///
/// Exit status: 0 on success, 1 when a check or certification fails, 2 on bad input.
#[derive(Debug, Parser)]
#[command(name = "leibniz", version)]
pub struct Cli {
    /// Criticality tolerance on relative residuals.
    #[arg(long, global = true, default_value_t = CRITICAL_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest denominator accepted when reading off a critical type.
    #[arg(long, global = true, default_value_t = MAX_DENOMINATOR)]
    pub max_den: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the left and right Leibniz and Lie identities.
    Check { algebra: String },
    /// Moment matrix, value of F, criticality, type and structure.
    Analyze { algebra: String },
    /// Descend F inside the orbit and analyze the limit.
    Flow {
        algebra: String,
        /// Initial step of each line search, in units of 1/|M|.
        #[arg(long, default_value_t = 0.1)]
        step0: f64,
        #[arg(long, default_value_t = 50_000)]
        max_iter: usize,
        /// Seed of the starting perturbation.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Norm of a random gl(n) element applied to the start before descending.
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        /// Write the final bracket here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The built-in table of algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Assemble a critical point from a critical core and action maps.
    Extend {
        #[arg(value_enum)]
        kind: ExtensionKind,
        spec: PathBuf,
        /// Write the assembled bracket here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Names, parameters and products.
    List,
    Show {
        label: String,
    },
    /// Write an entry as an algebra file.
    Export {
        label: String,
        file: PathBuf,
    },
    /// Recompute every catalog row against its expected type and value.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtensionKind {
    Solvable,
    General,
}

/// Loads an algebra argument, returning its name and bracket.
pub fn load_algebra(arg: &str) -> Result<(Option<String>, Bracket), CliError> {
    if let Some(label) = arg.strip_prefix("catalog:") {
        let e = names::resolve(label)?;
        return Ok((Some(e.label()), e.bracket));
    }
    let file = AlgebraFile::load(Path::new(arg))?;
    let mu = file.to_bracket()?;
    Ok((file.name.clone(), mu))
}

fn render<T: Serialize + std::fmt::Display>(format: Format, value: &T) -> String {
    match format {
        Format::Text => value.to_string(),
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
    }
}

#[derive(Serialize)]
struct ListItem {
    name: &'static str,
    params: &'static [&'static str],
    takes_dim: bool,
    summary: &'static str,
}

fn list(format: Format) -> String {
    let items: Vec<ListItem> = CATALOG
        .iter()
        .map(|i| ListItem { name: i.name, params: i.params, takes_dim: i.takes_dim, summary: i.summary })
        .collect();
    match format {
        Format::Json => serde_json::to_string_pretty(&items).expect("serializable") + "\n",
        Format::Text => {
            let mut out = String::new();
            for i in &items {
                let args = if i.takes_dim {
                    "(n)".to_string()
                } else if i.params.is_empty() {
                    String::new()
                } else {
                    format!("({})", i.params.join(", "))
                };
                out += &format!("{:<14} {}\n", format!("{}{args}", i.name), i.summary);
            }
            out
        }
    }
}

/// Rows in catalog order, one thread per row.
pub fn verify_rows(tol: f64) -> Vec<RowReport> {
    let cases = catalog::verification_cases();
    thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || catalog::verify_entry(c, tol))).collect();
        handles.into_iter().map(|h| RowReport::from(&h.join().expect("verification thread panicked"))).collect()
    })
}

/// Runs a parsed command, writing the report to `out`; returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let io = |e: std::io::Error| CliError::Input(format!("write failed: {e}"));
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Input("--tol must be a positive number".into()));
    }
    if cli.max_den == 0 {
        return Err(CliError::Input("--max-den must be at least 1".into()));
    }
    let (text, status) = match &cli.command {
        Command::Check { algebra } => {
            let (name, mu) = load_algebra(algebra)?;
            (render(cli.format, &CheckReport::new(name, &mu)), 0)
        }
        Command::Analyze { algebra } => {
            let (name, mu) = load_algebra(algebra)?;
            (render(cli.format, &Analysis::new(name, &mu, cli.tol, cli.max_den)?), 0)
        }
        Command::Flow { algebra, step0, max_iter, seed, perturb, out: target } => {
            let (name, mu) = load_algebra(algebra)?;
            let start = perturb_in_orbit(&mu, *perturb, *seed)?;
            let params =
                FlowParams { step0: *step0, max_iter: *max_iter, tol: cli.tol, seed: *seed, ..FlowParams::default() };
            let trace = descend(&start, &params)?;
            let limit_name = name.map(|n| format!("{n} (flow limit)"));
            if let Some(path) = target {
                AlgebraFile::from_bracket(limit_name.clone(), &[], &trace.final_bracket).save(path)?;
            }
            let analysis = Analysis::new(limit_name, &trace.final_bracket, cli.tol, cli.max_den)?;
            let report = FlowReport::new(&trace, analysis, target.as_ref().map(|p| p.display().to_string()));
            (render(cli.format, &report), if trace.converged { 0 } else { 1 })
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => (list(cli.format), 0),
            CatalogAction::Show { label } => (render(cli.format, &EntryReport::new(&names::resolve(label)?)), 0),
            CatalogAction::Export { label, file } => {
                let e = names::resolve(label)?;
                AlgebraFile::from_bracket(Some(e.label()), &e.params, &e.bracket).save(file)?;
                (format!("wrote {} to {}\n", e.label(), file.display()), 0)
            }
            CatalogAction::Verify => {
                let rows = verify_rows(cli.tol);
                let status = if rows.iter().all(|r| r.passed) { 0 } else { 1 };
                let text = match cli.format {
                    Format::Text => crate::report::verification_table(&rows),
                    Format::Json => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
                };
                (text, status)
            }
        },
        Command::Extend { kind, spec, out: target } => {
            let spec = ExtensionFile::load(spec)?.to_spec(cli.tol)?;
            let (ext, label) = match kind {
                ExtensionKind::Solvable => (build_solvable_extension(&spec, cli.tol)?, "solvable"),
                ExtensionKind::General => (build_general_extension(&spec, cli.tol)?, "general"),
            };
            let report = ExtensionReport::new(label, &ext, target.as_ref().map(|p| p.display().to_string()));
            if let Some(path) = target {
                report.algebra.save(path)?;
            }
            (render(cli.format, &report), if ext.certified { 0 } else { 1 })
        }
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(status)
}
