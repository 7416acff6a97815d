//! Subcommand drivers. Each resolves its parameters, computes a table and
//! optional plot, and leaves writing to [`execute`].

mod bounds;
mod simulate;
mod snr_curve;
mod truncate_table;
mod verify;

use std::io::Write;
use std::path::PathBuf;

use crate::cli::Command;
use crate::error::{CliError, Result};
use crate::output::{sibling, write_manifest, Table};
use crate::parallel::Pool;
use crate::params::Params;
use crate::svg::Plot;

pub struct Output {
    pub table: Table,
    /// Additional tables written as `<out><suffix>`.
    pub extra: Vec<(&'static str, Table)>,
    pub plot: Option<Plot>,
    pub report: String,
    /// Set when the command ran but its checks failed.
    pub failure: Option<CliError>,
}

impl Output {
    fn table(table: Table) -> Self {
        Output { table, extra: Vec::new(), plot: None, report: String::new(), failure: None }
    }
}

/// Merges flags over the config file and fills the command's defaults.
/// The result is what the manifest records and the hash covers.
pub fn resolve(command: &Command) -> Result<Params> {
    let run = command.run_args();
    let file = match &run.config {
        Some(p) => Params::from_file(p)?,
        None => Params::default(),
    };
    let merged = run.params.clone().or(file);
    match command {
        Command::Bounds(_) => bounds::resolve(merged),
        Command::SnrCurve(_) => snr_curve::resolve(merged),
        Command::Verify(_) => verify::resolve(merged),
        Command::Simulate(_) => simulate::resolve(merged),
        Command::TruncateTable(_) => truncate_table::resolve(merged),
    }
}

pub fn compute(command: &Command, params: &Params, pool: &Pool) -> Result<Output> {
    match command {
        Command::Bounds(_) => bounds::run(params, pool),
        Command::SnrCurve(_) => snr_curve::run(params, pool),
        Command::Verify(_) => verify::run(params, pool),
        Command::Simulate(_) => simulate::run(params, pool),
        Command::TruncateTable(_) => truncate_table::run(params),
    }
}

pub fn execute(command: &Command) -> Result<()> {
    let run = command.run_args();
    let params = resolve(command)?;
    if run.svg && run.out.is_none() {
        return Err(CliError::Usage("--svg needs --out".into()));
    }
    let pool = Pool::from_env();
    let output = compute(command, &params, &pool)?;
    if run.svg && output.plot.is_none() {
        return Err(CliError::Usage(format!("`{}` has no plot", command.name())));
    }
    let mut written: Vec<PathBuf> = Vec::new();
    match &run.out {
        Some(out) => {
            output.table.emit(Some(out))?;
            written.push(out.clone());
            for (suffix, t) in &output.extra {
                let p = sibling(out, suffix);
                t.emit(Some(&p))?;
                written.push(p);
            }
            if let (true, Some(plot)) = (run.svg, &output.plot) {
                let p = sibling(out, ".svg");
                std::fs::write(&p, plot.render())?;
                written.push(p);
            }
            write_manifest(out, command.name(), &params, &written)?;
            if !output.report.is_empty() {
                std::io::stdout().lock().write_all(output.report.as_bytes())?;
            }
        }
        None => {
            output.table.emit(None)?;
            if !output.report.is_empty() {
                std::io::stderr().lock().write_all(output.report.as_bytes())?;
            }
        }
    }
    match output.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub(crate) fn grid(spec: &Option<String>) -> Result<Vec<f64>> {
    crate::grid::parse_grid(spec.as_deref().unwrap_or_default())
}
