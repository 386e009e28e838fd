//! Command-line front end: single evaluations, parameter sweeps and the
//! figure datasets, written as CSV or JSON.

pub mod axis;
pub mod cli;
pub mod commands;
pub mod error;
pub mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use mbcoh_core::exec::{self, Execution};

use crate::cli::{Cli, Command};
use crate::commands::Outcome;
pub use crate::error::{CliError, CliResult};
use crate::table::{Format, Table};

fn compute(command: &Command, exec: Execution) -> CliResult<Outcome> {
    match command {
        Command::Coherence(a) => commands::coherence(a),
        Command::Thermal(a) => commands::thermal(a, exec),
        Command::Photon(a) => commands::photon(a, exec),
        Command::Asymptote(a) => commands::asymptote(a),
        Command::FigThermal(a) => commands::fig_thermal(a, exec),
        Command::FigPhoton(a) => commands::fig_photon(a, exec),
        Command::OracleCheck(a) => commands::oracle_check(a, exec),
    }
}

fn write_file(table: &Table, format: Format, path: &Path) -> CliResult<()> {
    let file = File::create(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    table.write(format, &mut w)?;
    w.flush()?;
    Ok(())
}

fn emit_table(
    table: &Table,
    format: Format,
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    match output {
        Some(path) => write_file(table, format, path),
        None => table.write(format, stdout),
    }
}

/// Runs a parsed command line, writing results to `stdout` or files and
/// diagnostics to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let exec = if cli.jobs == 1 {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let command = cli.command;
    let outcome = exec::with_jobs(cli.jobs, || compute(&command, exec))?;
    match outcome {
        Outcome::Table(t) => emit_table(&t, cli.format, cli.output.as_deref(), stdout),
        Outcome::Figures(figs) => {
            let dir = cli.output.unwrap_or_else(|| PathBuf::from("."));
            commands::ensure_dir(&dir)?;
            for (name, table) in &figs {
                let path = dir.join(format!("{name}.{}", cli.format.extension()));
                write_file(table, cli.format, &path)?;
                writeln!(
                    stderr,
                    "wrote {} ({} rows)",
                    path.display(),
                    table.rows.len()
                )?;
            }
            Ok(())
        }
        Outcome::Check {
            table,
            warning,
            failure,
        } => {
            if let Some(w) = warning {
                writeln!(stderr, "warning: {w}")?;
            }
            emit_table(&table, cli.format, cli.output.as_deref(), stdout)?;
            match failure {
                Some(msg) => Err(CliError::CheckFailed(msg)),
                None => Ok(()),
            }
        }
    }
}
