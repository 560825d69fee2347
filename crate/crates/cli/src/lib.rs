//! Command-line front end for `gamma-core`.
//!
//! Structures are declared in JSON files (see [`loader`]), verbs are
//! dispatched by [`commands`], and every check produces a [`report::Record`].

pub mod commands;
pub mod emit;
pub mod loader;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use gamma_core::Budget;

use crate::commands::{execute, Cli};
use crate::loader::{LoadOptions, StructureSet};
use crate::report::Report;

/// Exit status for usage, parse and load errors.
pub const USAGE_ERROR: i32 = 2;

/// Parses `args`, runs the verb and writes the report; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match run_cli(&cli, stdout) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(stderr, "gammalib: {message}");
            USAGE_ERROR
        }
    }
}

fn run_cli(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, String> {
    let g = &cli.global;
    let budget = Budget::new(g.max_enum);
    let options = LoadOptions { lazy: g.lazy, budget };
    let mut set = match &g.file {
        Some(path) => loader::load(path, options).map_err(|e| e.to_string())?,
        None => StructureSet::default(),
    };
    let execution = execute(&cli.command, &mut set, budget, g.timing).map_err(|e| e.to_string())?;
    let report = Report::new(execution.records);
    let rendered = if g.json { report.to_json() } else { report.to_text() };
    match (&g.out, execution.emitted) {
        (Some(path), Some(emitted)) => {
            std::fs::write(path, emit::document(&emitted.name, emitted.decl))
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            stdout.write_all(rendered.as_bytes()).map_err(|e| e.to_string())?;
        }
        (Some(path), None) => {
            std::fs::write(path, &rendered).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
        (None, _) => stdout.write_all(rendered.as_bytes()).map_err(|e| e.to_string())?,
    }
    Ok(report.exit_code())
}
