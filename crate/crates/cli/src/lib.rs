//! Command-line front end for the `fracmv` library.
//!
//! [`run`] owns argument parsing, dispatch and exit codes so the binary and
//! the tests drive exactly the same path.

// Negated comparisons are how NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod report;
mod selftest;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use fracmv::{ExprError, FracError};

pub use args::Format;
pub use report::{csv_number, Cell, Report};

use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_SELFTEST: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl From<FracError> for CliError {
    fn from(e: FracError) -> Self {
        match e {
            FracError::InvalidParameter(_)
            | FracError::Expr(ExprError::Syntax { .. } | ExprError::UnknownIdentifier { .. }) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        FracError::from(e).into()
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let (code, kind) = match e {
                CliError::Usage(_) => (EXIT_USAGE, "usage error"),
                CliError::Compute(_) => (EXIT_COMPUTE, "computation error"),
            };
            let _ = writeln!(err, "fracmv: {kind}: {e}");
            code
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (output, format) = match command {
        Command::Fracint(a) => (commands::fracint(a)?, a.common.output),
        Command::Fracderiv(a) => (commands::fracderiv(a)?, a.point.common.output),
        Command::Meanvalue(a) => (commands::meanvalue(a)?, a.point.common.output),
        Command::Polyxi(a) => (commands::polyxi(a)?, a.common.output),
        Command::Critpoints(a) => (commands::critpoints(a)?, a.common.output),
        Command::Ralpha(a) => (commands::ralpha(a)?, a.common.output),
        Command::Dilation(a) => (commands::dilation(a)?, a.common.output),
        Command::Convexity(a) => (commands::convexity(a)?, a.common.output),
        Command::Mono(a) => (commands::mono(a)?, a.common.output),
        Command::Periodic(a) => (commands::periodic(a)?, a.common.output),
        Command::Selftest(a) => {
            let (report, failing) = selftest::run(a)?;
            emit(&report, a.output, out)?;
            if failing.is_empty() {
                return Ok(EXIT_OK);
            }
            let _ = writeln!(err, "fracmv: selftest failed: {}", failing.join(", "));
            return Ok(EXIT_SELFTEST);
        }
    };
    for w in &output.warnings {
        let _ = writeln!(err, "fracmv: {w}");
    }
    emit(&output.report, format, out)?;
    Ok(EXIT_OK)
}

fn emit(report: &Report, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    report
        .write(format, out)
        .map_err(|e| CliError::Compute(format!("cannot write output: {e}")))
}
