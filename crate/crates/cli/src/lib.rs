//! Command-line front end for the `oscfield` library.

pub mod args;
pub mod config;
pub mod error;
pub mod range;
pub mod sweep;
pub mod table;
pub mod validate;

use std::io::Write;
use std::path::Path;

use args::{Cli, Command, Format};
use error::{CliError, CliResult};
use sweep::{Mode, SweepSpec};

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            })
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    let shared = match &cli.shared.config {
        Some(path) => config::merge(&cli.shared, config::load(path)?),
        None => cli.shared.clone(),
    };
    let mode = match &cli.command {
        Command::Early => Mode::EarlyGrid,
        Command::Late => Mode::LateL,
        Command::Twin => Mode::TwinScaling,
        Command::Validate(v) => {
            let report = validate::run_validate(v.corrupt_gamma0.unwrap_or(0.0));
            // the human-readable report always goes to stdout; --out adds a JSON copy
            let text = match shared.format {
                Some(Format::Json) if shared.out.is_none() => report.to_json(),
                _ => report.to_text(),
            };
            emit(&text, None)?;
            if let Some(path) = &shared.out {
                emit(&report.to_json(), Some(path))?;
            }
            return match report.failures() {
                0 => Ok(()),
                n => Err(CliError::Validation(n)),
            };
        }
    };
    let spec = SweepSpec::resolve(mode, &shared)?;
    let table = spec.run()?;
    let text = match spec.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    emit(&text, spec.out.as_deref())
}
