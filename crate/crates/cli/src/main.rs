use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use oscfield_cli::args::Cli;

fn main() -> ExitCode {
    // per-point purity warnings are summarized by the sweeps themselves
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn,oscfield::state=error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match oscfield_cli::execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
