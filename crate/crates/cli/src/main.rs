mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Family, Format};
use crate::commands::Failure;

fn main() -> ExitCode {
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
    let format = cli.format.unwrap_or(match cli.command {
        Family::Verify(_) => Format::Text,
        _ => Format::Json,
    });
    let (report, code) = match commands::run(&cli) {
        Ok(report) => (report, 0),
        Err(Failure::Verification(report)) => (*report, 2),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = output::emit(report, format, cli.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if code == 2 {
        eprintln!("verification failed");
    }
    ExitCode::from(code)
}
