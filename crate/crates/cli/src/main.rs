use std::process::ExitCode;

use clap::Parser;

use polybern_cli::{run, Cli, UsageError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            if err.downcast_ref::<UsageError>().is_some() {
                eprintln!("error: {err}");
                eprintln!("\nFor more information, try '--help'.");
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(2)
        }
    }
}
