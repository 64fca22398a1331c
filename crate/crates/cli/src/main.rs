use std::process::ExitCode;

use clap::Parser;
use minctrl_cli::{run, Cli, Command, ExitStatus};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let writes_file = match &cli.command {
        Command::Solve(a) => a.out.is_some(),
        Command::Oracle(a) => a.out.is_some(),
        Command::Experiment(a) => a.out.is_some(),
        Command::Verify(a) => a.out.is_some(),
        Command::Reduce(_) => false,
    };
    let status = match run(&cli) {
        Ok(outcome) => {
            if !writes_file {
                match serde_json::to_string_pretty(&outcome.payload) {
                    Ok(text) => println!("{text}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(ExitStatus::Internal.code() as u8);
                    }
                }
            }
            outcome.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_status()
        }
    };
    ExitCode::from(status.code() as u8)
}
