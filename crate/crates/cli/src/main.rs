use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use linext_cli::{run, Cli, Output};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(report)) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.to_text()
            };
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("linext: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
