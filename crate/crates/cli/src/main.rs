use std::io::Write;
use std::process::ExitCode;

use bsdkit_cli::{apply_budget_from_env, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match apply_budget_from_env().and_then(|()| run(&cli)) {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialise");
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
