use std::process::ExitCode;

use clap::Parser;
use edgemarket::cli::{self, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli::run(cli) {
        Ok(code) => code,
        Err(err) => {
            let code = err.exit_code();
            if code != edgemarket::exit::SUCCESS {
                eprintln!("edgemarket: {err}");
            }
            code
        }
    };
    ExitCode::from(code as u8)
}
