use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ladder_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout
                .write_all(&output.stdout)
                .and_then(|_| stdout.flush())
            {
                eprintln!("ladderlab: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(output.exit_code as u8)
        }
        Err(e) => {
            eprintln!("ladderlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
