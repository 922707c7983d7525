use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use surroots_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    eprint!("{}", outcome.stderr);
    match &cli.out {
        Some(path) if !outcome.stdout.is_empty() => {
            if let Err(e) = std::fs::write(path, &outcome.stdout) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        _ => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::from(outcome.code as u8)
}
