use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use el_unification_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("elunif: {}", e);
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
