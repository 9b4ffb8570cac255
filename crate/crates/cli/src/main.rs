use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fieldunits_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    let mut stdout = std::io::stdout().lock();
    if !out.stdout.is_empty() {
        let _ = writeln!(stdout, "{}", out.stdout);
    }
    if let Some(msg) = out.stderr {
        eprintln!("{msg}");
    }
    ExitCode::from(out.code)
}
