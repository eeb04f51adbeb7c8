use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use camlab_cli::{exit_code, run, Cli, Command};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bundles = match run(&cli) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("camlab: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    let out = match (&cli.out, &cli.command) {
        (Some(dir), _) => Some(dir.clone()),
        (None, Command::ReportAll) => Some(PathBuf::from("camlab-report")),
        (None, _) => None,
    };
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    match out {
        None => {
            for (_, b) in &bundles {
                let _ = stdout.write_all(b.to_json().as_bytes());
            }
        }
        Some(dir) => {
            let nested = bundles.len() > 1;
            for (name, b) in &bundles {
                let target = if nested { dir.join(name) } else { dir.clone() };
                match b.write(&target) {
                    Ok(paths) => {
                        for p in paths {
                            let _ = writeln!(stdout, "{}", p.display());
                        }
                    }
                    Err(e) => {
                        eprintln!("camlab: {e}");
                        return ExitCode::from(exit_code(&e) as u8);
                    }
                }
            }
        }
    }
    ExitCode::SUCCESS
}
