use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use crnkit::{exit, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INPUT } else { exit::OK });
        }
    };
    let result = run(&cli).and_then(|out| {
        if let Some(path) = &cli.global.out {
            std::fs::write(path, &out.primary).map_err(|source| CliError::Write { path: path.clone(), source })?;
        } else {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.primary.as_bytes());
        }
        eprint!("{}", out.diagnostics);
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
