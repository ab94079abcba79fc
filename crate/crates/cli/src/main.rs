use std::io::Write;
use std::process::ExitCode;

use gquot_cli::{run, CliError};

fn main() -> ExitCode {
    match run(std::env::args_os()) {
        Ok((report, out)) => {
            match out.json.as_deref() {
                Some("-") => emit(&(report.to_json() + "\n")),
                Some(path) => {
                    if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
                        eprintln!("gquot: cannot write {path}: {e}");
                        return ExitCode::from(1);
                    }
                    emit(&report.to_text());
                }
                None => emit(&report.to_text()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(CliError::Display(s)) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            match e {
                CliError::Usage(s) | CliError::Resource(s) | CliError::Failed(s) | CliError::Display(s) => eprintln!("gquot: {}", s.trim_end()),
            }
            ExitCode::from(code as u8)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}
