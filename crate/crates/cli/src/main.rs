use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use varseq::{execute, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("varseq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
