use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use hcfix_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match hcfix_cli::run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = out
                .write_all(report.stdout.as_bytes())
                .and_then(|()| out.flush())
            {
                eprintln!("hcfix: {e}");
                return ExitCode::from(1);
            }
            if let Some(msg) = &report.mismatch {
                eprintln!("hcfix: {msg}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("hcfix: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
