use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mbcoh_cli::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    let status = mbcoh_cli::run(cli, &mut stdout, &mut stderr);
    let _ = stdout.flush();
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
