use std::process::ExitCode;

use microepi_cli::CliError;

fn main() -> ExitCode {
    match microepi_cli::run(std::env::args_os()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(err @ CliError::Clap(_)) => {
            let code = err.exit_code();
            if let CliError::Clap(e) = err {
                let _ = e.print();
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
