use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(hardy_bep_cli::run(std::env::args_os()) as u8)
}
