use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(motionforge_cli::execute(std::env::args_os()) as u8)
}
