use std::process::ExitCode;

fn main() -> ExitCode {
    rindler_teleport::cli::run(std::env::args_os())
}
