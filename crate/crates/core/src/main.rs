use std::process::ExitCode;

fn main() -> ExitCode {
    evokit::cli::main_from_args(std::env::args_os())
}
