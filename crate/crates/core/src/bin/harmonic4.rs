use std::process::ExitCode;

fn main() -> ExitCode {
    harmonic4::cli::main_with(std::env::args_os())
}
