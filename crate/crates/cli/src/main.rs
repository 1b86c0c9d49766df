use std::process::ExitCode;

fn main() -> ExitCode {
    axc_cli::run(std::env::args_os())
}
