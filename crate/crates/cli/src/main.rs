use std::process::ExitCode;

fn main() -> ExitCode {
    tlbm_cli::main_with(std::env::args_os())
}
