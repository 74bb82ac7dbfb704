use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(vworkbench::cli::run() as u8)
}
