use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(pcube_cli::run_main())
}
