use std::process::ExitCode;

fn main() -> ExitCode {
    let status = psqm::main_with_args(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(status.code())
}
