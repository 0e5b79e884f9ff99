use std::process::ExitCode;

fn main() -> ExitCode {
    let result = plucking_cli::run(std::env::args_os());
    print!("{}", result.stdout);
    eprint!("{}", result.stderr);
    ExitCode::from(result.code as u8)
}
