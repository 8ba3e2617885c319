use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, text) = solgeom_cli::main_with_args(std::env::args_os());
    let mut out = std::io::stdout().lock();
    if out
        .write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        return ExitCode::from(solgeom_cli::EXIT_IO as u8);
    }
    ExitCode::from(code as u8)
}
