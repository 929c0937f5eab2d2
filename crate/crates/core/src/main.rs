use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    // failures are reported by `run` as diagnostics and exit statuses
    std::panic::set_hook(Box::new(|_| {}));
    let code = vagrowth::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
