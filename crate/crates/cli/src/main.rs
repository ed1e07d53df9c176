use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env = odrk_cli::Env::from_process();
    let code = odrk_cli::dispatch(
        std::env::args_os(),
        &env,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
