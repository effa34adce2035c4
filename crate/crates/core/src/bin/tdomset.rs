use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = tdomset::cli::main_with_args(std::env::args_os());
    let text = out.output.as_bytes();
    let res = if out.exit_code == 0 {
        std::io::stdout().write_all(text)
    } else {
        std::io::stderr().write_all(text)
    };
    if res.is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(out.exit_code as u8)
}
