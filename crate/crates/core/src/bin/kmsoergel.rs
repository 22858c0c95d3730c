use std::process::ExitCode;

fn main() -> ExitCode {
    let (text, code) = kmsoergel::cli::run_args(std::env::args_os());
    print!("{text}");
    ExitCode::from(code as u8)
}
