use std::process::ExitCode;

fn main() -> ExitCode {
    let (outcome, format) = pva_cli::run_args(std::env::args_os());
    let text = outcome.render(format);
    if outcome.code == pva_cli::commands::EXIT_USAGE && format == pva_cli::Format::Text {
        eprint!("{text}");
    } else {
        println!("{}", text.trim_end());
    }
    ExitCode::from(outcome.code as u8)
}
