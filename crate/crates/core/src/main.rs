use std::io::Write;

fn main() {
    let out = trop_core::cli::run_command(std::env::args_os());
    let text = out.report.render();
    if out.code == 1 {
        eprint!("{text}");
    } else {
        let _ = std::io::stdout().write_all(text.as_bytes());
    }
    std::process::exit(out.code);
}
