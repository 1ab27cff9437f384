use std::io::Write;

fn main() {
    let (text, code) = gl2ext_cli::main_with_args(std::env::args());
    let mut out: Box<dyn Write> = if code == 2 { Box::new(std::io::stderr()) } else { Box::new(std::io::stdout()) };
    let _ = out.write_all(text.as_bytes());
    std::process::exit(code);
}
