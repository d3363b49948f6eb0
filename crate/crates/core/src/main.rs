use std::io::Write;

fn main() {
    let (out, code) = quantum_affine::cli::run(std::env::args_os());
    let mut stream: Box<dyn Write> = if code == quantum_affine::cli::EXIT_INPUT {
        Box::new(std::io::stderr())
    } else {
        Box::new(std::io::stdout())
    };
    let _ = stream.write_all(out.as_bytes());
    std::process::exit(code);
}
