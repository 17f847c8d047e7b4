use clap::Parser;
use std::io::Write;

fn main() {
    if let Ok(threads) = std::env::var("WREATHCHECK_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => wreathcheck_core::par::configure_threads(n),
            _ => {
                eprintln!("error: WREATHCHECK_THREADS must be a positive integer");
                std::process::exit(1);
            }
        }
    }
    let cli = wreathcheck::Cli::parse();
    match wreathcheck::execute(&cli) {
        Ok((text, code)) => {
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        std::process::exit(1);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    let _ = stdout.write_all(text.as_bytes());
                }
            }
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
