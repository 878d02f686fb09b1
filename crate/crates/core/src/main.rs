use std::io::Write;

use clap::Parser;
use gerbe_dual::cli::{format_of, render, run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            let (text, code) = render(&report, format_of(&cli.command));
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{text}");
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
