use std::io::{Read, Write};
use std::process::ExitCode;

use clap::Parser;
use rankmetric::code::Guard;
use rankmetric_cli::{exit, run, Cli, Settings};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("rmc: cannot configure thread pool: {e}");
            return ExitCode::from(exit::INTERNAL as u8);
        }
    }
    let input = if cli.command.needs_input() {
        let read = match &cli.input {
            Some(path) => std::fs::read_to_string(path),
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map(|_| s)
            }
        };
        match read {
            Ok(s) => s,
            Err(e) => {
                eprintln!("rmc: cannot read request: {e}");
                return ExitCode::from(exit::INVALID as u8);
            }
        }
    } else {
        String::new()
    };
    let settings = Settings { guard: Guard::new(cli.max_steps), seed: cli.seed };
    let outcome = run(&cli.command, &input, &settings, !cli.no_timing);
    let mut text = serde_json::to_string_pretty(&outcome.response).expect("responses serialize");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("rmc: cannot write response: {e}");
        return ExitCode::from(exit::INTERNAL as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
