use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use corpus_forge_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(output.render(cli.machine).as_bytes());
            ExitCode::from(output.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
