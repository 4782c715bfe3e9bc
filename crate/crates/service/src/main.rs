use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use corpus_forge_service::{serve, ServiceConfig};

/// Serve a corpus-forge archive read-only over HTTP.
#[derive(Parser)]
#[command(name = "corpus-forge-serve", version)]
struct Args {
    /// Archive root.
    #[arg(long, env = "CORPUS_FORGE_ROOT")]
    root: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    let config = ServiceConfig {
        bind: args.bind,
        root: args.root,
    };
    match serve(config).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
