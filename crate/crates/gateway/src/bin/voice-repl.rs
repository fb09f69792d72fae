use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use tokio::io::{AsyncBufReadExt, BufReader};
use voice_gateway::{BackendKind, Config, Gateway, Repl};

/// Talks to one in-process session from the terminal.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(long, default_value = "config/gateway.toml")]
    config: PathBuf,
    #[arg(long, default_value = "t4")]
    model: String,
    #[arg(long)]
    mock_backend: bool,
}

fn prompt() {
    print!("> ");
    let _ = std::io::stdout().flush();
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let mut config = Config::load(&args.config)?;
    if args.mock_backend {
        config.backend.kind = BackendKind::Mock;
    }
    let gateway = Arc::new(Gateway::from_config(&config)?);
    let (mut repl, greeting) = Repl::open(gateway, &args.model)?;
    println!("{greeting}");
    prompt();
    let mut lines = BufReader::new(tokio::io::stdin()).lines();
    while let Some(line) = lines.next_line().await? {
        if Repl::is_quit(&line) {
            break;
        }
        let out = repl.execute(&line).await;
        if !out.is_empty() {
            println!("{out}");
        }
        prompt();
    }
    Ok(())
}
