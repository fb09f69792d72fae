use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use tracing_subscriber::EnvFilter;
use voice_gateway::{http, BackendKind, Config, Gateway};

/// Serves conversational scene sessions over HTTP.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(long, default_value = "config/gateway.toml")]
    config: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Use the rule-table bots regardless of the configured backend.
    #[arg(long)]
    mock_backend: bool,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    tracing_subscriber::fmt()
        .with_env_filter(
            EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")),
        )
        .init();
    let args = Args::parse();
    let mut config = Config::load(&args.config)?;
    if args.mock_backend {
        config.backend.kind = BackendKind::Mock;
    }
    let gateway = Arc::new(Gateway::from_config(&config)?);
    let ticker = gateway.spawn_background();

    let addr = SocketAddr::from(([0, 0, 0, 0], args.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, models = ?gateway.model_names(), "listening");
    axum::serve(listener, http::router(gateway))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    ticker.abort();
    Ok(())
}
