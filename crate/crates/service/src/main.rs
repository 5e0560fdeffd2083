use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use evclust_service::{router, AppState, ServiceConfig, DEFAULT_DETECTOR_WINDOW};

#[derive(Parser)]
#[command(
    name = "evclust-serve",
    version,
    about = "Event-clustering monitoring service over HTTP"
)]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "EVCLUST_LISTEN", default_value = "127.0.0.1:8080")]
    listen: String,
    /// Directory holding one append-only log per stream.
    #[arg(long, env = "EVCLUST_DATA_DIR", default_value = "./data")]
    data_dir: PathBuf,
    /// Detector window: how many recent gaps the threshold estimate averages.
    #[arg(long, env = "EVCLUST_WINDOW", default_value_t = DEFAULT_DETECTOR_WINDOW as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    window: u64,
    /// Reject appends to streams that do not exist yet.
    #[arg(long)]
    no_auto_create: bool,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    let config = ServiceConfig {
        data_dir: args.data_dir,
        detector_window: args.window as usize,
        auto_create: !args.no_auto_create,
    };

    let state = match AppState::open(config) {
        Ok(state) => state,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let listener = match tokio::net::TcpListener::bind(&args.listen).await {
        Ok(listener) => listener,
        Err(e) => {
            eprintln!("error: cannot bind {}: {e}", args.listen);
            return ExitCode::from(2);
        }
    };
    eprintln!(
        "listening on {} (data dir {}, window {})",
        listener.local_addr().expect("bound"),
        state.config().data_dir.display(),
        state.config().detector_window
    );

    if let Err(e) = axum::serve(listener, router(state)).await {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
