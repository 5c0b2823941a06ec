//! `gpd` — compute persistence diagrams, graded persistence diagrams,
//! persistence landscapes, and exact signed Wasserstein distances from
//! barcode or map-chain inputs, and verify the consistency, stability,
//! triangle, and geodesic properties on random sweeps.

mod app;
mod formats;
mod verify;

/// Exit codes: 0 ok, 1 usage, 2 parse, 3 verification failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<gpd_core::Error> for CliError {
    fn from(e: gpd_core::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match app::run(&args) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("gpd: {}", e.message());
            if matches!(e, CliError::Usage(_)) {
                eprintln!("{}", app::USAGE);
            }
            std::process::exit(e.exit_code());
        }
    }
}
