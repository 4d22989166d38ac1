//! Command-line front end for the `alphamu-relay` outage engines: preset or
//! JSON scenarios, parameter sweeps, analytic and Monte Carlo evaluation,
//! CSV/JSON emission.

pub mod output;
pub mod runner;
pub mod scenario;

pub use output::{emit, Format, Method, ResultRow};
pub use runner::{execute, run, Args, Outcome};
pub use scenario::{load_scenario, Scenario, Sweep, SweepParam};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}
