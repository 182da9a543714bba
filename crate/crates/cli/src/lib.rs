//! Spec and report files, built-in examples and the commands of the
//! `dwellgraph` binary.

pub mod commands;
pub mod examples;
pub mod report;
pub mod spec;

pub use commands::{cmd_analyze, cmd_graph, cmd_simulate, AnalyzeFlags, SimulateFlags};
pub use examples::generate_example;
pub use report::{parse_report, render_report, ReportFile};
pub use spec::{parse_spec, render_spec, SpecError, SystemSpecFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("invalid input: {0}")]
    InvalidArgument(String),
    #[error("unknown example `{0}` (expected example1 or example2)")]
    UnknownExample(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("subsystem {index} (`{name}`) is not Schur stable: spectral radius {rho}")]
    NotSchurStable { index: usize, name: String, rho: f64 },
    #[error("numerical breakdown: {0}")]
    Numerical(String),
}

impl CliError {
    /// 2 for invalid input, 3 for an unstable subsystem, 4 for a numerical breakdown.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::InvalidArgument(_) | CliError::UnknownExample(_) | CliError::Io { .. } => 2,
            CliError::NotSchurStable { .. } => 3,
            CliError::Numerical(_) => 4,
        }
    }
}
