use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dwellgraph::commands::norm_columns;
use dwellgraph::examples::generate_example;
use dwellgraph::report::render_graph;
use dwellgraph::spec::{parse_norm, AdjacencySpec, EpsilonSetting};
use dwellgraph::{cmd_analyze, cmd_graph, cmd_simulate, render_report, render_spec, AnalyzeFlags, CliError, SimulateFlags};
use dwellgraph_core::analysis::ModeSelection;
use dwellgraph_core::dwell::DwellMode;
use dwellgraph_core::numerics::Norm;

/// Dwell-time certificates for discrete-time switched linear systems.
#[derive(Parser)]
#[command(name = "dwellgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable certificate and report the winners.
    Analyze {
        /// Spec file, or `-` for stdin.
        spec: String,
        #[command(flatten)]
        flags: AnalysisArgs,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Monte-Carlo decay check of admissible switching signals.
    Simulate {
        spec: String,
        /// Dwell time of the generated signals.
        #[arg(long)]
        tau: u64,
        #[arg(long, value_enum, default_value = "min")]
        mode: SimMode,
        /// Chatter bound for `--mode avg`.
        #[arg(long, default_value_t = 1)]
        n0: u64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        seed: u64,
        /// Follow the critical cycle with dwell exactly tau.
        #[arg(long)]
        adversarial: bool,
        /// Also write ‖x(t)‖ columns of the first trials to this file.
        #[arg(long)]
        norms_out: Option<String>,
        /// Number of trials written by `--norms-out`.
        #[arg(long, default_value_t = 10)]
        norms_trials: usize,
        #[command(flatten)]
        flags: AnalysisArgs,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Print a built-in example as a spec file.
    GenerateExample {
        /// `example1` or `example2`.
        name: String,
        #[arg(long, value_enum)]
        adjacency: Option<AdjacencyPreset>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Dump the weighted switching graph.
    Graph {
        spec: String,
        #[command(flatten)]
        flags: AnalysisArgs,
        #[arg(short, long)]
        output: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SimMode {
    Min,
    Avg,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdjacencyPreset {
    Full,
    Ring,
    Ring2,
}

#[derive(Args)]
struct AnalysisArgs {
    /// Minimum dwell only.
    #[arg(long, group = "sel")]
    min: bool,
    /// Average dwell only.
    #[arg(long, group = "sel")]
    avg: bool,
    /// Both modes (default).
    #[arg(long, group = "sel")]
    all: bool,
    /// Fixed ε for Jordan forms.
    #[arg(long, conflicts_with = "eps_search")]
    eps: Option<f64>,
    /// Grid search over ε.
    #[arg(long)]
    eps_search: bool,
    /// spectral, 1, inf or all.
    #[arg(long, value_parser = parse_norm_arg)]
    norm: Option<NormArg>,
    /// Cycle-ratio tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Eigenvalue cluster tolerance.
    #[arg(long)]
    eig_tol: Option<f64>,
    /// Relative numerical-rank tolerance.
    #[arg(long)]
    rank_tol: Option<f64>,
}

#[derive(Clone, Copy)]
struct NormArg(Option<Norm>);

fn parse_norm_arg(s: &str) -> Result<NormArg, String> {
    parse_norm(s).map(NormArg)
}

impl AnalysisArgs {
    fn flags(&self) -> AnalyzeFlags {
        let selection = if self.min {
            ModeSelection::Minimum
        } else if self.avg {
            ModeSelection::Average
        } else {
            ModeSelection::All
        };
        let epsilon = match (self.eps, self.eps_search) {
            (Some(v), _) => Some(EpsilonSetting::Fixed(v)),
            (None, true) => Some(EpsilonSetting::Search),
            (None, false) => None,
        };
        AnalyzeFlags {
            selection,
            epsilon,
            norm: self.norm.map(|n| n.0),
            tol: self.tol,
            eigen_cluster_tol: self.eig_tol,
            eigen_rank_tol: self.rank_tol,
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.to_owned(), source };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn write_output(path: Option<&str>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_owned(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { spec, flags, output } => {
            let report = cmd_analyze(&read_input(&spec)?, &flags.flags())?;
            write_output(output.as_deref(), &render_report(&report))
        }
        Command::Simulate {
            spec,
            tau,
            mode,
            n0,
            trials,
            horizon,
            seed,
            adversarial,
            norms_out,
            norms_trials,
            flags,
            output,
        } => {
            let text = read_input(&spec)?;
            let sim = SimulateFlags {
                analyze: flags.flags(),
                tau,
                mode: match mode {
                    SimMode::Min => DwellMode::Minimum,
                    SimMode::Avg => DwellMode::Average,
                },
                n0,
                trials,
                horizon,
                seed,
                adversarial,
            };
            let (report, _) = cmd_simulate(&text, &sim)?;
            if let Some(path) = norms_out.as_deref() {
                write_output(Some(path), &norm_columns(&text, &sim, norms_trials)?)?;
            }
            write_output(output.as_deref(), &render_report(&report))
        }
        Command::GenerateExample { name, adjacency, output } => {
            let adjacency = adjacency.map(|a| match a {
                AdjacencyPreset::Full => AdjacencySpec::Full,
                AdjacencyPreset::Ring => AdjacencySpec::Ring,
                AdjacencyPreset::Ring2 => AdjacencySpec::Ring2,
            });
            let spec = generate_example(&name, adjacency)?;
            write_output(output.as_deref(), &render_spec(&spec))
        }
        Command::Graph { spec, flags, output } => {
            let dump = cmd_graph(&read_input(&spec)?, &flags.flags())?;
            write_output(output.as_deref(), &render_graph(&dump))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
