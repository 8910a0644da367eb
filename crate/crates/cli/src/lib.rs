//! Command-line front end: `plan`, `inspect`, `verify` and `bench`.
//!
//! Exit codes: 0 solved / clean, 1 proven unsolvable, 2 resource limit,
//! 3 input or configuration error, 4 verification violation.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use porplan::graphs::LevelTieBreak;
use porplan::{HeuristicKind, SasError, SearchAlgorithm, SearchError, SpClosedMode, StrategyConfig, StrategyKind, Task};

pub mod bench;
pub mod inspect;
pub mod plan;
pub mod verify;

pub const EXIT_SOLVED: i32 = 0;
pub const EXIT_UNSOLVABLE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: SasError,
    },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_owned(),
            source,
        }
    }
}

pub fn read_task(path: &Path) -> Result<Task, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    porplan::parse_sas(&text).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchArg {
    Astar,
    Gbfs,
    Bfs,
}

impl From<SearchArg> for SearchAlgorithm {
    fn from(a: SearchArg) -> Self {
        match a {
            SearchArg::Astar => SearchAlgorithm::AStar,
            SearchArg::Gbfs => SearchAlgorithm::Gbfs,
            SearchArg::Bfs => SearchAlgorithm::Bfs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    Zero,
    Blind,
    Goalcount,
    Hmax,
    Hadd,
}

impl From<HeuristicArg> for HeuristicKind {
    fn from(a: HeuristicArg) -> Self {
        match a {
            HeuristicArg::Zero => HeuristicKind::Zero,
            HeuristicArg::Blind => HeuristicKind::Blind,
            HeuristicArg::Goalcount => HeuristicKind::GoalCount,
            HeuristicArg::Hmax => HeuristicKind::HMax,
            HeuristicArg::Hadd => HeuristicKind::HAdd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PorArg {
    None,
    Ec,
    Sp,
    Sac,
}

impl From<PorArg> for StrategyKind {
    fn from(a: PorArg) -> Self {
        match a {
            PorArg::None => StrategyKind::None,
            PorArg::Ec => StrategyKind::Ec,
            PorArg::Sp => StrategyKind::Sp,
            PorArg::Sac => StrategyKind::Sac,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpClosedArg {
    State,
    StateLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreakArg {
    Canonical,
    Distinct,
}

impl From<TieBreakArg> for LevelTieBreak {
    fn from(a: TieBreakArg) -> Self {
        match a {
            TieBreakArg::Canonical => LevelTieBreak::Canonical,
            TieBreakArg::Distinct => LevelTieBreak::Distinct,
        }
    }
}

/// Options shared by `plan` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct SearchOpts {
    #[arg(long, value_enum, default_value = "astar")]
    pub search: SearchArg,
    #[arg(long, value_enum, default_value = "hmax")]
    pub heuristic: HeuristicArg,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Maximum number of expansions.
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Maximum number of stored search nodes.
    #[arg(long)]
    pub memory_limit: Option<usize>,
    /// Duplicate-detection key under SP.
    #[arg(long, value_enum, default_value = "state")]
    pub sp_closed: SpClosedArg,
    /// Level assignment for variables sharing a causal-graph layer.
    #[arg(long, value_enum, default_value = "canonical")]
    pub strat_tiebreak: TieBreakArg,
}

impl SearchOpts {
    pub fn limits(&self) -> Result<porplan::SearchLimits, CliError> {
        let max_time = match self.time_limit {
            Some(t) if !(t.is_finite() && t >= 0.0) => {
                return Err(CliError::Config(format!("invalid time limit {t}")));
            }
            Some(t) => Some(std::time::Duration::from_secs_f64(t)),
            None => None,
        };
        Ok(porplan::SearchLimits {
            max_expansions: self.node_limit,
            max_time,
            max_stored: self.memory_limit,
        })
    }

    pub fn strategy_config(&self) -> StrategyConfig {
        StrategyConfig {
            sp_closed: match self.sp_closed {
                SpClosedArg::State => SpClosedMode::State,
                SpClosedArg::StateLevel => SpClosedMode::StateLevel,
            },
            level_tie_break: self.strat_tiebreak.into(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "porplan", version, about = "SAS+ planner with partial-order reduction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one task.
    Plan(plan::PlanArgs),
    /// Emit derived graphs and per-state expansion sets.
    Inspect(inspect::InspectArgs),
    /// Run the brute-force verification suites on seeded random tasks.
    Verify(verify::VerifyArgs),
    /// Run every strategy on a directory of tasks.
    Bench(bench::BenchArgs),
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_SOLVED };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Plan(a) => plan::run(&a),
        Command::Inspect(a) => inspect::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Bench(a) => bench::run(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
