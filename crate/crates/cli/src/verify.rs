use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use porplan::graphs::LevelTieBreak;
use porplan::oracle::suites::{
    action_preserving_suite, commutativity_suite, heuristic_suite, lemma_suite, optimality_suite, sp_suite,
    stubborn_suite, StubbornSuiteOptions, SuiteReport,
};

use crate::{write_file, CliError, TieBreakArg, EXIT_SOLVED, EXIT_VIOLATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Commutativity,
    Optimality,
    Stubborn,
    Sp,
    Lemma,
    Heuristics,
    ActionPreserving,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Number of random tasks per suite.
    #[arg(long, default_value_t = 200)]
    pub seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Path length bound for the SP permutation check.
    #[arg(long, default_value_t = 5)]
    pub horizon: usize,
    /// Path length bound for the action-preserving check.
    #[arg(long, default_value_t = 4)]
    pub ap_horizon: usize,
    /// Goal-path bound for A1/A2; exhaustive when omitted.
    #[arg(long)]
    pub stubborn_horizon: Option<usize>,
    /// Commutativity samples per task.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// Sampled states per task for the heuristic checks.
    #[arg(long, default_value_t = 50)]
    pub heuristic_samples: usize,
    /// Suites to run; all when omitted.
    #[arg(long = "suite", value_enum)]
    pub suites: Vec<Suite>,
    #[arg(long, value_enum, default_value = "distinct")]
    pub strat_tiebreak: TieBreakArg,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Drop one action from every SAC expansion set.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub seeds: u64,
    pub total_violations: usize,
    pub suites: Vec<SuiteReport>,
}

pub fn run_suites(args: &VerifyArgs) -> VerifyReport {
    let seeds = args.seed..args.seed.saturating_add(args.seeds);
    let tb: LevelTieBreak = args.strat_tiebreak.into();
    let selected: Vec<Suite> = if args.suites.is_empty() {
        Suite::value_variants().to_vec()
    } else {
        args.suites.clone()
    };
    let suites: Vec<SuiteReport> = if args.seeds == 0 {
        Vec::new()
    } else {
        selected
            .par_iter()
            .map(|suite| match suite {
                Suite::Commutativity => commutativity_suite(seeds.clone(), args.samples).0,
                Suite::Optimality => optimality_suite(seeds.clone(), tb),
                Suite::Stubborn => stubborn_suite(
                    seeds.clone(),
                    StubbornSuiteOptions {
                        horizon: args.stubborn_horizon,
                        inject_fault: args.inject_fault,
                    },
                ),
                Suite::Sp => sp_suite(seeds.clone(), args.horizon, tb),
                Suite::Lemma => lemma_suite(seeds.clone()),
                Suite::Heuristics => heuristic_suite(seeds.clone(), args.heuristic_samples),
                Suite::ActionPreserving => action_preserving_suite(seeds.clone(), args.ap_horizon, tb),
            })
            .collect()
    };
    VerifyReport {
        seed: args.seed,
        seeds: args.seeds,
        total_violations: suites.iter().map(|s| s.violations.len()).sum(),
        suites,
    }
}

pub fn run(args: &VerifyArgs) -> Result<i32, CliError> {
    let report = run_suites(args);
    for s in &report.suites {
        println!(
            "{:<18} tasks {:>5}  checks {:>9}  violations {:>4}  {:>7} ms",
            s.name,
            s.tasks,
            s.checks,
            s.violations.len(),
            s.elapsed_ms
        );
        for note in &s.notes {
            println!("{:<18} note: {note}", "");
        }
        for v in s.violations.iter().take(5) {
            println!(
                "{:<18} {:?} seed {:?} state {:?}: {} [{}]",
                "",
                v.kind,
                v.seed,
                v.state,
                v.detail,
                v.witness.join(", ")
            );
        }
    }
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Output(e.to_string()))?;
        write_file(path, &(json + "\n"))?;
    }
    println!("total violations: {}", report.total_violations);
    Ok(if report.total_violations == 0 { EXIT_SOLVED } else { EXIT_VIOLATION })
}
