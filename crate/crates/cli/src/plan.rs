use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use porplan::{search, Heuristic, HeuristicKind, Outcome, Plan, SearchAlgorithm, SearchResult, Strategy, StrategyKind, Task};

use crate::{read_task, write_file, CliError, PorArg, SearchOpts, EXIT_LIMIT, EXIT_SOLVED, EXIT_UNSOLVABLE};

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    /// Task file in SAS+ translator format.
    pub input: PathBuf,
    #[command(flatten)]
    pub search: SearchOpts,
    #[arg(long, value_enum, default_value = "sac")]
    pub por: PorArg,
    /// Plan file; printed to stdout when omitted.
    #[arg(long)]
    pub plan_out: Option<PathBuf>,
    #[arg(long)]
    pub stats_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stats {
    pub outcome: String,
    pub expanded: u64,
    pub generated: u64,
    pub time_ms: f64,
    pub cost: Option<u64>,
    pub plan_length: Option<usize>,
    pub peak_open: usize,
    pub limit: Option<String>,
    pub search: String,
    pub heuristic: String,
    pub por: String,
    /// Whether the configuration guarantees a cost-optimal plan.
    pub optimal: bool,
}

impl Stats {
    pub fn new(result: &SearchResult, alg: SearchAlgorithm, h: HeuristicKind, por: StrategyKind) -> Self {
        let plan = result.outcome.plan();
        Self {
            outcome: result.outcome.name().to_string(),
            expanded: result.expanded,
            generated: result.generated,
            time_ms: result.wall_time.as_secs_f64() * 1000.0,
            cost: plan.map(|p| p.cost),
            plan_length: plan.map(|p| p.steps.len()),
            peak_open: result.peak_open,
            limit: match &result.outcome {
                Outcome::ResourceLimit(k) => Some(k.to_string()),
                _ => None,
            },
            search: alg.to_string(),
            heuristic: h.to_string(),
            por: por.to_string(),
            optimal: alg == SearchAlgorithm::AStar
                && matches!(h, HeuristicKind::Zero | HeuristicKind::Blind | HeuristicKind::HMax)
                && por != StrategyKind::Sp,
        }
    }
}

/// One `(name)` line per step and a closing cost comment.
pub fn format_plan(task: &Task, plan: &Plan) -> String {
    let mut out = String::new();
    for &a in &plan.steps {
        out.push('(');
        out.push_str(&task.action(a).name);
        out.push_str(")\n");
    }
    let kind = if task.uses_metric() { "general cost" } else { "unit cost" };
    out.push_str(&format!("; cost = {} ({kind})\n", plan.cost));
    out
}

pub fn run_search(task: &Task, opts: &SearchOpts, por: StrategyKind) -> Result<SearchResult, CliError> {
    let alg: SearchAlgorithm = opts.search.into();
    if alg == SearchAlgorithm::Bfs && !task.is_unit_cost() {
        return Err(CliError::Config("bfs requires unit action costs".into()));
    }
    let strategy = Strategy::new(task, por, opts.strategy_config()).map_err(|e| CliError::Config(e.to_string()))?;
    let heuristic = Heuristic::new(task, opts.heuristic.into());
    Ok(search(task, alg, &heuristic, &strategy, opts.limits()?)?)
}

pub fn run(args: &PlanArgs) -> Result<i32, CliError> {
    let task = read_task(&args.input)?;
    let por: StrategyKind = args.por.into();
    let result = run_search(&task, &args.search, por)?;
    let stats = Stats::new(&result, args.search.search.into(), args.search.heuristic.into(), por);
    if let Some(path) = &args.stats_json {
        let json = serde_json::to_string_pretty(&stats).map_err(|e| CliError::Output(e.to_string()))?;
        write_file(path, &(json + "\n"))?;
    }
    eprintln!(
        "{}: expanded {}, generated {}, {:.3} ms",
        stats.outcome, stats.expanded, stats.generated, stats.time_ms
    );
    Ok(match &result.outcome {
        Outcome::Solved(plan) => {
            let checked = task
                .validate_plan(&plan.steps)
                .map_err(|e| CliError::Output(format!("internal error: plan failed validation: {e}")))?;
            if checked.cost != plan.cost {
                return Err(CliError::Output("internal error: plan cost mismatch".into()));
            }
            let text = format_plan(&task, plan);
            match &args.plan_out {
                Some(path) => write_file(path, &text)?,
                None => print!("{text}"),
            }
            EXIT_SOLVED
        }
        Outcome::Unsolvable => EXIT_UNSOLVABLE,
        Outcome::ResourceLimit(_) => EXIT_LIMIT,
    })
}
