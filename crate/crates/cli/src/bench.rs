use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use porplan::StrategyKind;

use crate::plan::{run_search, Stats};
use crate::{read_task, write_file, CliError, PorArg, SearchOpts, EXIT_SOLVED};

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Directory of `.sas` files.
    pub dir: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "none,ec,sp,sac")]
    pub por: Vec<PorArg>,
    #[command(flatten)]
    pub search: SearchOpts,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// CSV output; printed to stdout when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub por: String,
    pub outcome: String,
    pub solved: bool,
    pub cost: Option<u64>,
    pub expanded: Option<u64>,
    pub generated: Option<u64>,
    pub time_ms: Option<f64>,
    pub error: Option<String>,
}

fn instances(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "sas"))
        .collect();
    files.sort();
    Ok(files)
}

fn run_one(path: &Path, kind: StrategyKind, opts: &SearchOpts) -> BenchRow {
    let instance = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let failed = |e: CliError| BenchRow {
        instance: instance.clone(),
        por: kind.to_string(),
        outcome: "error".into(),
        solved: false,
        cost: None,
        expanded: None,
        generated: None,
        time_ms: None,
        error: Some(e.to_string()),
    };
    let task = match read_task(path) {
        Ok(t) => t,
        Err(e) => return failed(e),
    };
    match run_search(&task, opts, kind) {
        Ok(r) => {
            let s = Stats::new(&r, opts.search.into(), opts.heuristic.into(), kind);
            BenchRow {
                instance,
                por: kind.to_string(),
                solved: s.cost.is_some(),
                outcome: s.outcome,
                cost: s.cost,
                expanded: Some(s.expanded),
                generated: Some(s.generated),
                time_ms: Some(s.time_ms),
                error: None,
            }
        }
        Err(e) => failed(e),
    }
}

/// Rows ordered by instance name, then by the order of `kinds`.
pub fn run_bench(files: &[PathBuf], kinds: &[StrategyKind], opts: &SearchOpts) -> Vec<BenchRow> {
    let jobs: Vec<(usize, usize)> = (0..files.len()).flat_map(|f| (0..kinds.len()).map(move |k| (f, k))).collect();
    let mut rows: Vec<((usize, usize), BenchRow)> = jobs
        .par_iter()
        .map(|&(f, k)| ((f, k), run_one(&files[f], kinds[k], opts)))
        .collect();
    rows.sort_by_key(|(key, _)| *key);
    rows.into_iter().map(|(_, r)| r).collect()
}

/// Per-instance expansion counts for two strategies, where both solved or
/// exhausted the task.
fn pairs<'a>(rows: &'a [BenchRow], a: &str, b: &str) -> Vec<(&'a str, u64, u64)> {
    let mut by: BTreeMap<&str, (Option<u64>, Option<u64>)> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.error.is_none() && r.outcome != "resource_limit") {
        let slot = by.entry(r.instance.as_str()).or_default();
        if r.por == a {
            slot.0 = r.expanded;
        } else if r.por == b {
            slot.1 = r.expanded;
        }
    }
    by.into_iter()
        .filter_map(|(i, (x, y))| Some((i, x?, y?)))
        .collect()
}

/// Human-readable reduction comparison lines.
pub fn summary(rows: &[BenchRow]) -> Vec<String> {
    let mut out = Vec::new();
    for (a, b) in [("sac", "none"), ("ec", "none"), ("sp", "none"), ("sac", "ec")] {
        let p = pairs(rows, a, b);
        if p.is_empty() {
            continue;
        }
        let (fewer, equal) = (
            p.iter().filter(|(_, x, y)| x < y).count(),
            p.iter().filter(|(_, x, y)| x == y).count(),
        );
        let (sa, sb): (u64, u64) = (p.iter().map(|t| t.1).sum(), p.iter().map(|t| t.2).sum());
        out.push(format!(
            "{a} vs {b}: fewer expansions on {fewer}, equal on {equal}, more on {} of {} instances; total expanded {sa} vs {sb}",
            p.len() - fewer - equal,
            p.len()
        ));
    }
    out
}

pub fn to_csv(rows: &[BenchRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

pub fn run(args: &BenchArgs) -> Result<i32, CliError> {
    let files = instances(&args.dir)?;
    let kinds: Vec<StrategyKind> = args.por.iter().map(|&p| p.into()).collect();
    args.search.limits()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let rows = pool.install(|| run_bench(&files, &kinds, &args.search));
    let csv = to_csv(&rows)?;
    match &args.csv {
        Some(p) => write_file(p, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(p) = &args.json {
        let json = serde_json::to_string_pretty(&rows).map_err(|e| CliError::Output(e.to_string()))?;
        write_file(p, &(json + "\n"))?;
    }
    for line in summary(&rows) {
        eprintln!("{line}");
    }
    Ok(EXIT_SOLVED)
}
