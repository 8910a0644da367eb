//! Acceptance gate: one pass/fail line per criterion, non-zero exit on failure.

use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use porplan::graphs::{build_causal_graph, stratify, LevelTieBreak};
use porplan::oracle::suites::{
    commutativity_suite, heuristic_suite, lemma_suite, optimality_suite, sp_suite, stubborn_suite, StubbornSuiteOptions,
    SuiteReport,
};
use porplan::por::sp_filter;
use porplan::search::bfs;
use porplan::task::apply;
use porplan::{emit_sas, parse_sas, ExpansionContext, SearchLimits, Strategy, StrategyConfig, StrategyKind};
use porplan_cli::bench::{run_bench, summary};
use porplan_cli::{HeuristicArg, SearchArg, SearchOpts, SpClosedArg, TieBreakArg};

const SEEDS: std::ops::Range<u64> = 0..200;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sas"))
        .collect();
    files.sort();
    files
}

fn suite_result(reports: &[SuiteReport]) -> Check {
    let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
    let tasks: u64 = reports.iter().map(|r| r.tasks).sum();
    let checks: u64 = reports.iter().map(|r| r.checks).sum();
    if violations == 0 {
        Ok(format!("{tasks} tasks, {checks} checks, 0 violations"))
    } else {
        let first = reports.iter().flat_map(|r| &r.violations).next().unwrap();
        Err(format!(
            "{violations} violations; first {:?} seed {:?}: {}",
            first.kind, first.seed, first.detail
        ))
    }
}

fn toy2_counts() -> Check {
    let t = porplan::fixtures::toy2();
    let mut got = Vec::new();
    for (kind, want) in [(StrategyKind::None, 4), (StrategyKind::Ec, 3), (StrategyKind::Sp, 4)] {
        let s = Strategy::new(&t, kind, StrategyConfig::default()).map_err(|e| e.to_string())?;
        let r = bfs(&t, &s, SearchLimits::default()).map_err(|e| e.to_string())?;
        if r.expanded != want {
            return Err(format!("{kind}: expanded {} (expected {want})", r.expanded));
        }
        got.push(format!("{kind}={}", r.expanded));
    }
    Ok(got.join(" "))
}

fn toy2_sets() -> Check {
    let t = porplan::fixtures::toy2();
    let s = Strategy::new(&t, StrategyKind::Ec, StrategyConfig::default()).map_err(|e| e.to_string())?;
    let ec = s.ec(&t, t.initial()).map_err(|e| e.to_string())?;
    let sac = s.sac(&t, t.initial()).map_err(|e| e.to_string())?;
    if ec.len() != 1 || sac.len() != 1 {
        return Err(format!("ec {ec:?}, sac {sac:?}"));
    }
    let strata = stratify(&t, &build_causal_graph(&t), LevelTieBreak::Distinct).map_err(|e| e.to_string())?;
    let a = t.find_action("a").ok_or("no action a")?;
    let b = t.find_action("b").ok_or("no action b")?;
    if strata.level_of_action(a) <= strata.level_of_action(b) {
        return Err("L(a) <= L(b) under distinct levels".into());
    }
    let sa = apply(t.initial(), t.action(a)).map_err(|e| e.to_string())?;
    let ctx = ExpansionContext {
        state: &sa,
        generating_action: Some(a),
    };
    let kept = sp_filter(&t, &strata, &ctx, &t.applicable_actions(&sa));
    if kept.contains(&b) {
        return Err("sp kept b after a".into());
    }
    let names = |ids: &[porplan::ActionId]| ids.iter().map(|&x| t.action(x).name.clone()).collect::<Vec<_>>();
    Ok(format!("ec {:?}, sac {:?}, sp after a keeps {:?}", names(&ec), names(&sac), names(&kept)))
}

fn commutativity() -> Check {
    let (report, c) = commutativity_suite(SEEDS, 10);
    let samples = c.both_true + c.both_false + c.syntactic_only + c.semantic_only;
    suite_result(&[report])?;
    if c.syntactic_only + c.semantic_only > 0 {
        return Err(format!("mismatches {c:?}"));
    }
    if samples < 1000 {
        return Err(format!("only {samples} samples"));
    }
    Ok(format!(
        "{samples} samples, {} commutative, {} not, 0 mismatches",
        c.both_true, c.both_false
    ))
}

fn optimality() -> Check {
    suite_result(&[optimality_suite(SEEDS, LevelTieBreak::Canonical)])
}

fn stubborn() -> Check {
    suite_result(&[stubborn_suite(SEEDS, StubbornSuiteOptions::default())])
}

fn sp() -> Check {
    suite_result(&[
        sp_suite(SEEDS, 5, LevelTieBreak::Canonical),
        sp_suite(SEEDS, 5, LevelTieBreak::Distinct),
    ])
}

fn lemma() -> Check {
    suite_result(&[lemma_suite(0..100)])
}

fn heuristics() -> Check {
    suite_result(&[heuristic_suite(SEEDS, 50)])
}

fn mutate(rng: &mut ChaCha8Rng, text: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    for _ in 0..rng.gen_range(1..=3) {
        if lines.is_empty() {
            break;
        }
        let i = rng.gen_range(0..lines.len());
        match rng.gen_range(0..7) {
            0 => {
                lines.remove(i);
            }
            1 => lines.insert(i, lines[i].clone()),
            2 => lines[i] = rng.gen_range(-3i64..20).to_string(),
            3 => lines[i].push_str(" 7"),
            4 => lines[i] = "begin_operator".into(),
            5 => lines.truncate(i),
            _ => {
                let cut = rng.gen_range(0..=lines[i].len());
                lines[i].truncate(cut);
            }
        }
    }
    lines.join("\n")
}

fn parser() -> Check {
    let docs: Vec<String> = fixture_files().iter().map(|p| fs::read_to_string(p).unwrap()).collect();
    if docs.is_empty() {
        return Err("no fixtures".into());
    }
    for (path, doc) in fixture_files().iter().zip(&docs) {
        let task = parse_sas(doc).map_err(|e| format!("{}: {e}", path.display()))?;
        if emit_sas(&task) != *doc {
            return Err(format!("{}: round trip differs", path.display()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut ok, mut errors, mut panics) = (0, 0, 0);
    let mut bad = None;
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    for k in 0..10_000 {
        let doc = mutate(&mut rng, &docs[k % docs.len()]);
        match panic::catch_unwind(|| parse_sas(&doc).map(|t| parse_sas(&emit_sas(&t)) == Ok(t))) {
            Ok(Ok(true)) => ok += 1,
            Ok(Ok(false)) => bad = Some("accepted document does not round-trip".to_string()),
            Ok(Err(e)) if e.line() >= 1 && !e.to_string().is_empty() => errors += 1,
            Ok(Err(e)) => bad = Some(format!("unstructured error: {e}")),
            Err(_) => panics += 1,
        }
    }
    panic::set_hook(hook);
    if let Some(b) = bad {
        return Err(b);
    }
    if panics > 0 {
        return Err(format!("{panics} panics"));
    }
    Ok(format!(
        "{} fixtures round-trip; 10000 mutants: {ok} parsed, {errors} structured errors, 0 panics",
        docs.len()
    ))
}

fn reduction() -> Check {
    let opts = SearchOpts {
        search: SearchArg::Astar,
        heuristic: HeuristicArg::Hmax,
        time_limit: Some(60.0),
        node_limit: None,
        memory_limit: None,
        sp_closed: SpClosedArg::State,
        strat_tiebreak: TieBreakArg::Canonical,
    };
    let kinds = [StrategyKind::None, StrategyKind::Ec, StrategyKind::Sp, StrategyKind::Sac];
    let rows = run_bench(&fixture_files(), &kinds, &opts);
    let mut worse = Vec::new();
    for pair in rows.chunks(kinds.len()) {
        if let Some(r) = pair.iter().find(|r| r.error.is_some()) {
            return Err(format!("{}: {}", r.instance, r.error.as_deref().unwrap_or("")));
        }
        let exp = |k: &str| pair.iter().find(|r| r.por == k).and_then(|r| r.expanded);
        if exp("sac") > exp("none") {
            worse.push(pair[0].instance.clone());
        }
    }
    for line in summary(&rows) {
        println!("       {line}");
    }
    if worse.is_empty() {
        Ok(format!("{} instances, sac <= none on all", rows.len() / kinds.len()))
    } else {
        Err(format!("sac expands more than none on {worse:?}"))
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("toy2 bfs counts", toy2_counts, Duration::from_millis(1)),
        ("toy2 expansion sets", toy2_sets, Duration::from_millis(1)),
        ("commutativity equivalence", commutativity, Duration::from_secs(5)),
        ("optimality preservation", optimality, Duration::from_secs(60)),
        ("stubborn conditions", stubborn, Duration::from_secs(120)),
        ("sp permutation and reachability", sp, Duration::from_secs(60)),
        ("action core lemma", lemma, Duration::from_secs(30)),
        ("heuristic properties", heuristics, Duration::from_secs(30)),
        ("parser round trip and fuzz", parser, Duration::from_secs(30)),
        ("reduction reporting", reduction, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {budget:?}")),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!(
            "[{}] {:>2} {name}: {detail} ({:.3} ms)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64() * 1e3
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
