use std::fs;
use std::path::PathBuf;

use porplan::fixtures::corpus;
use porplan::heuristics::{Heuristic, HeuristicKind};
use porplan::oracle::brute_force_optimal_cost;
use porplan::search::{astar, bfs, Outcome, SearchLimits};
use porplan::{emit_sas, parse_sas, Strategy, StrategyConfig, StrategyKind};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn files_match_builders_and_round_trip() {
    for (name, task) in corpus() {
        let text = fs::read_to_string(fixture_dir().join(format!("{name}.sas"))).unwrap();
        let parsed = parse_sas(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parsed, task, "{name}");
        assert_eq!(emit_sas(&parsed), text, "{name}");
    }
}

#[test]
fn astar_hmax_is_optimal_under_every_strategy() {
    for (name, task) in corpus() {
        let opt = brute_force_optimal_cost(&task, 100_000).unwrap();
        let h = Heuristic::new(&task, HeuristicKind::HMax);
        for kind in StrategyKind::ALL {
            let s = Strategy::new(&task, kind, StrategyConfig::default()).unwrap();
            let r = astar(&task, &h, &s, SearchLimits::default()).unwrap();
            match (&r.outcome, opt) {
                (Outcome::Solved(p), Some(c)) => {
                    assert_eq!(p.cost, c, "{name} {kind}");
                    assert_eq!(task.validate_plan(&p.steps).unwrap().cost, c);
                }
                (Outcome::Unsolvable, None) => {}
                (o, _) => panic!("{name} {kind}: {o:?} vs {opt:?}"),
            }
            assert!(r.expanded <= r.generated + 1);
        }
    }
}

#[test]
fn reductions_never_expand_more_than_bfs_without_reduction() {
    for (name, task) in corpus() {
        if !task.is_unit_cost() {
            continue;
        }
        let run = |k| {
            let s = Strategy::new(&task, k, StrategyConfig::default()).unwrap();
            bfs(&task, &s, SearchLimits::default()).unwrap()
        };
        let none = run(StrategyKind::None);
        for k in [StrategyKind::Ec, StrategyKind::Sac] {
            let r = run(k);
            assert_eq!(r.outcome.name(), none.outcome.name(), "{name} {k}");
            assert!(r.generated <= none.generated, "{name} {k}");
        }
    }
}

#[test]
fn independent_switches_collapse_to_a_line() {
    let t = porplan::fixtures::switches(6);
    let s = Strategy::new(&t, StrategyKind::Sac, StrategyConfig::default()).unwrap();
    let r = bfs(&t, &s, SearchLimits::default()).unwrap();
    assert_eq!(r.expanded, 7);
    assert_eq!(r.generated, 6);
}
