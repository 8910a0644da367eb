//! Seeded multi-task verification suites.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::checks::{
    check_action_preserving, check_core_lemma, check_left_commutativity_equivalence, check_sp_permutation, reduced_expanded_states,
    reduced_reachable_states, strategy_expander, CommutativityCounts, Report, StubbornChecker, ViolationKind,
};
use super::random::{generate_random_task, RandomTaskSpec};
use super::space::{brute_force_optimal_cost, enumerate_state_space};
use crate::graphs::LevelTieBreak;
use crate::heuristics::{Heuristic, HeuristicKind, HeuristicValue};
use crate::por::{Strategy, StrategyConfig, StrategyKind};
use crate::search::{astar, Outcome, SearchLimits};
use crate::task::{apply_unchecked, State, Task};

/// Reachable-state cap for every suite task.
pub const MAX_STATES: usize = 2000;

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub tasks: u64,
    pub checks: u64,
    pub violations: Vec<super::checks::Violation>,
    pub elapsed_ms: u128,
    /// Measured quantities that are reported but not asserted.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn absorb(&mut self, seed: u64, r: Report) {
        self.checks += r.checks;
        self.violations.extend(r.with_seed(seed).violations);
    }
}

struct Timer(Instant);

impl Timer {
    fn start() -> Self {
        Self(Instant::now())
    }

    fn finish(self, mut r: SuiteReport) -> SuiteReport {
        r.elapsed_ms = self.0.elapsed().as_millis();
        r
    }
}

fn strategy(task: &Task, kind: StrategyKind, tie_break: LevelTieBreak) -> Strategy {
    Strategy::new(
        task,
        kind,
        StrategyConfig {
            level_tie_break: tie_break,
            ..Default::default()
        },
    )
    .expect("stratification never fails on well-formed tasks")
}

fn single(kind: ViolationKind, state: &State, detail: String) -> Report {
    let mut r = Report {
        checks: 1,
        ..Default::default()
    };
    r.violation(kind, state.values(), detail, Vec::new());
    r
}

fn pass() -> Report {
    Report {
        checks: 1,
        ..Default::default()
    }
}

pub fn commutativity_suite(seeds: impl IntoIterator<Item = u64>, samples_per_task: usize) -> (SuiteReport, CommutativityCounts) {
    let timer = Timer::start();
    let mut out = SuiteReport {
        name: "commutativity".into(),
        ..Default::default()
    };
    let mut total = CommutativityCounts::default();
    for seed in seeds {
        let t = generate_random_task(&RandomTaskSpec::varied(seed));
        let (r, c) = check_left_commutativity_equivalence(&t, samples_per_task, seed);
        total.both_true += c.both_true;
        total.both_false += c.both_false;
        total.syntactic_only += c.syntactic_only;
        total.semantic_only += c.semantic_only;
        out.tasks += 1;
        out.absorb(seed, r);
    }
    out.notes.push(format!(
        "commuting pairs {}, non-commuting pairs {}",
        total.both_true, total.both_false
    ));
    (timer.finish(out), total)
}

/// A* with h_max under every strategy against the brute-force optimum. Each
/// seed runs a walk-goal task and a random-goal variant (which may be
/// unsolvable).
pub fn optimality_suite(seeds: impl IntoIterator<Item = u64>, tie_break: LevelTieBreak) -> SuiteReport {
    let timer = Timer::start();
    let mut out = SuiteReport {
        name: "optimality".into(),
        ..Default::default()
    };
    let mut sp_suboptimal = 0u64;
    let mut unsolvable_tasks = 0u64;
    for seed in seeds {
        let base = RandomTaskSpec::varied(seed);
        for spec in [base.clone(), base.with_random_goal()] {
            let t = generate_random_task(&spec);
            let Ok(opt) = brute_force_optimal_cost(&t, MAX_STATES) else {
                out.absorb(seed, single(ViolationKind::Skipped, t.initial(), "state space too large".into()));
                continue;
            };
            out.tasks += 1;
            unsolvable_tasks += u64::from(opt.is_none());
            let h = Heuristic::new(&t, HeuristicKind::HMax);
            for kind in StrategyKind::ALL {
                let s = strategy(&t, kind, tie_break);
                let res = astar(&t, &h, &s, SearchLimits::default()).expect("search runs");
                let r = match (&res.outcome, opt) {
                    (Outcome::Solved(plan), Some(best)) => {
                        if t.validate_plan(&plan.steps).map(|p| p.cost) != Ok(plan.cost) {
                            single(ViolationKind::InvalidPlan, t.initial(), format!("{kind}: plan fails validation"))
                        } else if plan.cost != best && kind != StrategyKind::Sp {
                            single(
                                ViolationKind::Optimality,
                                t.initial(),
                                format!("{kind}: cost {} but optimum {best}", plan.cost),
                            )
                        } else {
                            sp_suboptimal += u64::from(plan.cost != best);
                            pass()
                        }
                    }
                    (Outcome::Unsolvable, None) => pass(),
                    (outcome, opt) => single(
                        ViolationKind::Completeness,
                        t.initial(),
                        format!("{kind}: outcome {} but optimum {opt:?}", outcome.name()),
                    ),
                };
                out.absorb(seed, r);
            }
        }
    }
    out.notes.push(format!("unsolvable tasks {unsolvable_tasks}"));
    out.notes.push(format!("sp plans above optimum {sp_suboptimal}"));
    timer.finish(out)
}

/// Options for [`stubborn_suite`].
#[derive(Debug, Clone, Copy, Default)]
pub struct StubbornSuiteOptions {
    pub horizon: Option<usize>,
    /// Drops the last action of every SAC set; used to exercise the checker.
    pub inject_fault: bool,
}

/// A1 and A2 for EC and SAC at every state expanded by an exhaustive
/// traversal of the respective reduced graph.
pub fn stubborn_suite(seeds: impl IntoIterator<Item = u64>, opts: StubbornSuiteOptions) -> SuiteReport {
    let timer = Timer::start();
    let mut out = SuiteReport {
        name: "stubborn".into(),
        ..Default::default()
    };
    let mut states = 0u64;
    let mut set_sizes = [0u64; 2];
    let mut full_sizes = 0u64;
    for seed in seeds {
        let t = generate_random_task(&RandomTaskSpec::varied(seed));
        let Ok(checker) = StubbornChecker::new(&t, t.initial(), MAX_STATES) else {
            out.absorb(seed, single(ViolationKind::Skipped, t.initial(), "state space too large".into()));
            continue;
        };
        out.tasks += 1;
        for (k, kind) in [StrategyKind::Sac, StrategyKind::Ec].into_iter().enumerate() {
            let s = strategy(&t, kind, LevelTieBreak::Canonical);
            let base = strategy_expander(&t, &s);
            let faulty = |ctx: &crate::por::ExpansionContext<'_>| {
                let mut set = base(ctx);
                if opts.inject_fault && kind == StrategyKind::Sac {
                    set.pop();
                }
                set
            };
            let expanded = reduced_expanded_states(&t, &faulty, MAX_STATES).expect("bounded by the full space");
            for st in expanded {
                let set = faulty(&crate::por::ExpansionContext::root(&st));
                states += 1;
                set_sizes[k] += set.len() as u64;
                if k == 0 {
                    full_sizes += t.applicable_actions(&st).len() as u64;
                }
                let mut r = checker.check(&st, &set, opts.horizon);
                for v in &mut r.violations {
                    v.detail = format!("{kind}: {}", v.detail);
                }
                out.absorb(seed, r);
            }
        }
    }
    out.notes.push(format!(
        "states checked {states}; summed set sizes sac {}, ec {}; applicable at sac states {full_sizes}",
        set_sizes[0], set_sizes[1]
    ));
    timer.finish(out)
}

/// SP permutation property and reachable-set equality with the unreduced
/// graph.
pub fn sp_suite(seeds: impl IntoIterator<Item = u64>, horizon: usize, tie_break: LevelTieBreak) -> SuiteReport {
    let timer = Timer::start();
    let mut out = SuiteReport {
        name: "sp".into(),
        ..Default::default()
    };
    for seed in seeds {
        let t = generate_random_task(&RandomTaskSpec::varied(seed));
        let Ok(space) = enumerate_state_space(&t, MAX_STATES) else {
            out.absorb(seed, single(ViolationKind::Skipped, t.initial(), "state space too large".into()));
            continue;
        };
        out.tasks += 1;
        let sp = strategy(&t, StrategyKind::Sp, tie_break);
        out.absorb(seed, check_sp_permutation(&t, &sp, horizon));
        let reach = reduced_reachable_states(&t, &strategy_expander(&t, &sp));
        let r = if reach.len() == space.len() && space.states.iter().all(|s| reach.contains(s)) {
            pass()
        } else {
            single(
                ViolationKind::SpReachability,
                t.initial(),
                format!("sp reaches {} of {} states", reach.len(), space.len()),
            )
        };
        out.absorb(seed, r);
    }
    timer.finish(out)
}

/// Action-preserving reduction for EC, SAC and SP on solution paths up to
/// `horizon` steps.
pub fn action_preserving_suite(seeds: impl IntoIterator<Item = u64>, horizon: usize, tie_break: LevelTieBreak) -> SuiteReport {
    let timer = Timer::start();
    let mut out = SuiteReport {
        name: "action_preserving".into(),
        ..Default::default()
    };
    for seed in seeds {
        let t = generate_random_task(&RandomTaskSpec::varied(seed));
        out.tasks += 1;
        for kind in [StrategyKind::Ec, StrategyKind::Sac, StrategyKind::Sp] {
            let s = strategy(&t, kind, tie_break);
            let mut r = check_action_preserving(&t, &strategy_expander(&t, &s), horizon);
            for v in &mut r.violations {
                v.detail = format!("{kind}: {}", v.detail);
            }
            out.absorb(seed, r);
        }
    }
    timer.finish(out)
}

pub fn lemma_suite(seeds: impl IntoIterator<Item = u64>) -> SuiteReport {
    let timer = Timer::start();
    let mut out = SuiteReport {
        name: "core_lemma".into(),
        ..Default::default()
    };
    for seed in seeds {
        let t = generate_random_task(&RandomTaskSpec::varied(seed));
        let Ok(space) = enumerate_state_space(&t, MAX_STATES) else {
            out.absorb(seed, single(ViolationKind::Skipped, t.initial(), "state space too large".into()));
            continue;
        };
        out.tasks += 1;
        out.absorb(seed, check_core_lemma(&t, &space));
    }
    timer.finish(out)
}

/// h_max admissibility at the initial state, h_max ≤ h_add and goal-zero
/// behaviour on sampled reachable states, and unit-cost consistency.
pub fn heuristic_suite(seeds: impl IntoIterator<Item = u64>, samples_per_task: usize) -> SuiteReport {
    let timer = Timer::start();
    let mut out = SuiteReport {
        name: "heuristics".into(),
        ..Default::default()
    };
    let mut sampled = 0u64;
    for seed in seeds {
        let t = generate_random_task(&RandomTaskSpec::varied(seed));
        let Ok(space) = enumerate_state_space(&t, MAX_STATES) else {
            out.absorb(seed, single(ViolationKind::Skipped, t.initial(), "state space too large".into()));
            continue;
        };
        out.tasks += 1;
        let hmax = Heuristic::new(&t, HeuristicKind::HMax);
        let hadd = Heuristic::new(&t, HeuristicKind::HAdd);
        let opt = brute_force_optimal_cost(&t, MAX_STATES).expect("enumerated above");
        let h0 = hmax.evaluate(&t, t.initial());
        let admissible = match (h0, opt) {
            (HeuristicValue::Finite(h), Some(c)) => h <= c,
            (_, None) => true,
            (HeuristicValue::Infinite, Some(_)) => false,
        };
        out.absorb(
            seed,
            if admissible {
                pass()
            } else {
                single(ViolationKind::Admissibility, t.initial(), format!("h_max {h0} above optimum {opt:?}"))
            },
        );
        let positive_costs = t.actions().iter().all(|a| a.cost > 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples_per_task {
            let s = &space.states[rng.gen_range(0..space.len())];
            sampled += 1;
            let (m, a) = (hmax.evaluate(&t, s), hadd.evaluate(&t, s));
            let mut r = pass();
            if m > a {
                r.violation(ViolationKind::HeuristicOrder, s.values(), format!("h_max {m} > h_add {a}"), Vec::new());
            }
            let zero = HeuristicValue::Finite(0);
            let goal = t.is_goal(s);
            let zero_ok = if goal {
                m == zero && a == zero
            } else {
                !positive_costs || (m != zero && a != zero)
            };
            if !zero_ok {
                r.violation(
                    ViolationKind::HeuristicGoal,
                    s.values(),
                    format!("goal {goal}, h_max {m}, h_add {a}"),
                    Vec::new(),
                );
            }
            if t.is_unit_cost() {
                for id in t.applicable_actions(s) {
                    let next = hmax.evaluate(&t, &apply_unchecked(s, t.action(id)));
                    let consistent = match (m, next) {
                        (HeuristicValue::Finite(x), HeuristicValue::Finite(y)) => x <= y + 1,
                        (_, HeuristicValue::Infinite) => true,
                        (HeuristicValue::Infinite, HeuristicValue::Finite(_)) => false,
                    };
                    if !consistent {
                        r.violation(
                            ViolationKind::HeuristicConsistency,
                            s.values(),
                            format!("h_max {m} then {next} after {}", t.action(id).name),
                            Vec::new(),
                        );
                    }
                }
            }
            out.absorb(seed, r);
        }
    }
    out.notes.push(format!("sampled states {sampled}"));
    timer.finish(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_are_clean() {
        assert!(commutativity_suite(0..5, 20).0.is_ok());
        assert!(optimality_suite(0..5, LevelTieBreak::Canonical).is_ok());
        assert!(stubborn_suite(0..5, StubbornSuiteOptions::default()).is_ok());
        assert!(sp_suite(0..5, 3, LevelTieBreak::Canonical).is_ok());
        assert!(lemma_suite(0..5).is_ok());
        assert!(action_preserving_suite(0..5, 4, LevelTieBreak::Distinct).is_ok());
        assert!(heuristic_suite(0..5, 10).is_ok());
    }

    #[test]
    fn injected_fault_is_detected() {
        let r = stubborn_suite(
            0..20,
            StubbornSuiteOptions {
                inject_fault: true,
                ..Default::default()
            },
        );
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::A2));
    }

    #[test]
    fn empty_seed_range() {
        let r = lemma_suite(0..0);
        assert_eq!((r.tasks, r.checks), (0, 0));
        assert!(r.is_ok());
    }
}
