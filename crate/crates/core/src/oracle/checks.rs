//! Brute-force property checkers over explicit state spaces.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::space::{enumerate_state_space_from, OracleError, RawTask, StateSpaceGraph};
use crate::graphs::ActionAnalysis;
use crate::por::{full_expansion, is_left_commutative, ExpansionContext, Strategy, StrategyKind};
use crate::task::{ActionId, State, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    A1,
    A2,
    ActionPreserving,
    SpPermutation,
    SpReachability,
    CoreLemma,
    Commutativity,
    Optimality,
    Completeness,
    InvalidPlan,
    Admissibility,
    HeuristicOrder,
    HeuristicGoal,
    HeuristicConsistency,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub seed: Option<u64>,
    pub state: Vec<u32>,
    pub detail: String,
    /// Action names of a witness path, where one exists.
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: u64,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        for v in &mut self.violations {
            v.seed = Some(seed);
        }
        self
    }

    pub(crate) fn violation(&mut self, kind: ViolationKind, state: &[u32], detail: impl Into<String>, witness: Vec<String>) {
        self.violations.push(Violation {
            kind,
            seed: None,
            state: state.to_vec(),
            detail: detail.into(),
            witness,
        });
    }
}

fn names(task: &Task, path: &[ActionId]) -> Vec<String> {
    path.iter().map(|&a| task.action(a).name.clone()).collect()
}

/// Reconstructs the action path ending at `i` from `(parent, action)` links.
fn trace(parents: &[Option<(usize, ActionId)>], mut i: usize) -> Vec<ActionId> {
    let mut path = Vec::new();
    while let Some((p, a)) = parents[i] {
        path.push(a);
        i = p;
    }
    path.reverse();
    path
}

/// Expansion function as seen by a checker.
pub type Expander<'a> = dyn Fn(&ExpansionContext<'_>) -> Vec<ActionId> + 'a;

/// Wraps `strategy` for checkers. EC and SAC are undefined on goal states and
/// fall back to full expansion there.
pub fn strategy_expander<'a>(task: &'a Task, strategy: &'a Strategy) -> impl Fn(&ExpansionContext<'_>) -> Vec<ActionId> + 'a {
    move |ctx| {
        if task.is_goal(ctx.state) && matches!(strategy.kind(), StrategyKind::Ec | StrategyKind::Sac) {
            return full_expansion(task, ctx.state);
        }
        strategy.expand(task, ctx).expect("non-goal state")
    }
}

/// Checks A1 and A2 for candidate sets at states reachable from a fixed root.
pub struct StubbornChecker<'t> {
    task: &'t Task,
    raw: RawTask,
    space: StateSpaceGraph,
    goal_steps: Vec<Option<usize>>,
}

impl<'t> StubbornChecker<'t> {
    pub fn new(task: &'t Task, root: &State, max_states: usize) -> Result<Self, OracleError> {
        let space = enumerate_state_space_from(task, root, max_states)?;
        Ok(Self {
            task,
            raw: RawTask::new(task),
            goal_steps: space.goal_steps(),
            space,
        })
    }

    pub fn space(&self) -> &StateSpaceGraph {
        &self.space
    }

    fn steps_to_goal(&self, s: &[u32]) -> Option<usize> {
        let i = self
            .space
            .index_of(&State::new(s.to_vec()))
            .expect("state reachable from the checker root");
        self.goal_steps[i]
    }

    /// `horizon` bounds the length of the goal paths considered; `None`
    /// checks every goal path. Goal states are exempt.
    pub fn check(&self, s: &State, t: &[ActionId], horizon: Option<usize>) -> Report {
        let mut report = Report::default();
        if self.raw.is_goal(s.values()) {
            return report;
        }
        let in_t: HashSet<usize> = t.iter().map(|a| a.0).collect();
        let outside: Vec<usize> = (0..self.raw.ops.len()).filter(|a| !in_t.contains(a)).collect();
        self.check_a2(s, &outside, horizon, &mut report);
        for &b in t {
            self.check_a1(s, b.0, &outside, horizon, &mut report);
        }
        report
    }

    fn check_a2(&self, s: &State, outside: &[usize], horizon: Option<usize>, report: &mut Report) {
        report.checks += 1;
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::from([(s.values().to_vec(), 0)]);
        let mut nodes: Vec<(Vec<u32>, usize)> = vec![(s.values().to_vec(), 0)];
        let mut parents = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (u, depth) = nodes[i].clone();
            if horizon.is_some_and(|h| depth >= h) {
                continue;
            }
            for &a in outside {
                let Some(next) = self.raw.step(&u, a) else { continue };
                if seen.contains_key(&next) {
                    continue;
                }
                let j = nodes.len();
                seen.insert(next.clone(), j);
                parents.push(Some((i, ActionId(a))));
                if self.raw.is_goal(&next) {
                    report.violation(
                        ViolationKind::A2,
                        s.values(),
                        "goal reached without any member of T",
                        names(self.task, &trace(&parents, j)),
                    );
                    return;
                }
                nodes.push((next, depth + 1));
                queue.push_back(j);
            }
        }
    }

    /// Explores pairs `(u, v)` where `u` follows a non-T prefix from `s` and
    /// `v` follows `b` and then the same prefix (`None` once invalid).
    fn check_a1(&self, s: &State, b: usize, outside: &[usize], horizon: Option<usize>, report: &mut Report) {
        report.checks += 1;
        type Pair = (Vec<u32>, Option<Vec<u32>>);
        let root: Pair = (s.values().to_vec(), self.raw.step(s.values(), b));
        let mut seen: HashSet<Pair> = HashSet::from([root.clone()]);
        let mut nodes: Vec<(Pair, usize)> = vec![(root, 0)];
        let mut parents: Vec<Option<(usize, ActionId)>> = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let ((u, v), depth) = nodes[i].clone();
            if let Some(after_b) = self.raw.step(&u, b) {
                let fits = |steps: usize| horizon.is_none_or(|h| depth + 1 + steps <= h);
                if self.steps_to_goal(&after_b).is_some_and(fits) && v.as_ref() != Some(&after_b) {
                    let mut witness = names(self.task, &trace(&parents, i));
                    witness.push(self.task.action(ActionId(b)).name.clone());
                    let detail = match v {
                        None => "member cannot be moved to the front: reordered path is invalid",
                        Some(_) => "member moved to the front reaches a different state",
                    };
                    report.violation(ViolationKind::A1, s.values(), detail, witness);
                    return;
                }
            }
            if horizon.is_some_and(|h| depth + 1 >= h) {
                continue;
            }
            for &a in outside {
                let Some(u2) = self.raw.step(&u, a) else { continue };
                let v2 = v.as_ref().and_then(|v| self.raw.step(v, a));
                let pair = (u2, v2);
                if seen.insert(pair.clone()) {
                    nodes.push((pair, depth + 1));
                    parents.push(Some((i, ActionId(a))));
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
    }
}

/// A1/A2 check of `t` at `s`, enumerating the space reachable from `s`.
pub fn check_stubborn_conditions(
    task: &Task,
    s: &State,
    t: &[ActionId],
    horizon: Option<usize>,
    max_states: usize,
) -> Result<Report, OracleError> {
    Ok(StubbornChecker::new(task, s, max_states)?.check(s, t, horizon))
}

/// States expanded by an exhaustive breadth-first traversal of the reduced
/// graph that treats goal states as leaves. Each state is expanded once,
/// with the context of its first generation.
pub fn reduced_expanded_states(task: &Task, expander: &Expander<'_>, max_states: usize) -> Result<Vec<State>, OracleError> {
    let mut seen = HashSet::from([task.initial().clone()]);
    let mut queue = VecDeque::from([(task.initial().clone(), None)]);
    let mut expanded = Vec::new();
    while let Some((s, via)) = queue.pop_front() {
        if task.is_goal(&s) {
            continue;
        }
        let ctx = ExpansionContext {
            state: &s,
            generating_action: via,
        };
        for a in expander(&ctx) {
            let next = crate::task::apply_unchecked(&s, task.action(a));
            if seen.insert(next.clone()) {
                if seen.len() > max_states {
                    return Err(OracleError::TooLarge { limit: max_states });
                }
                queue.push_back((next, Some(a)));
            }
        }
        expanded.push(s);
    }
    Ok(expanded)
}

/// States reachable in the reduced graph where the expansion set may depend
/// on the generating action; explored over `(state, generating action)`.
pub fn reduced_reachable_states(task: &Task, expander: &Expander<'_>) -> HashSet<State> {
    let root = (task.initial().clone(), None);
    let mut seen: HashSet<(State, Option<ActionId>)> = HashSet::from([root.clone()]);
    let mut queue = VecDeque::from([root]);
    while let Some((s, via)) = queue.pop_front() {
        let ctx = ExpansionContext {
            state: &s,
            generating_action: via,
        };
        for a in expander(&ctx) {
            let next = (crate::task::apply_unchecked(&s, task.action(a)), Some(a));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().map(|(s, _)| s).collect()
}

type Multiset = Vec<u8>;

/// `(final state, action multiset)` of every path from the initial state of
/// length at most `horizon`; with `goal_only`, only paths ending in a goal.
fn path_signatures(
    task: &Task,
    raw: &RawTask,
    horizon: usize,
    expander: Option<&Expander<'_>>,
    goal_only: bool,
) -> HashSet<(Vec<u32>, Multiset)> {
    let n = raw.ops.len();
    let root = (task.initial().values().to_vec(), vec![0u8; n], None::<usize>);
    let mut out = HashSet::new();
    let mut layer: HashSet<(Vec<u32>, Multiset, Option<usize>)> = HashSet::from([root]);
    for depth in 0..=horizon {
        for (s, m, _) in &layer {
            if !goal_only || raw.is_goal(s) {
                out.insert((s.clone(), m.clone()));
            }
        }
        if depth == horizon {
            break;
        }
        let mut next = HashSet::new();
        for (s, m, via) in &layer {
            let actions: Vec<usize> = match expander {
                None => (0..n).filter(|&a| raw.applicable(s, a)).collect(),
                Some(e) => {
                    let state = State::new(s.clone());
                    let ctx = ExpansionContext {
                        state: &state,
                        generating_action: via.map(ActionId),
                    };
                    e(&ctx).into_iter().map(|a| a.0).collect()
                }
            };
            for a in actions {
                let mut m2 = m.clone();
                m2[a] += 1;
                let key = if expander.is_some() { Some(a) } else { None };
                next.insert((raw.apply(s, a), m2, key));
            }
        }
        layer = next;
    }
    out
}

fn multiset_names(task: &Task, m: &[u8]) -> Vec<String> {
    m.iter()
        .enumerate()
        .flat_map(|(a, &k)| std::iter::repeat_n(task.action(ActionId(a)).name.clone(), k as usize))
        .collect()
}

/// Every full-graph solution path of length at most `horizon` has a
/// reduced-graph solution path with the same action multiset and end state.
pub fn check_action_preserving(task: &Task, expander: &Expander<'_>, horizon: usize) -> Report {
    let raw = RawTask::new(task);
    let full = path_signatures(task, &raw, horizon, None, true);
    let reduced = path_signatures(task, &raw, horizon, Some(expander), true);
    let mut report = Report::default();
    let mut missing: Vec<_> = full.difference(&reduced).collect();
    missing.sort();
    report.checks = full.len() as u64;
    for (s, m) in missing {
        report.violation(
            ViolationKind::ActionPreserving,
            s,
            "no reduced solution path with this action multiset",
            multiset_names(task, m),
        );
    }
    report
}

/// Every path of length at most `horizon` has a permutation that is a path
/// of the SP search space and ends in the same state.
pub fn check_sp_permutation(task: &Task, sp: &Strategy, horizon: usize) -> Report {
    assert_eq!(sp.kind(), StrategyKind::Sp, "expects an SP strategy");
    let raw = RawTask::new(task);
    let expander = strategy_expander(task, sp);
    let full = path_signatures(task, &raw, horizon, None, false);
    let reduced = path_signatures(task, &raw, horizon, Some(&expander), false);
    let mut report = Report {
        checks: full.len() as u64,
        ..Default::default()
    };
    let mut missing: Vec<_> = full.difference(&reduced).collect();
    missing.sort();
    for (s, m) in missing {
        report.violation(
            ViolationKind::SpPermutation,
            s,
            "no SP path with this action multiset",
            multiset_names(task, m),
        );
    }
    report
}

/// For each state of `space` and each action `a` inapplicable there, no
/// path from the state avoiding the action core of `{a}` enables `a`.
pub fn check_core_lemma(task: &Task, space: &StateSpaceGraph) -> Report {
    let raw = RawTask::new(task);
    let analysis = ActionAnalysis::new(task);
    let mut report = Report::default();
    for s in &space.states {
        for a in 0..raw.ops.len() {
            if raw.applicable(s.values(), a) {
                continue;
            }
            report.checks += 1;
            let core = analysis.core(task, s, &[ActionId(a)]);
            let allowed: Vec<usize> = (0..raw.ops.len()).filter(|&o| !core.contains(ActionId(o))).collect();
            let mut seen = HashSet::from([s.values().to_vec()]);
            let mut nodes = vec![s.values().to_vec()];
            let mut parents = vec![None];
            let mut queue = VecDeque::from([0usize]);
            'bfs: while let Some(i) = queue.pop_front() {
                let u = nodes[i].clone();
                for &o in &allowed {
                    let Some(next) = raw.step(&u, o) else { continue };
                    if !seen.insert(next.clone()) {
                        continue;
                    }
                    nodes.push(next.clone());
                    parents.push(Some((i, ActionId(o))));
                    if raw.applicable(&next, a) {
                        let mut witness = names(task, &trace(&parents, nodes.len() - 1));
                        witness.push(task.action(ActionId(a)).name.clone());
                        report.violation(ViolationKind::CoreLemma, s.values(), "action enabled outside its core", witness);
                        break 'bfs;
                    }
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CommutativityCounts {
    pub both_true: u64,
    pub both_false: u64,
    pub syntactic_only: u64,
    pub semantic_only: u64,
}

/// Samples `(s, a, b)` with `(a, b)` valid at a uniformly random state `s`
/// and compares the syntactic test with double application.
pub fn check_left_commutativity_equivalence(task: &Task, samples: usize, seed: u64) -> (Report, CommutativityCounts) {
    let raw = RawTask::new(task);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::default();
    let mut counts = CommutativityCounts::default();
    let domains: Vec<u32> = task.variables().iter().map(|v| v.domain_size()).collect();
    let n = raw.ops.len();
    if n == 0 {
        return (report, counts);
    }
    let mut attempts = 0;
    while (report.checks as usize) < samples && attempts < samples * 50 {
        attempts += 1;
        let s: Vec<u32> = domains.iter().map(|&d| rng.gen_range(0..d)).collect();
        let first: Vec<usize> = (0..n).filter(|&a| raw.applicable(&s, a)).collect();
        if first.is_empty() {
            continue;
        }
        let a = first[rng.gen_range(0..first.len())];
        let sa = raw.apply(&s, a);
        let second: Vec<usize> = (0..n).filter(|&b| raw.applicable(&sa, b)).collect();
        if second.is_empty() {
            continue;
        }
        let b = second[rng.gen_range(0..second.len())];
        report.checks += 1;
        let end = raw.apply(&sa, b);
        let semantic = raw.step(&s, b).and_then(|sb| raw.step(&sb, a)).is_some_and(|e| e == end);
        let state = State::new(s.clone());
        let syntactic = is_left_commutative(task, &state, ActionId(a), ActionId(b)).expect("valid path");
        match (syntactic, semantic) {
            (true, true) => counts.both_true += 1,
            (false, false) => counts.both_false += 1,
            (true, false) => counts.syntactic_only += 1,
            (false, true) => counts.semantic_only += 1,
        }
        if syntactic != semantic {
            report.violation(
                ViolationKind::Commutativity,
                &s,
                format!("syntactic {syntactic}, semantic {semantic}"),
                names(task, &[ActionId(a), ActionId(b)]),
            );
        }
    }
    (report, counts)
}
