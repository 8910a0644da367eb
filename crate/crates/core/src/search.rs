//! A*, greedy best-first and breadth-first search over a reduced state space.
//!
//! Goal tests happen when a node is popped. Each pop counts as one expansion
//! (including the goal pop) and each successor produced counts as one
//! generation, duplicates included.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::heuristics::{Heuristic, HeuristicValue};
use crate::por::{ExpansionContext, PorError, Strategy};
use crate::task::{apply_unchecked, ActionId, Plan, State, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchAlgorithm {
    AStar,
    Gbfs,
    Bfs,
}

impl SearchAlgorithm {
    pub const ALL: [SearchAlgorithm; 3] = [Self::AStar, Self::Gbfs, Self::Bfs];

    pub fn name(self) -> &'static str {
        match self {
            Self::AStar => "astar",
            Self::Gbfs => "gbfs",
            Self::Bfs => "bfs",
        }
    }
}

impl fmt::Display for SearchAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown search `{s}` (expected astar, gbfs or bfs)"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_expansions: Option<u64>,
    pub max_time: Option<Duration>,
    /// Cap on stored search nodes.
    pub max_stored: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    Nodes,
    Time,
    Memory,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Nodes => "nodes",
            Self::Time => "time",
            Self::Memory => "memory",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Solved(Plan),
    /// The reduced reachable space was exhausted.
    Unsolvable,
    ResourceLimit(LimitKind),
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Solved(_) => "solved",
            Self::Unsolvable => "unsolvable",
            Self::ResourceLimit(_) => "resource_limit",
        }
    }

    pub fn plan(&self) -> Option<&Plan> {
        match self {
            Self::Solved(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub expanded: u64,
    pub generated: u64,
    pub wall_time: Duration,
    pub peak_open: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("breadth-first search requires unit action costs")]
    NonUnitCost,
    #[error(transparent)]
    Por(#[from] PorError),
}

#[derive(Debug, Clone)]
struct Node {
    state: State,
    g: u64,
    parent: Option<usize>,
    action: Option<ActionId>,
}

type Key = (State, Option<u32>);

struct Space<'a> {
    task: &'a Task,
    strategy: &'a Strategy,
    limits: SearchLimits,
    start: Instant,
    nodes: Vec<Node>,
    index: HashMap<Key, usize>,
    expanded: u64,
    generated: u64,
    peak_open: usize,
}

enum Lookup {
    New(usize),
    Improved(usize),
    Duplicate,
}

impl<'a> Space<'a> {
    fn new(task: &'a Task, strategy: &'a Strategy, limits: SearchLimits) -> Self {
        let root = Node {
            state: task.initial().clone(),
            g: 0,
            parent: None,
            action: None,
        };
        let mut index = HashMap::new();
        index.insert((root.state.clone(), None), 0);
        Self {
            task,
            strategy,
            limits,
            start: Instant::now(),
            nodes: vec![root],
            index,
            expanded: 0,
            generated: 0,
            peak_open: 1,
        }
    }

    /// Counts an expansion, or reports the limit it would exceed.
    fn begin_expansion(&mut self) -> Result<(), LimitKind> {
        if self.limits.max_expansions.is_some_and(|m| self.expanded >= m) {
            return Err(LimitKind::Nodes);
        }
        if self.limits.max_time.is_some_and(|t| self.start.elapsed() >= t) {
            return Err(LimitKind::Time);
        }
        self.expanded += 1;
        Ok(())
    }

    fn successors(&mut self, id: usize) -> Result<Vec<(ActionId, State, u64)>, PorError> {
        let node = &self.nodes[id];
        let ctx = ExpansionContext {
            state: &node.state,
            generating_action: node.action,
        };
        let set = self.strategy.expand(self.task, &ctx)?;
        self.generated += set.len() as u64;
        Ok(set
            .into_iter()
            .map(|a| {
                let op = self.task.action(a);
                (a, apply_unchecked(&node.state, op), node.g + u64::from(op.cost))
            })
            .collect())
    }

    /// Records a successor. `reopen` lets a strictly cheaper path replace the
    /// stored one.
    fn insert(&mut self, parent: usize, action: ActionId, state: State, g: u64, reopen: bool) -> Result<Lookup, LimitKind> {
        let key = (state, self.strategy.closed_key_level(Some(action)));
        if let Some(&id) = self.index.get(&key) {
            let node = &mut self.nodes[id];
            if reopen && g < node.g {
                node.g = g;
                node.parent = Some(parent);
                node.action = Some(action);
                return Ok(Lookup::Improved(id));
            }
            return Ok(Lookup::Duplicate);
        }
        if self.limits.max_stored.is_some_and(|m| self.nodes.len() >= m) {
            return Err(LimitKind::Memory);
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            state: key.0.clone(),
            g,
            parent: Some(parent),
            action: Some(action),
        });
        self.index.insert(key, id);
        Ok(Lookup::New(id))
    }

    fn plan(&self, mut id: usize) -> Plan {
        let cost = self.nodes[id].g;
        let mut steps = Vec::new();
        while let (Some(p), Some(a)) = (self.nodes[id].parent, self.nodes[id].action) {
            steps.push(a);
            id = p;
        }
        steps.reverse();
        Plan { steps, cost }
    }

    fn finish(self, outcome: Outcome) -> SearchResult {
        SearchResult {
            outcome,
            expanded: self.expanded,
            generated: self.generated,
            wall_time: self.start.elapsed(),
            peak_open: self.peak_open,
        }
    }
}

/// A* with ties broken by lower f, then higher g, then insertion order.
/// Nodes whose heuristic is infinite are never queued.
pub fn astar(task: &Task, heuristic: &Heuristic, strategy: &Strategy, limits: SearchLimits) -> Result<SearchResult, SearchError> {
    let mut sp = Space::new(task, strategy, limits);
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;
    if let HeuristicValue::Finite(h) = heuristic.evaluate(task, task.initial()) {
        open.push((Reverse(h), 0u64, Reverse(seq), 0usize));
    }
    while let Some((_, g, _, id)) = open.pop() {
        if sp.nodes[id].g != g {
            continue;
        }
        if let Err(kind) = sp.begin_expansion() {
            return Ok(sp.finish(Outcome::ResourceLimit(kind)));
        }
        if task.is_goal(&sp.nodes[id].state) {
            let plan = sp.plan(id);
            return Ok(sp.finish(Outcome::Solved(plan)));
        }
        for (a, state, g2) in sp.successors(id)? {
            let h = heuristic.evaluate(task, &state);
            let child = match sp.insert(id, a, state, g2, true) {
                Ok(Lookup::New(c) | Lookup::Improved(c)) => c,
                Ok(Lookup::Duplicate) => continue,
                Err(kind) => return Ok(sp.finish(Outcome::ResourceLimit(kind))),
            };
            if let HeuristicValue::Finite(h) = h {
                seq += 1;
                open.push((Reverse(g2 + h), g2, Reverse(seq), child));
            }
        }
        sp.peak_open = sp.peak_open.max(open.len());
    }
    Ok(sp.finish(Outcome::Unsolvable))
}

/// Greedy best-first on h alone, FIFO among equal h, no reopening.
pub fn gbfs(task: &Task, heuristic: &Heuristic, strategy: &Strategy, limits: SearchLimits) -> Result<SearchResult, SearchError> {
    let mut sp = Space::new(task, strategy, limits);
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;
    if let HeuristicValue::Finite(h) = heuristic.evaluate(task, task.initial()) {
        open.push(Reverse((h, seq, 0usize)));
    }
    while let Some(Reverse((_, _, id))) = open.pop() {
        if let Err(kind) = sp.begin_expansion() {
            return Ok(sp.finish(Outcome::ResourceLimit(kind)));
        }
        if task.is_goal(&sp.nodes[id].state) {
            let plan = sp.plan(id);
            return Ok(sp.finish(Outcome::Solved(plan)));
        }
        for (a, state, g2) in sp.successors(id)? {
            let h = heuristic.evaluate(task, &state);
            let child = match sp.insert(id, a, state, g2, false) {
                Ok(Lookup::New(c)) => c,
                Ok(_) => continue,
                Err(kind) => return Ok(sp.finish(Outcome::ResourceLimit(kind))),
            };
            if let HeuristicValue::Finite(h) = h {
                seq += 1;
                open.push(Reverse((h, seq, child)));
            }
        }
        sp.peak_open = sp.peak_open.max(open.len());
    }
    Ok(sp.finish(Outcome::Unsolvable))
}

/// FIFO breadth-first search; first generated copy of a state wins.
pub fn bfs(task: &Task, strategy: &Strategy, limits: SearchLimits) -> Result<SearchResult, SearchError> {
    if !task.is_unit_cost() {
        return Err(SearchError::NonUnitCost);
    }
    let mut sp = Space::new(task, strategy, limits);
    let mut open = VecDeque::from([0usize]);
    while let Some(id) = open.pop_front() {
        if let Err(kind) = sp.begin_expansion() {
            return Ok(sp.finish(Outcome::ResourceLimit(kind)));
        }
        if task.is_goal(&sp.nodes[id].state) {
            let plan = sp.plan(id);
            return Ok(sp.finish(Outcome::Solved(plan)));
        }
        for (a, state, g2) in sp.successors(id)? {
            match sp.insert(id, a, state, g2, false) {
                Ok(Lookup::New(c)) => open.push_back(c),
                Ok(_) => {}
                Err(kind) => return Ok(sp.finish(Outcome::ResourceLimit(kind))),
            }
        }
        sp.peak_open = sp.peak_open.max(open.len());
    }
    Ok(sp.finish(Outcome::Unsolvable))
}

/// Dispatches on `algorithm`; `heuristic` is ignored by BFS.
pub fn search(
    task: &Task,
    algorithm: SearchAlgorithm,
    heuristic: &Heuristic,
    strategy: &Strategy,
    limits: SearchLimits,
) -> Result<SearchResult, SearchError> {
    match algorithm {
        SearchAlgorithm::AStar => astar(task, heuristic, strategy, limits),
        SearchAlgorithm::Gbfs => gbfs(task, heuristic, strategy, limits),
        SearchAlgorithm::Bfs => bfs(task, strategy, limits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::toy2;
    use crate::graphs::LevelTieBreak;
    use crate::heuristics::HeuristicKind;
    use crate::por::{SpClosedMode, StrategyConfig, StrategyKind};
    use crate::task::{Action, PartialAssignment, Variable};

    fn strat(t: &Task, k: StrategyKind, tb: LevelTieBreak) -> Strategy {
        Strategy::new(
            t,
            k,
            StrategyConfig {
                sp_closed: SpClosedMode::State,
                level_tie_break: tb,
            },
        )
        .unwrap()
    }

    fn solved_cost(r: &SearchResult) -> u64 {
        r.outcome.plan().expect("solved").cost
    }

    #[test]
    fn toy2_bfs_golden_counts() {
        let t = toy2();
        for tb in [LevelTieBreak::Canonical, LevelTieBreak::Distinct] {
            let lim = SearchLimits::default();
            assert_eq!(bfs(&t, &strat(&t, StrategyKind::None, tb), lim).unwrap().expanded, 4);
            assert_eq!(bfs(&t, &strat(&t, StrategyKind::Ec, tb), lim).unwrap().expanded, 3);
            assert_eq!(bfs(&t, &strat(&t, StrategyKind::Sp, tb), lim).unwrap().expanded, 4);
            assert_eq!(bfs(&t, &strat(&t, StrategyKind::Sac, tb), lim).unwrap().expanded, 3);
        }
    }

    #[test]
    fn toy2_astar() {
        let t = toy2();
        let hmax = Heuristic::new(&t, HeuristicKind::HMax);
        let none = strat(&t, StrategyKind::None, LevelTieBreak::Canonical);
        let r = astar(&t, &hmax, &none, SearchLimits::default()).unwrap();
        assert_eq!(solved_cost(&r), 2);
        assert!(r.expanded >= 3);
        let zero = Heuristic::new(&t, HeuristicKind::Zero);
        let ec = strat(&t, StrategyKind::Ec, LevelTieBreak::Canonical);
        assert_eq!(astar(&t, &zero, &ec, SearchLimits::default()).unwrap().expanded, 3);
    }

    #[test]
    fn toy2_gbfs() {
        let t = toy2();
        let hadd = Heuristic::new(&t, HeuristicKind::HAdd);
        let sac = strat(&t, StrategyKind::Sac, LevelTieBreak::Canonical);
        assert_eq!(solved_cost(&gbfs(&t, &hadd, &sac, SearchLimits::default()).unwrap()), 2);
        let gc = Heuristic::new(&t, HeuristicKind::GoalCount);
        let sp = strat(&t, StrategyKind::Sp, LevelTieBreak::Distinct);
        let r = gbfs(&t, &gc, &sp, SearchLimits::default()).unwrap();
        assert_eq!(solved_cost(&r), 2);
        assert_eq!(r.expanded, 4);
    }

    #[test]
    fn unreachable_goal_is_unsolvable() {
        let t = Task::new(
            vec![Variable::with_domain("x", 3)],
            vec![Action::from_pairs(0, "a", &[(0, 0)], &[(0, 1)], 1).unwrap()],
            State::new(vec![0]),
            PartialAssignment::from_pairs(&[(0, 2)]).unwrap(),
            false,
        )
        .unwrap();
        let zero = Heuristic::new(&t, HeuristicKind::Zero);
        for k in StrategyKind::ALL {
            let s = strat(&t, k, LevelTieBreak::Canonical);
            assert_eq!(bfs(&t, &s, SearchLimits::default()).unwrap().outcome, Outcome::Unsolvable);
            assert_eq!(astar(&t, &zero, &s, SearchLimits::default()).unwrap().outcome, Outcome::Unsolvable);
            assert_eq!(gbfs(&t, &zero, &s, SearchLimits::default()).unwrap().outcome, Outcome::Unsolvable);
        }
    }

    #[test]
    fn limits() {
        let t = toy2();
        let none = strat(&t, StrategyKind::None, LevelTieBreak::Canonical);
        let nodes = SearchLimits {
            max_expansions: Some(1),
            ..Default::default()
        };
        assert_eq!(
            bfs(&t, &none, nodes).unwrap().outcome,
            Outcome::ResourceLimit(LimitKind::Nodes)
        );
        let mem = SearchLimits {
            max_stored: Some(2),
            ..Default::default()
        };
        assert_eq!(
            bfs(&t, &none, mem).unwrap().outcome,
            Outcome::ResourceLimit(LimitKind::Memory)
        );
        let time = SearchLimits {
            max_time: Some(Duration::ZERO),
            ..Default::default()
        };
        assert_eq!(
            bfs(&t, &none, time).unwrap().outcome,
            Outcome::ResourceLimit(LimitKind::Time)
        );
    }

    #[test]
    fn bfs_rejects_general_costs() {
        let t = Task::new(
            vec![Variable::with_domain("x", 2)],
            vec![Action::from_pairs(0, "a", &[], &[(0, 1)], 3).unwrap()],
            State::new(vec![0]),
            PartialAssignment::from_pairs(&[(0, 1)]).unwrap(),
            true,
        )
        .unwrap();
        let none = strat(&t, StrategyKind::None, LevelTieBreak::Canonical);
        assert_eq!(bfs(&t, &none, SearchLimits::default()), Err(SearchError::NonUnitCost));
    }

    #[test]
    fn astar_reopens_cheaper_path() {
        // direct: cost 5; detour: 1 + 1
        let t = Task::new(
            vec![Variable::with_domain("x", 3)],
            vec![
                Action::from_pairs(0, "direct", &[(0, 0)], &[(0, 2)], 5).unwrap(),
                Action::from_pairs(1, "hop", &[(0, 0)], &[(0, 1)], 1).unwrap(),
                Action::from_pairs(2, "land", &[(0, 1)], &[(0, 2)], 1).unwrap(),
            ],
            State::new(vec![0]),
            PartialAssignment::from_pairs(&[(0, 2)]).unwrap(),
            true,
        )
        .unwrap();
        let zero = Heuristic::new(&t, HeuristicKind::Zero);
        let none = strat(&t, StrategyKind::None, LevelTieBreak::Canonical);
        let r = astar(&t, &zero, &none, SearchLimits::default()).unwrap();
        assert_eq!(r.outcome.plan().unwrap().steps, vec![ActionId(1), ActionId(2)]);
        assert_eq!(solved_cost(&r), 2);
    }
}
