//! Explicit reachable state spaces. Applicability and application are
//! re-implemented here over raw vectors, independent of `task`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use thiserror::Error;

use crate::task::{ActionId, State, Task};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("reachable state space exceeds {limit} states")]
    TooLarge { limit: usize },
}

/// Raw operator: variable indices and values, no invariants.
#[derive(Debug, Clone)]
pub(crate) struct RawOp {
    pub pre: Vec<(usize, u32)>,
    pub eff: Vec<(usize, u32)>,
    pub cost: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct RawTask {
    pub ops: Vec<RawOp>,
    pub goal: Vec<(usize, u32)>,
}

impl RawTask {
    pub fn new(task: &Task) -> Self {
        let raw = |p: &crate::task::PartialAssignment| p.iter().map(|(v, x)| (v.0, x)).collect();
        Self {
            ops: task
                .actions()
                .iter()
                .map(|a| RawOp {
                    pre: raw(&a.pre),
                    eff: raw(&a.eff),
                    cost: u64::from(a.cost),
                })
                .collect(),
            goal: raw(task.goal()),
        }
    }

    pub fn applicable(&self, s: &[u32], a: usize) -> bool {
        self.ops[a].pre.iter().all(|&(v, x)| s[v] == x)
    }

    pub fn apply(&self, s: &[u32], a: usize) -> Vec<u32> {
        let mut out = s.to_vec();
        for &(v, x) in &self.ops[a].eff {
            out[v] = x;
        }
        out
    }

    /// `None` when `a` is not applicable.
    pub fn step(&self, s: &[u32], a: usize) -> Option<Vec<u32>> {
        self.applicable(s, a).then(|| self.apply(s, a))
    }

    pub fn is_goal(&self, s: &[u32]) -> bool {
        self.goal.iter().all(|&(v, x)| s[v] == x)
    }
}

/// Reachable subgraph from a root state; one edge per applicable action.
#[derive(Debug, Clone)]
pub struct StateSpaceGraph {
    pub states: Vec<State>,
    /// `(from, to, action)`.
    pub edges: Vec<(usize, usize, ActionId)>,
    pub initial: usize,
    pub goals: Vec<usize>,
    index: HashMap<State, usize>,
    out: Vec<Vec<(ActionId, usize)>>,
    is_goal: Vec<bool>,
}

impl StateSpaceGraph {
    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn successors(&self, i: usize) -> &[(ActionId, usize)] {
        &self.out[i]
    }

    /// Actions labelling the outgoing edges of `i`.
    pub fn expansion(&self, i: usize) -> Vec<ActionId> {
        self.out[i].iter().map(|&(a, _)| a).collect()
    }

    pub fn is_goal(&self, i: usize) -> bool {
        self.is_goal[i]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Fewest steps from each state to a goal state.
    pub fn goal_steps(&self) -> Vec<Option<usize>> {
        let mut rev = vec![Vec::new(); self.len()];
        for &(f, t, _) in &self.edges {
            rev[t].push(f);
        }
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for &g in &self.goals {
            dist[g] = Some(0);
            queue.push_back(g);
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &p in &rev[u] {
                if dist[p].is_none() {
                    dist[p] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        dist
    }
}

/// Exact reachable graph from the task's initial state.
pub fn enumerate_state_space(task: &Task, max_states: usize) -> Result<StateSpaceGraph, OracleError> {
    enumerate_state_space_from(task, task.initial(), max_states)
}

pub fn enumerate_state_space_from(task: &Task, root: &State, max_states: usize) -> Result<StateSpaceGraph, OracleError> {
    let raw = RawTask::new(task);
    let mut g = StateSpaceGraph {
        states: vec![root.clone()],
        edges: Vec::new(),
        initial: 0,
        goals: Vec::new(),
        index: HashMap::from([(root.clone(), 0)]),
        out: vec![Vec::new()],
        is_goal: Vec::new(),
    };
    if max_states == 0 {
        return Err(OracleError::TooLarge { limit: 0 });
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let s = g.states[i].values().to_vec();
        for a in 0..raw.ops.len() {
            let Some(next) = raw.step(&s, a) else { continue };
            let next = State::new(next);
            let j = match g.index.get(&next) {
                Some(&j) => j,
                None => {
                    if g.states.len() >= max_states {
                        return Err(OracleError::TooLarge { limit: max_states });
                    }
                    let j = g.states.len();
                    g.states.push(next.clone());
                    g.index.insert(next, j);
                    g.out.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            g.edges.push((i, j, ActionId(a)));
            g.out[i].push((ActionId(a), j));
        }
    }
    g.is_goal = g.states.iter().map(|s| raw.is_goal(s.values())).collect();
    g.goals = (0..g.states.len()).filter(|&i| g.is_goal[i]).collect();
    Ok(g)
}

/// Cheapest plan cost by Dijkstra over the full reachable graph; `None` when
/// no goal state is reachable.
pub fn brute_force_optimal_cost(task: &Task, max_states: usize) -> Result<Option<u64>, OracleError> {
    let g = enumerate_state_space(task, max_states)?;
    let raw = RawTask::new(task);
    let mut dist = vec![u64::MAX; g.len()];
    let mut heap = BinaryHeap::from([Reverse((0u64, g.initial))]);
    dist[g.initial] = 0;
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if g.is_goal(u) {
            return Ok(Some(d));
        }
        for &(a, v) in g.successors(u) {
            let nd = d + raw.ops[a.0].cost;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    Ok(None)
}
