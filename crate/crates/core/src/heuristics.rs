//! Forward-search heuristics over delete-relaxed fact costs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::task::{State, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeuristicValue {
    Finite(u64),
    Infinite,
}

impl HeuristicValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Self::Infinite
    }
}

impl fmt::Display for HeuristicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeuristicKind {
    /// Constant 0; turns A* into uniform-cost search.
    Zero,
    Blind,
    GoalCount,
    HMax,
    HAdd,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 5] = [Self::Zero, Self::Blind, Self::GoalCount, Self::HMax, Self::HAdd];

    pub fn name(self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Blind => "blind",
            Self::GoalCount => "goalcount",
            Self::HMax => "hmax",
            Self::HAdd => "hadd",
        }
    }

    pub fn is_admissible(self) -> bool {
        matches!(self, Self::Zero | Self::Blind | Self::HMax)
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeuristicKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown heuristic `{s}` (expected zero, blind, goalcount, hmax or hadd)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Combine {
    Max,
    Sum,
}

/// Precomputed fact indexes for one task. Evaluation is pure.
#[derive(Debug, Clone)]
pub struct Heuristic {
    kind: HeuristicKind,
    /// First fact index of each variable.
    offsets: Vec<usize>,
    num_facts: usize,
    /// Per action: precondition facts.
    pre_facts: Vec<Vec<usize>>,
    /// Per action: effect facts.
    eff_facts: Vec<Vec<usize>>,
    cost: Vec<u64>,
    /// Per fact: actions with that fact as precondition.
    consumers: Vec<Vec<usize>>,
    /// Actions with empty precondition.
    unconditional: Vec<usize>,
    goal_facts: Vec<usize>,
    min_cost: u64,
}

impl Heuristic {
    pub fn new(task: &Task, kind: HeuristicKind) -> Self {
        let mut offsets = Vec::with_capacity(task.num_variables());
        let mut num_facts = 0;
        for v in task.variables() {
            offsets.push(num_facts);
            num_facts += v.domain_size() as usize;
        }
        let fact = |var: usize, value: u32| offsets[var] + value as usize;
        let mut consumers = vec![Vec::new(); num_facts];
        let mut pre_facts = Vec::with_capacity(task.num_actions());
        let mut eff_facts = Vec::with_capacity(task.num_actions());
        let mut unconditional = Vec::new();
        for (i, a) in task.actions().iter().enumerate() {
            let pre: Vec<usize> = a.pre.iter().map(|(v, x)| fact(v.0, x)).collect();
            for &f in &pre {
                consumers[f].push(i);
            }
            if pre.is_empty() {
                unconditional.push(i);
            }
            pre_facts.push(pre);
            eff_facts.push(a.eff.iter().map(|(v, x)| fact(v.0, x)).collect());
        }
        let cost: Vec<u64> = task.actions().iter().map(|a| u64::from(a.cost)).collect();
        Self {
            kind,
            goal_facts: task.goal().iter().map(|(v, x)| fact(v.0, x)).collect(),
            min_cost: cost.iter().copied().min().unwrap_or(0),
            offsets,
            num_facts,
            pre_facts,
            eff_facts,
            cost,
            consumers,
            unconditional,
        }
    }

    pub fn kind(&self) -> HeuristicKind {
        self.kind
    }

    pub fn evaluate(&self, task: &Task, state: &State) -> HeuristicValue {
        match self.kind {
            HeuristicKind::Zero => HeuristicValue::Finite(0),
            HeuristicKind::Blind => h_blind_with(task, state, self.min_cost),
            HeuristicKind::GoalCount => h_goal_count(task, state),
            HeuristicKind::HMax => self.relaxed(state, Combine::Max),
            HeuristicKind::HAdd => self.relaxed(state, Combine::Sum),
        }
    }

    /// Dijkstra over facts; an action fires once all its precondition facts
    /// are settled.
    fn relaxed(&self, state: &State, combine: Combine) -> HeuristicValue {
        let mut dist = vec![u64::MAX; self.num_facts];
        let mut settled = vec![false; self.num_facts];
        let mut remaining: Vec<usize> = self.pre_facts.iter().map(Vec::len).collect();
        let mut acc = vec![0u64; self.pre_facts.len()];
        let mut heap = BinaryHeap::new();
        for (var, &value) in state.values().iter().enumerate() {
            let f = self.offsets[var] + value as usize;
            dist[f] = 0;
            heap.push(Reverse((0u64, f)));
        }
        let fire = |a: usize, base: u64, dist: &mut Vec<u64>, heap: &mut BinaryHeap<Reverse<(u64, usize)>>| {
            let c = base.saturating_add(self.cost[a]);
            for &f in &self.eff_facts[a] {
                if c < dist[f] {
                    dist[f] = c;
                    heap.push(Reverse((c, f)));
                }
            }
        };
        for &a in &self.unconditional {
            fire(a, 0, &mut dist, &mut heap);
        }
        while let Some(Reverse((d, f))) = heap.pop() {
            if settled[f] || d > dist[f] {
                continue;
            }
            settled[f] = true;
            for &a in &self.consumers[f] {
                acc[a] = match combine {
                    Combine::Max => acc[a].max(d),
                    Combine::Sum => acc[a].saturating_add(d),
                };
                remaining[a] -= 1;
                if remaining[a] == 0 {
                    fire(a, acc[a], &mut dist, &mut heap);
                }
            }
        }
        let mut total = 0u64;
        for &g in &self.goal_facts {
            if dist[g] == u64::MAX {
                return HeuristicValue::Infinite;
            }
            total = match combine {
                Combine::Max => total.max(dist[g]),
                Combine::Sum => total.saturating_add(dist[g]),
            };
        }
        HeuristicValue::Finite(total)
    }
}

fn h_blind_with(task: &Task, state: &State, min_cost: u64) -> HeuristicValue {
    HeuristicValue::Finite(if task.is_goal(state) { 0 } else { min_cost })
}

/// 0 on goal states, otherwise the cheapest action cost. Zero-cost actions
/// make this 0 so it stays admissible.
pub fn h_blind(task: &Task, state: &State) -> HeuristicValue {
    let min = task.actions().iter().map(|a| u64::from(a.cost)).min().unwrap_or(0);
    h_blind_with(task, state, min)
}

pub fn h_goal_count(task: &Task, state: &State) -> HeuristicValue {
    HeuristicValue::Finite(task.goal().iter().filter(|&(v, x)| state.get(v) != x).count() as u64)
}

pub fn h_max(task: &Task, state: &State) -> HeuristicValue {
    Heuristic::new(task, HeuristicKind::HMax).evaluate(task, state)
}

pub fn h_add(task: &Task, state: &State) -> HeuristicValue {
    Heuristic::new(task, HeuristicKind::HAdd).evaluate(task, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{toy2, toy3};
    use crate::oracle::random::{generate_random_task, RandomTaskSpec};
    use crate::task::{Action, PartialAssignment, Variable};
    use proptest::prelude::*;

    /// Iterate fact costs to a fixpoint with no priority queue.
    fn naive(task: &Task, s: &State, sum: bool) -> HeuristicValue {
        let mut cost: Vec<Vec<Option<u64>>> = task
            .variables()
            .iter()
            .map(|v| vec![None; v.domain_size() as usize])
            .collect();
        for (i, &x) in s.values().iter().enumerate() {
            cost[i][x as usize] = Some(0);
        }
        loop {
            let mut changed = false;
            for a in task.actions() {
                let mut base = Some(0u64);
                for (v, x) in a.pre.iter() {
                    base = match (base, cost[v.0][x as usize]) {
                        (Some(b), Some(c)) => Some(if sum { b + c } else { b.max(c) }),
                        _ => None,
                    };
                }
                let Some(b) = base else { continue };
                let c = b + u64::from(a.cost);
                for (v, x) in a.eff.iter() {
                    let slot = &mut cost[v.0][x as usize];
                    if slot.is_none_or(|old| c < old) {
                        *slot = Some(c);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut total = 0;
        for (v, x) in task.goal().iter() {
            match cost[v.0][x as usize] {
                Some(c) => total = if sum { total + c } else { total.max(c) },
                None => return HeuristicValue::Infinite,
            }
        }
        HeuristicValue::Finite(total)
    }

    #[test]
    fn toy2_values_match_fixpoint_oracle() {
        let t = toy2();
        assert_eq!(naive(&t, t.initial(), false), HeuristicValue::Finite(1));
        assert_eq!(naive(&t, t.initial(), true), HeuristicValue::Finite(2));
        assert_eq!(h_max(&t, t.initial()), HeuristicValue::Finite(1));
        assert_eq!(h_add(&t, t.initial()), HeuristicValue::Finite(2));
        let goal = State::new(vec![1, 1]);
        assert_eq!(h_max(&t, &goal), HeuristicValue::Finite(0));
        assert_eq!(h_add(&t, &goal), HeuristicValue::Finite(0));
    }

    #[test]
    fn toy3_chain() {
        let t = toy3();
        assert_eq!(h_max(&t, t.initial()), HeuristicValue::Finite(2));
        assert_eq!(h_add(&t, t.initial()), HeuristicValue::Finite(2));
    }

    #[test]
    fn unreachable_goal_is_infinite() {
        let t = Task::new(
            vec![Variable::with_domain("x", 3)],
            vec![Action::from_pairs(0, "a", &[(0, 0)], &[(0, 1)], 1).unwrap()],
            State::new(vec![0]),
            PartialAssignment::from_pairs(&[(0, 2)]).unwrap(),
            false,
        )
        .unwrap();
        assert!(h_max(&t, t.initial()).is_infinite());
        assert!(h_add(&t, t.initial()).is_infinite());
    }

    #[test]
    fn blind_and_goal_count() {
        let t = toy2();
        assert_eq!(h_blind(&t, t.initial()), HeuristicValue::Finite(1));
        assert_eq!(h_blind(&t, &State::new(vec![1, 1])), HeuristicValue::Finite(0));
        assert_eq!(h_goal_count(&t, t.initial()), HeuristicValue::Finite(2));
        assert_eq!(h_goal_count(&t, &State::new(vec![1, 0])), HeuristicValue::Finite(1));
        assert_eq!(h_goal_count(&t, &State::new(vec![1, 1])), HeuristicValue::Finite(0));
        let costly = Task::new(
            vec![Variable::with_domain("x", 2)],
            vec![Action::from_pairs(0, "a", &[], &[(0, 1)], 5).unwrap()],
            State::new(vec![0]),
            PartialAssignment::from_pairs(&[(0, 1)]).unwrap(),
            true,
        )
        .unwrap();
        assert_eq!(h_blind(&costly, costly.initial()), HeuristicValue::Finite(5));
    }

    proptest! {
        #[test]
        fn dijkstra_matches_naive_fixpoint(seed in 0u64..400, walk in 0usize..6) {
            let t = generate_random_task(&RandomTaskSpec::varied(seed));
            let mut s = t.initial().clone();
            for k in 0..walk {
                let app = t.applicable_actions(&s);
                if app.is_empty() { break; }
                s = crate::task::apply_unchecked(&s, t.action(app[(seed as usize + k) % app.len()]));
            }
            prop_assert_eq!(h_max(&t, &s), naive(&t, &s, false));
            prop_assert_eq!(h_add(&t, &s), naive(&t, &s, true));
        }
    }
}
