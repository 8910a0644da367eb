//! Action support graph, action cores and action closures.
//!
//! The static relations between actions (who supports whom, whose effects
//! clash with whose preconditions or effects) are computed once per task by
//! [`ActionAnalysis`]; the state-dependent closures run over those tables.

use crate::task::{applicable, ActionId, State, Task};

/// Edge `(a, b)`: `a` is inapplicable in the state and `b` supports it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Asg {
    pub state: State,
    pub edges: Vec<(ActionId, ActionId)>,
}

pub fn build_asg(task: &Task, state: &State) -> Asg {
    let mut edges = Vec::new();
    for a in task.actions() {
        if applicable(state, a) {
            continue;
        }
        for b in task.actions() {
            if a.is_supported_by(b) {
                edges.push((a.id, b.id));
            }
        }
    }
    Asg {
        state: state.clone(),
        edges,
    }
}

/// Pairwise action relations used by SAC.
#[derive(Debug, Clone)]
pub struct ActionAnalysis {
    /// `supporters[a]`: actions whose effect shares an entry with `pre(a)`.
    supporters: Vec<Vec<ActionId>>,
    /// `effect_clashes[a]`: actions `b ≠ a` with `eff(b)` conflicting with `eff(a)`.
    effect_clashes: Vec<Vec<ActionId>>,
    /// `precondition_clashes[a]`: actions `b ≠ a` with `pre(b)` conflicting with `eff(a)`.
    precondition_clashes: Vec<Vec<ActionId>>,
}

/// Membership set over action ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSet {
    members: Vec<bool>,
    len: usize,
}

impl ActionSet {
    pub fn new(num_actions: usize) -> Self {
        Self {
            members: vec![false; num_actions],
            len: 0,
        }
    }

    pub fn from_ids(num_actions: usize, ids: impl IntoIterator<Item = ActionId>) -> Self {
        let mut s = Self::new(num_actions);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn insert(&mut self, id: ActionId) -> bool {
        let slot = &mut self.members[id.0];
        if *slot {
            return false;
        }
        *slot = true;
        self.len += 1;
        true
    }

    pub fn contains(&self, id: ActionId) -> bool {
        self.members[id.0]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ids(&self) -> Vec<ActionId> {
        (0..self.members.len())
            .filter(|&i| self.members[i])
            .map(ActionId)
            .collect()
    }
}

impl ActionAnalysis {
    pub fn new(task: &Task) -> Self {
        let n = task.num_actions();
        let mut supporters = vec![Vec::new(); n];
        let mut effect_clashes = vec![Vec::new(); n];
        let mut precondition_clashes = vec![Vec::new(); n];
        for a in task.actions() {
            for b in task.actions() {
                if a.is_supported_by(b) {
                    supporters[a.id.0].push(b.id);
                }
                if a.id == b.id {
                    continue;
                }
                if !b.eff.conflict_free(&a.eff) {
                    effect_clashes[a.id.0].push(b.id);
                }
                if !b.pre.conflict_free(&a.eff) {
                    precondition_clashes[a.id.0].push(b.id);
                }
            }
        }
        Self {
            supporters,
            effect_clashes,
            precondition_clashes,
        }
    }

    pub fn supporters(&self, a: ActionId) -> &[ActionId] {
        &self.supporters[a.0]
    }

    /// Adds supporters of inapplicable members until nothing changes.
    /// Returns whether anything was added.
    fn close_support(&self, task: &Task, state: &State, set: &mut ActionSet) -> bool {
        let mut stack: Vec<ActionId> = set.ids();
        let mut grew = false;
        while let Some(a) = stack.pop() {
            if applicable(state, task.action(a)) {
                continue;
            }
            for &b in &self.supporters[a.0] {
                if set.insert(b) {
                    grew = true;
                    stack.push(b);
                }
            }
        }
        grew
    }

    /// One fixpoint of the conflict closure: for each applicable member `a`,
    /// adds every `b` whose effect clashes with `eff(a)`, or whose precondition
    /// clashes with `eff(a)` while sharing an entry with the state.
    fn close_conflicts(&self, task: &Task, state: &State, set: &mut ActionSet) -> bool {
        let mut stack: Vec<ActionId> = set.ids();
        let mut grew = false;
        while let Some(a) = stack.pop() {
            if !applicable(state, task.action(a)) {
                continue;
            }
            for &b in &self.effect_clashes[a.0] {
                if set.insert(b) {
                    grew = true;
                    stack.push(b);
                }
            }
            for &b in &self.precondition_clashes[a.0] {
                if !set.contains(b) && task.action(b).pre.overlaps_state(state) {
                    set.insert(b);
                    grew = true;
                    stack.push(b);
                }
            }
        }
        grew
    }

    /// Reflexive-transitive closure of `seed` under ASG edges.
    pub fn core(&self, task: &Task, state: &State, seed: &[ActionId]) -> ActionSet {
        let mut set = ActionSet::from_ids(task.num_actions(), seed.iter().copied());
        self.close_support(task, state, &mut set);
        set
    }

    /// Least superset of `seed` closed under the conflict rule.
    pub fn closure(&self, task: &Task, state: &State, seed: &[ActionId]) -> ActionSet {
        let mut set = ActionSet::from_ids(task.num_actions(), seed.iter().copied());
        self.close_conflicts(task, state, &mut set);
        set
    }

    /// Least superset of `seed` closed under both the support rule and the
    /// conflict rule.
    pub fn joint_closure(&self, task: &Task, state: &State, seed: &[ActionId]) -> ActionSet {
        let mut set = ActionSet::from_ids(task.num_actions(), seed.iter().copied());
        loop {
            let a = self.close_support(task, state, &mut set);
            let b = self.close_conflicts(task, state, &mut set);
            if !a && !b {
                return set;
            }
        }
    }
}

/// Actions reachable from `seed` in the ASG at `state`, seed included.
pub fn action_core(task: &Task, state: &State, seed: &[ActionId]) -> Vec<ActionId> {
    ActionAnalysis::new(task).core(task, state, seed).ids()
}

/// Least fixpoint of the action-closure procedure started from `seed`.
pub fn action_closure(task: &Task, state: &State, seed: &[ActionId]) -> Vec<ActionId> {
    ActionAnalysis::new(task).closure(task, state, seed).ids()
}
