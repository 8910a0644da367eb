//! Causal graph over state variables.

use std::collections::BTreeSet;

use crate::task::{Task, VariableId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalGraph {
    pub num_variables: usize,
    pub edges: BTreeSet<(VariableId, VariableId)>,
}

impl CausalGraph {
    pub fn successors(&self, v: VariableId) -> impl Iterator<Item = VariableId> + '_ {
        self.edges
            .range((v, VariableId(0))..=(v, VariableId(usize::MAX)))
            .map(|&(_, w)| w)
    }
}

/// Edge `(x, y)` iff `x ≠ y` and some action has `x` in its effect and `y`
/// in its precondition or effect.
pub fn build_causal_graph(task: &Task) -> CausalGraph {
    let mut edges = BTreeSet::new();
    for a in task.actions() {
        for x in a.eff.variables() {
            for y in a.pre.variables().chain(a.eff.variables()) {
                if x != y {
                    edges.insert((x, y));
                }
            }
        }
    }
    CausalGraph {
        num_variables: task.num_variables(),
        edges,
    }
}
