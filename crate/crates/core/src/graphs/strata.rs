//! Stratification of the causal graph into levels.

use std::collections::BTreeMap;

use thiserror::Error;

use super::causal::CausalGraph;
use super::scc::Condensation;
use crate::task::{ActionId, Task, VariableId};

/// How levels are numbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelTieBreak {
    /// `1 +` the longest condensation path from a source component.
    #[default]
    Canonical,
    /// One level per component: sinks of the remaining condensation take the
    /// highest remaining level, smallest variable first.
    Distinct,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StratifyError {
    #[error("effect variables of action {0} lie on different levels")]
    MixedEffectLevels(ActionId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub variable_level: Vec<u32>,
    pub action_level: Vec<u32>,
}

impl Stratification {
    pub fn level_of_variable(&self, v: VariableId) -> u32 {
        self.variable_level[v.0]
    }

    pub fn level_of_action(&self, a: ActionId) -> u32 {
        self.action_level[a.0]
    }

    /// Variables grouped by level, lowest level first.
    pub fn layers(&self) -> BTreeMap<u32, Vec<VariableId>> {
        let mut out: BTreeMap<u32, Vec<VariableId>> = BTreeMap::new();
        for (i, &l) in self.variable_level.iter().enumerate() {
            out.entry(l).or_default().push(VariableId(i));
        }
        out
    }
}

pub fn stratify(
    task: &Task,
    cg: &CausalGraph,
    tie_break: LevelTieBreak,
) -> Result<Stratification, StratifyError> {
    let cond = Condensation::new(cg.num_variables, cg.edges.iter().map(|&(x, y)| (x.0, y.0)));
    let k = cond.components.len();
    let mut comp_level = vec![0u32; k];
    match tie_break {
        LevelTieBreak::Canonical => {
            for c in cond.source_first_order() {
                comp_level[c] = comp_level[c].max(1);
                for &d in &cond.successors[c] {
                    comp_level[d] = comp_level[d].max(comp_level[c] + 1);
                }
            }
        }
        LevelTieBreak::Distinct => {
            for (i, c) in cond.sink_first_order().into_iter().enumerate() {
                comp_level[c] = (k - i) as u32;
            }
        }
    }
    let variable_level: Vec<u32> = cond.component_of.iter().map(|&c| comp_level[c]).collect();
    let mut action_level = Vec::with_capacity(task.num_actions());
    for a in task.actions() {
        let mut levels = a.eff.variables().map(|v| variable_level[v.0]);
        let first = levels.next().unwrap_or(1);
        if levels.any(|l| l != first) {
            return Err(StratifyError::MixedEffectLevels(a.id));
        }
        action_level.push(first);
    }
    Ok(Stratification {
        variable_level,
        action_level,
    })
}
