//! Partial-order reduction: per-state expansion sets.
//!
//! * `none`: every applicable action.
//! * `ec` (expansion core): applicable actions of the DTGs in the smallest
//!   prefix of the sink-first SCC order of PDG(s) that contains an unachieved
//!   goal DTG.
//! * `sp` (stratified planning): all applicable actions except those of a
//!   lower level than the generating action that are not its follow-ups.
//! * `sac` (stubborn action core): applicable members of the joint support /
//!   conflict closure of a DTG-based landmark action set.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graphs::scc::Condensation;
use crate::graphs::{
    build_all_dtgs, build_causal_graph, build_pdg_with, stratify, ActionAnalysis, DescendantTable,
    Dtg, DtgVertex, LevelTieBreak, Pdg, Stratification, StratifyError,
};
use crate::task::{applicable, apply_unchecked, ActionId, State, Task, VariableId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PorError {
    #[error("state satisfies the goal; no unachieved goal DTG")]
    NoUnachievedGoal,
    #[error("({0}, {1}) is not a valid path at the given state")]
    InvalidPath(ActionId, ActionId),
    #[error(transparent)]
    Stratify(#[from] StratifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    None,
    Ec,
    Sp,
    Sac,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [Self::None, Self::Ec, Self::Sp, Self::Sac];

    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Ec => "ec",
            Self::Sp => "sp",
            Self::Sac => "sac",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected none, ec, sp or sac)"))
    }
}

/// Duplicate-detection key used by search under SP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpClosedMode {
    #[default]
    State,
    /// State plus the level of the generating action.
    StateLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StrategyConfig {
    pub sp_closed: SpClosedMode,
    pub level_tie_break: LevelTieBreak,
}

#[derive(Debug, Clone, Copy)]
pub struct ExpansionContext<'s> {
    pub state: &'s State,
    /// Action that produced this node; `None` at the search root.
    pub generating_action: Option<ActionId>,
}

impl<'s> ExpansionContext<'s> {
    pub fn root(state: &'s State) -> Self {
        Self {
            state,
            generating_action: None,
        }
    }
}

/// Exactly the applicable actions.
pub fn full_expansion(task: &Task, state: &State) -> Vec<ActionId> {
    task.applicable_actions(state)
}

/// Actions that move `var` away from its current value: transitions leaving
/// the current value plus `v0` transitions into another value.
fn leaving_actions(dtg: &Dtg, current: u32) -> Vec<ActionId> {
    let mut out: Vec<ActionId> = dtg
        .edges
        .iter()
        .filter(|e| {
            e.to != current
                && matches!(e.from, DtgVertex::Source)
                    | matches!(e.from, DtgVertex::Value(v) if v == current)
        })
        .flat_map(|e| e.actions.iter().copied())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Landmark actions from one unachieved goal DTG: the one with the fewest
/// leaving actions, lowest variable on ties.
pub fn landmark_action_set(task: &Task, state: &State, dtgs: &[Dtg]) -> Result<Vec<ActionId>, PorError> {
    task.goal()
        .iter()
        .filter(|&(v, g)| state.get(v) != g)
        .map(|(v, _)| leaving_actions(&dtgs[v.0], state.get(v)))
        .min_by_key(Vec::len)
        .ok_or(PorError::NoUnachievedGoal)
}

/// DTG indices of the smallest sink-first prefix of the condensation of
/// `pdg` that contains an unachieved goal DTG. The result is a dependency
/// closure of `pdg`.
pub fn ec_closure(task: &Task, state: &State, pdg: &Pdg) -> Result<Vec<VariableId>, PorError> {
    let cond = Condensation::new(pdg.num_variables, pdg.edges.iter().map(|&(x, y)| (x.0, y.0)));
    let unachieved = |v: usize| {
        task.goal()
            .get(VariableId(v))
            .is_some_and(|g| state.get(VariableId(v)) != g)
    };
    let mut chosen = Vec::new();
    for c in cond.sink_first_order() {
        let members = &cond.components[c];
        chosen.extend(members.iter().map(|&v| VariableId(v)));
        if members.iter().any(|&v| unachieved(v)) {
            chosen.sort_unstable();
            return Ok(chosen);
        }
    }
    Err(PorError::NoUnachievedGoal)
}

fn actions_touching(task: &Task, state: &State, vars: &[VariableId]) -> Vec<ActionId> {
    task.actions()
        .iter()
        .filter(|a| applicable(state, a) && vars.iter().any(|&v| a.eff.contains_var(v)))
        .map(|a| a.id)
        .collect()
}

pub fn ec_expansion(task: &Task, state: &State, dtgs: &[Dtg]) -> Result<Vec<ActionId>, PorError> {
    if task.is_goal(state) {
        return Err(PorError::NoUnachievedGoal);
    }
    let table = DescendantTable::new(task, dtgs);
    let pdg = build_pdg_with(task, state, dtgs, &table);
    let closure = ec_closure(task, state, &pdg)?;
    Ok(actions_touching(task, state, &closure))
}

pub fn sac_expansion(task: &Task, state: &State, dtgs: &[Dtg]) -> Result<Vec<ActionId>, PorError> {
    sac_with(task, state, dtgs, &ActionAnalysis::new(task))
}

fn sac_with(
    task: &Task,
    state: &State,
    dtgs: &[Dtg],
    analysis: &ActionAnalysis,
) -> Result<Vec<ActionId>, PorError> {
    let landmarks = landmark_action_set(task, state, dtgs)?;
    let closed = analysis.joint_closure(task, state, &landmarks);
    Ok(closed
        .ids()
        .into_iter()
        .filter(|&a| applicable(state, task.action(a)))
        .collect())
}

/// Drops each `b` with `L(b) < L(a)` that is not a follow-up of the
/// generating action `a`. The root keeps everything.
pub fn sp_filter(
    task: &Task,
    strata: &Stratification,
    ctx: &ExpansionContext<'_>,
    applicable: &[ActionId],
) -> Vec<ActionId> {
    let Some(a) = ctx.generating_action else {
        return applicable.to_vec();
    };
    let la = strata.level_of_action(a);
    let a = task.action(a);
    applicable
        .iter()
        .copied()
        .filter(|&b| strata.level_of_action(b) >= la || a.has_follow_up(task.action(b)))
        .collect()
}

/// Syntactic left-commutativity test for a valid path `(a, b)` at `state`.
pub fn is_left_commutative(task: &Task, state: &State, a: ActionId, b: ActionId) -> Result<bool, PorError> {
    let (oa, ob) = (task.action(a), task.action(b));
    if !applicable(state, oa) || !applicable(&apply_unchecked(state, oa), ob) {
        return Err(PorError::InvalidPath(a, b));
    }
    Ok(oa.pre.conflict_free(&ob.eff)
        && ob.pre.conflict_free(&oa.eff)
        && oa.eff.conflict_free(&ob.eff)
        && applicable(state, ob))
}

/// A configured expansion strategy with the per-task analysis it needs.
#[derive(Debug, Clone)]
pub struct Strategy {
    kind: StrategyKind,
    config: StrategyConfig,
    dtgs: Vec<Dtg>,
    descendants: DescendantTable,
    actions: ActionAnalysis,
    strata: Stratification,
}

impl Strategy {
    pub fn new(task: &Task, kind: StrategyKind, config: StrategyConfig) -> Result<Self, PorError> {
        let dtgs = build_all_dtgs(task);
        let descendants = DescendantTable::new(task, &dtgs);
        let strata = stratify(task, &build_causal_graph(task), config.level_tie_break)?;
        Ok(Self {
            kind,
            config,
            descendants,
            actions: ActionAnalysis::new(task),
            dtgs,
            strata,
        })
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn config(&self) -> StrategyConfig {
        self.config
    }

    pub fn dtgs(&self) -> &[Dtg] {
        &self.dtgs
    }

    pub fn stratification(&self) -> &Stratification {
        &self.strata
    }

    pub fn pdg(&self, task: &Task, state: &State) -> Pdg {
        build_pdg_with(task, state, &self.dtgs, &self.descendants)
    }

    pub fn ec(&self, task: &Task, state: &State) -> Result<Vec<ActionId>, PorError> {
        if task.is_goal(state) {
            return Err(PorError::NoUnachievedGoal);
        }
        let closure = ec_closure(task, state, &self.pdg(task, state))?;
        Ok(actions_touching(task, state, &closure))
    }

    pub fn sac(&self, task: &Task, state: &State) -> Result<Vec<ActionId>, PorError> {
        sac_with(task, state, &self.dtgs, &self.actions)
    }

    /// The expansion set at `ctx.state`. EC and SAC fail on goal states.
    pub fn expand(&self, task: &Task, ctx: &ExpansionContext<'_>) -> Result<Vec<ActionId>, PorError> {
        match self.kind {
            StrategyKind::None => Ok(full_expansion(task, ctx.state)),
            StrategyKind::Ec => self.ec(task, ctx.state),
            StrategyKind::Sac => self.sac(task, ctx.state),
            StrategyKind::Sp => Ok(sp_filter(
                task,
                &self.strata,
                ctx,
                &full_expansion(task, ctx.state),
            )),
        }
    }

    /// Duplicate-detection level tag for a node generated by `action`, if the
    /// configured closed-list mode uses one.
    pub fn closed_key_level(&self, action: Option<ActionId>) -> Option<u32> {
        match (self.kind, self.config.sp_closed) {
            (StrategyKind::Sp, SpClosedMode::StateLevel) => {
                action.map(|a| self.strata.level_of_action(a))
            }
            _ => None,
        }
    }
}
