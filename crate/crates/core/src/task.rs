//! SAS+ task model: variables, partial assignments, states, actions and plans.

use std::fmt;

use thiserror::Error;

/// Position of a variable in the task's variable list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableId(pub usize);

/// Position of an action in the task's action list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub usize);

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("variable {0} is out of range")]
    UnknownVariable(VariableId),
    #[error("value {value} is outside the domain of {var} (size {domain_size})")]
    ValueOutOfRange {
        var: VariableId,
        value: u32,
        domain_size: u32,
    },
    #[error("variable {0} is assigned twice with different values")]
    DuplicateVariable(VariableId),
    #[error("state has {got} values, task has {expected} variables")]
    StateLength { expected: usize, got: usize },
    #[error("action {0} has an empty effect")]
    EmptyEffect(String),
    #[error("action {name} has id {got}, expected {expected}")]
    ActionIdMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("variable {0} has an empty domain")]
    EmptyDomain(String),
    #[error("action {0} has cost other than 1 in a task without metric")]
    CostWithoutMetric(String),
    #[error("action {0} is not applicable")]
    NotApplicable(ActionId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("action id {0} is out of range")]
    UnknownAction(ActionId),
    #[error("step {0} is not applicable")]
    NotApplicableAt(usize),
    #[error("final state does not satisfy the goal")]
    GoalNotReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub value_names: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, value_names: Vec<String>) -> Self {
        Self {
            name: name.into(),
            value_names,
        }
    }

    /// A variable whose values are named by their index.
    pub fn with_domain(name: impl Into<String>, domain_size: u32) -> Self {
        Self::new(name, (0..domain_size).map(|v| v.to_string()).collect())
    }

    pub fn domain_size(&self) -> u32 {
        self.value_names.len() as u32
    }
}

/// A set of `variable = value` entries with at most one entry per variable.
///
/// Entries are kept sorted by variable, which makes equality structural and
/// lets the conflict tests run as a merge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    entries: Vec<(VariableId, u32)>,
}

impl PartialAssignment {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an assignment, merging repeated identical entries and rejecting
    /// a variable that receives two different values.
    pub fn new(entries: impl IntoIterator<Item = (VariableId, u32)>) -> Result<Self, ModelError> {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_unstable();
        entries.dedup();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ModelError::DuplicateVariable(w[0].0));
            }
        }
        Ok(Self { entries })
    }

    /// Shorthand for tests and fixtures: `(variable index, value)` pairs.
    pub fn from_pairs(pairs: &[(usize, u32)]) -> Result<Self, ModelError> {
        Self::new(pairs.iter().map(|&(v, x)| (VariableId(v), x)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (VariableId, u32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, var: VariableId) -> Option<u32> {
        self.entries
            .binary_search_by_key(&var, |&(v, _)| v)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn contains_var(&self, var: VariableId) -> bool {
        self.get(var).is_some()
    }

    pub fn variables(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    /// True iff no variable receives different values in `self` and `other`.
    pub fn conflict_free(&self, other: &PartialAssignment) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (va, xa) = self.entries[i];
            let (vb, xb) = other.entries[j];
            match va.cmp(&vb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if xa != xb {
                        return false;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        true
    }

    /// True iff the two assignments share at least one identical entry.
    pub fn shares_entry(&self, other: &PartialAssignment) -> bool {
        self.entries.iter().any(|&(v, x)| other.get(v) == Some(x))
    }

    /// True iff every entry holds in `state`.
    pub fn holds_in(&self, state: &State) -> bool {
        self.entries.iter().all(|&(v, x)| state.get(v) == x)
    }

    /// True iff at least one entry holds in `state`.
    pub fn overlaps_state(&self, state: &State) -> bool {
        self.entries.iter().any(|&(v, x)| state.get(v) == x)
    }

    fn check(&self, variables: &[Variable]) -> Result<(), ModelError> {
        for &(var, value) in &self.entries {
            let v = variables
                .get(var.0)
                .ok_or(ModelError::UnknownVariable(var))?;
            if value >= v.domain_size() {
                return Err(ModelError::ValueOutOfRange {
                    var,
                    value,
                    domain_size: v.domain_size(),
                });
            }
        }
        Ok(())
    }
}

/// Full assignment, one value per variable in variable order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(Vec<u32>);

impl State {
    pub fn new(values: Vec<u32>) -> Self {
        Self(values)
    }

    pub fn get(&self, var: VariableId) -> u32 {
        self.0[var.0]
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub id: ActionId,
    pub name: String,
    pub pre: PartialAssignment,
    pub eff: PartialAssignment,
    pub cost: u32,
}

impl Action {
    /// Convenience constructor over `(variable index, value)` pairs.
    pub fn from_pairs(
        id: usize,
        name: impl Into<String>,
        pre: &[(usize, u32)],
        eff: &[(usize, u32)],
        cost: u32,
    ) -> Result<Self, ModelError> {
        Ok(Self {
            id: ActionId(id),
            name: name.into(),
            pre: PartialAssignment::from_pairs(pre)?,
            eff: PartialAssignment::from_pairs(eff)?,
            cost,
        })
    }

    /// `b` is a follow-up of `self` when `self` produces an entry `b` requires
    /// or also produces.
    pub fn has_follow_up(&self, b: &Action) -> bool {
        self.eff.shares_entry(&b.pre) || self.eff.shares_entry(&b.eff)
    }

    /// `self` is supported by `b` when `b` produces one of `self`'s
    /// precondition entries.
    pub fn is_supported_by(&self, b: &Action) -> bool {
        self.pre.shares_entry(&b.eff)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    variables: Vec<Variable>,
    actions: Vec<Action>,
    initial: State,
    goal: PartialAssignment,
    uses_metric: bool,
}

impl Task {
    pub fn new(
        variables: Vec<Variable>,
        actions: Vec<Action>,
        initial: State,
        goal: PartialAssignment,
        uses_metric: bool,
    ) -> Result<Self, ModelError> {
        for v in &variables {
            if v.value_names.is_empty() {
                return Err(ModelError::EmptyDomain(v.name.clone()));
            }
        }
        if initial.len() != variables.len() {
            return Err(ModelError::StateLength {
                expected: variables.len(),
                got: initial.len(),
            });
        }
        for (i, (&value, var)) in initial.values().iter().zip(&variables).enumerate() {
            if value >= var.domain_size() {
                return Err(ModelError::ValueOutOfRange {
                    var: VariableId(i),
                    value,
                    domain_size: var.domain_size(),
                });
            }
        }
        goal.check(&variables)?;
        for (i, a) in actions.iter().enumerate() {
            if a.id.0 != i {
                return Err(ModelError::ActionIdMismatch {
                    name: a.name.clone(),
                    expected: i,
                    got: a.id.0,
                });
            }
            if a.eff.is_empty() {
                return Err(ModelError::EmptyEffect(a.name.clone()));
            }
            if !uses_metric && a.cost != 1 {
                return Err(ModelError::CostWithoutMetric(a.name.clone()));
            }
            a.pre.check(&variables)?;
            a.eff.check(&variables)?;
        }
        Ok(Self {
            variables,
            actions,
            initial,
            goal,
            uses_metric,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn action(&self, id: ActionId) -> &Action {
        &self.actions[id.0]
    }

    pub fn initial(&self) -> &State {
        &self.initial
    }

    pub fn goal(&self) -> &PartialAssignment {
        &self.goal
    }

    pub fn uses_metric(&self) -> bool {
        self.uses_metric
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn domain_size(&self, var: VariableId) -> u32 {
        self.variables[var.0].domain_size()
    }

    /// Every action costs exactly one.
    pub fn is_unit_cost(&self) -> bool {
        self.actions.iter().all(|a| a.cost == 1)
    }

    /// Checks that `state` is a full assignment for this task.
    pub fn check_state(&self, state: &State) -> Result<(), ModelError> {
        if state.len() != self.variables.len() {
            return Err(ModelError::StateLength {
                expected: self.variables.len(),
                got: state.len(),
            });
        }
        for (i, (&value, var)) in state.values().iter().zip(&self.variables).enumerate() {
            if value >= var.domain_size() {
                return Err(ModelError::ValueOutOfRange {
                    var: VariableId(i),
                    value,
                    domain_size: var.domain_size(),
                });
            }
        }
        Ok(())
    }

    pub fn is_goal(&self, state: &State) -> bool {
        self.goal.holds_in(state)
    }

    /// Applicable actions in `state`, in id order.
    pub fn applicable_actions(&self, state: &State) -> Vec<ActionId> {
        self.actions
            .iter()
            .filter(|a| applicable(state, a))
            .map(|a| a.id)
            .collect()
    }

    pub fn find_action(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().find(|a| a.name == name).map(|a| a.id)
    }

    pub fn plan_cost(&self, steps: &[ActionId]) -> u64 {
        steps.iter().map(|&a| u64::from(self.action(a).cost)).sum()
    }

    pub fn validate_plan(&self, steps: &[ActionId]) -> Result<Plan, PlanError> {
        validate_plan(self, steps)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<ActionId>,
    pub cost: u64,
}

pub fn conflict_free(p: &PartialAssignment, q: &PartialAssignment) -> bool {
    p.conflict_free(q)
}

pub fn applicable(state: &State, action: &Action) -> bool {
    action.pre.holds_in(state)
}

pub fn apply(state: &State, action: &Action) -> Result<State, ModelError> {
    if !applicable(state, action) {
        return Err(ModelError::NotApplicable(action.id));
    }
    Ok(apply_unchecked(state, action))
}

/// Applies the effect without checking the precondition.
pub fn apply_unchecked(state: &State, action: &Action) -> State {
    let mut values = state.0.clone();
    for (var, value) in action.eff.iter() {
        values[var.0] = value;
    }
    State(values)
}

pub fn is_goal(task: &Task, state: &State) -> bool {
    task.is_goal(state)
}

/// Executes `steps` from the initial state and returns the plan with its
/// cost if every step applies and the last state satisfies the goal.
pub fn validate_plan(task: &Task, steps: &[ActionId]) -> Result<Plan, PlanError> {
    let mut state = task.initial().clone();
    for (i, &id) in steps.iter().enumerate() {
        let action = task
            .actions()
            .get(id.0)
            .ok_or(PlanError::UnknownAction(id))?;
        state = apply(&state, action).map_err(|_| PlanError::NotApplicableAt(i))?;
    }
    if !task.is_goal(&state) {
        return Err(PlanError::GoalNotReached);
    }
    Ok(Plan {
        steps: steps.to_vec(),
        cost: task.plan_cost(steps),
    })
}
