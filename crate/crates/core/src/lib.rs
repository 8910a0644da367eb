//! SAS+ forward-search planning with partial-order reduction.
//!
//! Expansion strategies (`por`) restrict the actions a search applies at each
//! state while preserving completeness and, for `ec` and `sac`, optimality.
//! The `oracle` module checks those guarantees by brute force on small tasks.

pub mod fixtures;
pub mod graphs;
pub mod heuristics;
pub mod oracle;
pub mod por;
pub mod sas;
pub mod search;
pub mod task;

pub use heuristics::{Heuristic, HeuristicKind, HeuristicValue};
pub use por::{ExpansionContext, PorError, SpClosedMode, Strategy, StrategyConfig, StrategyKind};
pub use sas::{emit_sas, parse_sas, SasError};
pub use search::{search, LimitKind, Outcome, SearchAlgorithm, SearchError, SearchLimits, SearchResult};
pub use task::{Action, ActionId, ModelError, PartialAssignment, Plan, PlanError, State, Task, Variable, VariableId};
