//! Derived graph structures: DTGs, causal graph, action support graph,
//! potential dependency graph and stratification.

pub mod causal;
pub mod dot;
pub mod dtg;
pub mod pdg;
pub mod scc;
pub mod strata;
pub mod support;

pub use causal::{build_causal_graph, CausalGraph};
pub use dtg::{build_all_dtgs, build_dtg, potential_descendant_edges, DescendantTable, Descendants, Dtg, DtgEdge, DtgVertex};
pub use pdg::{build_pdg, build_pdg_with, Pdg};
pub use strata::{stratify, LevelTieBreak, Stratification, StratifyError};
pub use support::{action_closure, action_core, build_asg, ActionAnalysis, ActionSet, Asg};
