//! Brute-force oracles: explicit state spaces, random task generation and
//! property checkers used by the test suites and `porplan verify`.

pub mod checks;
pub mod random;
pub mod space;
pub mod suites;

pub use checks::{
    check_action_preserving, check_core_lemma, check_left_commutativity_equivalence, check_sp_permutation,
    check_stubborn_conditions, reduced_expanded_states, reduced_reachable_states, strategy_expander,
    CommutativityCounts, Expander, Report, StubbornChecker, Violation, ViolationKind,
};
pub use random::{generate_random_task, CostMode, RandomTaskSpec};
pub use space::{brute_force_optimal_cost, enumerate_state_space, enumerate_state_space_from, OracleError, StateSpaceGraph};
