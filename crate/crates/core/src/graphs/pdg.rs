//! Potential dependency graph between DTGs at a state.
//!
//! Edge `G_i → G_j` (`i ≠ j`) when the current value `s_i` is
//!
//! * a potential precondition of `G_j`: some action on a potential descendant
//!   edge of `s_j` in `G_j` requires `x_i = s_i`, or changes `x_i` without a
//!   precondition on `x_i` (a `v0` transition of `G_i`, which fires from `s_i`
//!   like any other value); or
//! * a potential dependent of `G_j`: some action on a transition leaving `s_i`
//!   (or a `v0` transition of `G_i`) requires a value of `x_j` that is a
//!   potential descendant vertex of `s_j`.

use std::collections::BTreeSet;

use super::dtg::{DescendantTable, Dtg};
use crate::task::{State, Task, VariableId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdg {
    pub state: State,
    pub num_variables: usize,
    pub edges: BTreeSet<(VariableId, VariableId)>,
}

pub fn build_pdg(task: &Task, state: &State, dtgs: &[Dtg]) -> Pdg {
    let table = DescendantTable::new(task, dtgs);
    build_pdg_with(task, state, dtgs, &table)
}

pub fn build_pdg_with(task: &Task, state: &State, dtgs: &[Dtg], table: &DescendantTable) -> Pdg {
    let mut edges = BTreeSet::new();
    for dtg in dtgs {
        let j = dtg.variable;
        let desc = table.get(j, state.get(j));
        for (idx, e) in dtg.edges.iter().enumerate() {
            if !desc.edges[idx] {
                continue;
            }
            for &o in &e.actions {
                let o = task.action(o);
                for (i, v) in o.pre.iter() {
                    if i != j && state.get(i) == v {
                        edges.insert((i, j));
                    }
                }
                for i in o.eff.variables() {
                    if i != j && !o.pre.contains_var(i) {
                        edges.insert((i, j));
                    }
                }
            }
        }
    }
    for dtg in dtgs {
        let i = dtg.variable;
        for e in dtg.edges_from(state.get(i)) {
            for &o in &e.actions {
                for (j, w) in task.action(o).pre.iter() {
                    if j != i && table.get(j, state.get(j)).vertices[w as usize] {
                        edges.insert((i, j));
                    }
                }
            }
        }
    }
    Pdg {
        state: state.clone(),
        num_variables: task.num_variables(),
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{toy2, toy3};
    use crate::graphs::dtg::build_all_dtgs;
    use crate::task::{Action, PartialAssignment, Variable};

    fn v(i: usize) -> VariableId {
        VariableId(i)
    }

    #[test]
    fn toy2_pdg_is_empty() {
        let t = toy2();
        let d = build_all_dtgs(&t);
        for s in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            assert!(build_pdg(&t, &State::new(s.to_vec()), &d).edges.is_empty());
        }
    }

    #[test]
    fn toy3_pdg_golden() {
        let t = toy3();
        let d = build_all_dtgs(&t);
        let p = build_pdg(&t, &State::new(vec![0, 0, 2]), &d);
        let expected: BTreeSet<_> = [(v(0), v(1)), (v(1), v(0)), (v(2), v(1))].into_iter().collect();
        assert_eq!(p.edges, expected);
    }

    #[test]
    fn single_variable_actions_give_empty_pdg() {
        let t = Task::new(
            vec![Variable::with_domain("x", 3), Variable::with_domain("y", 3)],
            vec![
                Action::from_pairs(0, "x01", &[(0, 0)], &[(0, 1)], 1).unwrap(),
                Action::from_pairs(1, "x12", &[(0, 1)], &[(0, 2)], 1).unwrap(),
                Action::from_pairs(2, "y0", &[], &[(1, 0)], 1).unwrap(),
                Action::from_pairs(3, "y02", &[(1, 0)], &[(1, 2)], 1).unwrap(),
            ],
            State::new(vec![0, 0]),
            PartialAssignment::from_pairs(&[(0, 2), (1, 2)]).unwrap(),
            false,
        )
        .unwrap();
        let d = build_all_dtgs(&t);
        for x in 0..3 {
            for y in 0..3 {
                assert!(build_pdg(&t, &State::new(vec![x, y]), &d).edges.is_empty());
            }
        }
    }

    /// Literal scan of the two definitions over an explicit value graph in
    /// which `v0` transitions are available from every value.
    fn oracle(task: &Task, s: &State) -> BTreeSet<(VariableId, VariableId)> {
        let n = task.num_variables();
        // (from value or None for v0, to value, action)
        let trans = |var: usize| -> Vec<(Option<u32>, u32, usize)> {
            task.actions()
                .iter()
                .filter_map(|a| a.eff.get(v(var)).map(|to| (a.pre.get(v(var)), to, a.id.0)))
                .collect()
        };
        let reach = |var: usize, from: u32| -> Vec<bool> {
            let size = task.domain_size(v(var)) as usize;
            let mut r = vec![false; size];
            r[from as usize] = true;
            for _ in 0..=size {
                for &(f, to, _) in &trans(var) {
                    if f.is_none_or(|f| r[f as usize]) {
                        r[to as usize] = true;
                    }
                }
            }
            r
        };
        let on_walk_vertex = |var: usize, w: u32| -> bool {
            let r = reach(var, s.get(v(var)));
            match task.goal().get(v(var)) {
                None => r[w as usize],
                Some(g) => r[w as usize] && reach(var, w)[g as usize],
            }
        };
        let on_walk_edge = |var: usize, f: Option<u32>, to: u32| -> bool {
            let r = reach(var, s.get(v(var)));
            let start = f.is_none_or(|f| r[f as usize]);
            match task.goal().get(v(var)) {
                None => start,
                Some(g) => start && reach(var, to)[g as usize],
            }
        };
        let mut out = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for &(f, to, o) in &trans(j) {
                    let a = task.action(crate::task::ActionId(o));
                    if on_walk_edge(j, f, to)
                        && (a.pre.get(v(i)) == Some(s.get(v(i)))
                            || (a.eff.contains_var(v(i)) && !a.pre.contains_var(v(i))))
                    {
                        out.insert((v(i), v(j)));
                    }
                }
                for &(f, _, o) in &trans(i) {
                    if f.is_none_or(|f| f == s.get(v(i))) {
                        if let Some(w) = task.action(crate::task::ActionId(o)).pre.get(v(j)) {
                            if on_walk_vertex(j, w) {
                                out.insert((v(i), v(j)));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn matches_literal_scan_on_random_tasks() {
        use crate::oracle::random::{generate_random_task, RandomTaskSpec};
        use crate::oracle::space::enumerate_state_space;
        for seed in 0..60 {
            let t = generate_random_task(&RandomTaskSpec::varied(seed));
            let d = build_all_dtgs(&t);
            let space = enumerate_state_space(&t, 2000).unwrap();
            for s in space.states.iter().take(40) {
                assert_eq!(build_pdg(&t, s, &d).edges, oracle(&t, s), "seed {seed} state {s}");
            }
        }
    }
}
