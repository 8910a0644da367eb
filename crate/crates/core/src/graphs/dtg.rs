//! Domain transition graphs and potential-descendant queries.

use std::collections::{BTreeMap, VecDeque};

use crate::task::{ActionId, Task, VariableId};

/// A DTG vertex: a domain value or the sentinel source `v0` used by actions
/// without a precondition on the variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DtgVertex {
    Source,
    Value(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtgEdge {
    pub from: DtgVertex,
    pub to: u32,
    /// Actions associated with this transition, in id order.
    pub actions: Vec<ActionId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dtg {
    pub variable: VariableId,
    pub domain_size: u32,
    pub edges: Vec<DtgEdge>,
}

pub fn build_dtg(task: &Task, var: VariableId) -> Dtg {
    let mut edges: BTreeMap<(DtgVertex, u32), Vec<ActionId>> = BTreeMap::new();
    for a in task.actions() {
        if let Some(to) = a.eff.get(var) {
            let from = a.pre.get(var).map_or(DtgVertex::Source, DtgVertex::Value);
            edges.entry((from, to)).or_default().push(a.id);
        }
    }
    Dtg {
        variable: var,
        domain_size: task.domain_size(var),
        edges: edges
            .into_iter()
            .map(|((from, to), actions)| DtgEdge { from, to, actions })
            .collect(),
    }
}

pub fn build_all_dtgs(task: &Task) -> Vec<Dtg> {
    (0..task.num_variables())
        .map(|v| build_dtg(task, VariableId(v)))
        .collect()
}

/// Potential descendant edges and vertices of one vertex, as membership
/// vectors indexed by edge position and by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descendants {
    pub edges: Vec<bool>,
    pub vertices: Vec<bool>,
}

impl Descendants {
    pub fn edge_indices(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i]).collect()
    }
}

impl Dtg {
    /// Edges leaving `value`, plus every `v0` edge (those fire from any value).
    pub fn edges_from(&self, value: u32) -> impl Iterator<Item = &DtgEdge> + '_ {
        self.edges
            .iter()
            .filter(move |e| e.from == DtgVertex::Value(value) || e.from == DtgVertex::Source)
    }

    /// Vertices reachable from `from` (inclusive). A `v0` edge can be taken
    /// from any value.
    fn forward_reach(&self, from: u32) -> Vec<bool> {
        let n = self.domain_size as usize;
        let mut reach = vec![false; n];
        let mut queue = VecDeque::new();
        let visit = |v: u32, reach: &mut Vec<bool>, queue: &mut VecDeque<u32>| {
            if !reach[v as usize] {
                reach[v as usize] = true;
                queue.push_back(v);
            }
        };
        visit(from, &mut reach, &mut queue);
        for e in self.edges.iter().filter(|e| e.from == DtgVertex::Source) {
            visit(e.to, &mut reach, &mut queue);
        }
        while let Some(u) = queue.pop_front() {
            for e in &self.edges {
                if e.from == DtgVertex::Value(u) {
                    visit(e.to, &mut reach, &mut queue);
                }
            }
        }
        reach
    }

    /// Values from which `goal` can be reached.
    fn backward_reach(&self, goal: u32) -> Vec<bool> {
        let n = self.domain_size as usize;
        let mut can = vec![false; n];
        can[goal as usize] = true;
        loop {
            let mut changed = false;
            for e in &self.edges {
                if !can[e.to as usize] {
                    continue;
                }
                match e.from {
                    DtgVertex::Value(u) if !can[u as usize] => {
                        can[u as usize] = true;
                        changed = true;
                    }
                    DtgVertex::Source if can.iter().any(|c| !c) => {
                        can.iter_mut().for_each(|c| *c = true);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return can;
            }
        }
    }

    /// With a goal value: edges and vertices on some walk from `from` to the
    /// goal. Without one: everything reachable from `from`.
    pub fn potential_descendants(&self, from: u32, goal: Option<u32>) -> Descendants {
        let reach = self.forward_reach(from);
        let can = match goal {
            Some(g) => self.backward_reach(g),
            None => vec![true; self.domain_size as usize],
        };
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let start = match e.from {
                    DtgVertex::Source => true,
                    DtgVertex::Value(u) => reach[u as usize],
                };
                start && can[e.to as usize]
            })
            .collect();
        let vertices = reach.iter().zip(&can).map(|(&r, &c)| r && c).collect();
        Descendants { edges, vertices }
    }
}

/// Indices of the potential descendant edges of `v`.
pub fn potential_descendant_edges(dtg: &Dtg, v: u32, goal_value: Option<u32>) -> Vec<usize> {
    dtg.potential_descendants(v, goal_value).edge_indices()
}

/// Potential descendants for every (variable, value) pair of a task.
#[derive(Debug, Clone)]
pub struct DescendantTable {
    table: Vec<Vec<Descendants>>,
}

impl DescendantTable {
    pub fn new(task: &Task, dtgs: &[Dtg]) -> Self {
        let table = dtgs
            .iter()
            .map(|dtg| {
                let goal = task.goal().get(dtg.variable);
                (0..dtg.domain_size)
                    .map(|v| dtg.potential_descendants(v, goal))
                    .collect()
            })
            .collect();
        Self { table }
    }

    pub fn get(&self, var: VariableId, value: u32) -> &Descendants {
        &self.table[var.0][value as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::toy2;
    use crate::task::{Action, PartialAssignment, State, Variable};

    fn task_with(domain: u32, actions: Vec<Action>, goal: &[(usize, u32)]) -> Task {
        Task::new(
            vec![Variable::with_domain("x", domain), Variable::with_domain("y", 2)],
            actions,
            State::new(vec![0, 0]),
            PartialAssignment::from_pairs(goal).unwrap(),
            false,
        )
        .unwrap()
    }

    fn linear() -> Vec<Action> {
        vec![
            Action::from_pairs(0, "s01", &[(0, 0)], &[(0, 1)], 1).unwrap(),
            Action::from_pairs(1, "s12", &[(0, 1)], &[(0, 2)], 1).unwrap(),
        ]
    }

    #[test]
    fn toy2_dtg() {
        let t = toy2();
        let d = build_dtg(&t, VariableId(0));
        assert_eq!(
            d.edges,
            vec![DtgEdge {
                from: DtgVertex::Value(0),
                to: 1,
                actions: vec![ActionId(0)]
            }]
        );
        assert_eq!(d.domain_size, 2);
    }

    #[test]
    fn untouched_variable_has_no_edges() {
        let t = task_with(3, linear(), &[]);
        assert!(build_dtg(&t, VariableId(1)).edges.is_empty());
    }

    #[test]
    fn precondition_free_effect_uses_source() {
        let a = Action::from_pairs(0, "set", &[(1, 0)], &[(0, 1)], 1).unwrap();
        let t = task_with(2, vec![a], &[]);
        let d = build_dtg(&t, VariableId(0));
        assert_eq!(d.edges[0].from, DtgVertex::Source);
        assert_eq!(d.edges[0].to, 1);
    }

    #[test]
    fn parallel_actions_share_an_edge() {
        let mut acts = linear();
        acts.push(Action::from_pairs(2, "again", &[(0, 0)], &[(0, 1)], 1).unwrap());
        let t = task_with(3, acts, &[]);
        let d = build_dtg(&t, VariableId(0));
        assert_eq!(d.edges.len(), 2);
        assert_eq!(d.edges[0].actions, vec![ActionId(0), ActionId(2)]);
    }

    #[test]
    fn descendants_on_linear_dtg() {
        let t = task_with(3, linear(), &[(0, 2)]);
        let d = build_dtg(&t, VariableId(0));
        assert_eq!(potential_descendant_edges(&d, 0, Some(2)), vec![0, 1]);
        assert!(potential_descendant_edges(&d, 2, Some(2)).is_empty());
        // goal 1: the edge 1→2 leads away from the goal
        assert_eq!(potential_descendant_edges(&d, 0, Some(1)), vec![0]);
    }

    #[test]
    fn descendants_without_goal_follow_reachability() {
        let acts = vec![Action::from_pairs(0, "s01", &[(0, 0)], &[(0, 1)], 1).unwrap()];
        let t = task_with(2, acts, &[]);
        let d = build_dtg(&t, VariableId(0));
        assert!(potential_descendant_edges(&d, 1, None).is_empty());
        assert_eq!(potential_descendant_edges(&d, 0, None), vec![0]);
        let desc = d.potential_descendants(1, None);
        assert_eq!(desc.vertices, vec![false, true]);
    }

    #[test]
    fn source_edges_fire_from_every_value() {
        let acts = vec![
            Action::from_pairs(0, "reset", &[], &[(0, 0)], 1).unwrap(),
            Action::from_pairs(1, "s01", &[(0, 0)], &[(0, 1)], 1).unwrap(),
            Action::from_pairs(2, "s12", &[(0, 1)], &[(0, 2)], 1).unwrap(),
        ];
        let t = task_with(3, acts, &[(0, 1)]);
        let d = build_dtg(&t, VariableId(0));
        // from 2 the only way back is the reset edge, then 0→1
        let desc = d.potential_descendants(2, Some(1));
        assert_eq!(desc.vertices, vec![true, true, true]);
        let from_src = d.edges.iter().position(|e| e.from == DtgVertex::Source).unwrap();
        assert!(desc.edges[from_src]);
    }

    /// Brute-force walk enumeration: an edge is a potential descendant iff some
    /// walk (bounded by a generous length) from `v` through it ends at the goal.
    fn walk_oracle(d: &Dtg, v: u32, goal: Option<u32>) -> Vec<bool> {
        let n = d.domain_size as usize;
        let max_len = 2 * (d.edges.len() + n) + 2;
        let mut hit = vec![false; d.edges.len()];
        // states: (current value, set of used edges) explored by DFS with depth bound
        fn dfs(
            d: &Dtg,
            cur: u32,
            goal: Option<u32>,
            used: &mut Vec<usize>,
            depth: usize,
            hit: &mut Vec<bool>,
        ) {
            if goal.is_none_or(|g| g == cur) {
                for &e in used.iter() {
                    hit[e] = true;
                }
            }
            if depth == 0 {
                return;
            }
            for (i, e) in d.edges.iter().enumerate() {
                let ok = match e.from {
                    DtgVertex::Source => true,
                    DtgVertex::Value(u) => u == cur,
                };
                if ok {
                    used.push(i);
                    dfs(d, e.to, goal, used, depth - 1, hit);
                    used.pop();
                }
            }
        }
        dfs(d, v, goal, &mut Vec::new(), max_len.min(10), &mut hit);
        hit
    }

    #[test]
    fn descendants_match_walk_oracle() {
        let acts = vec![
            Action::from_pairs(0, "s01", &[(0, 0)], &[(0, 1)], 1).unwrap(),
            Action::from_pairs(1, "s12", &[(0, 1)], &[(0, 2)], 1).unwrap(),
            Action::from_pairs(2, "s20", &[(0, 2)], &[(0, 0)], 1).unwrap(),
            Action::from_pairs(3, "s32", &[(0, 3)], &[(0, 2)], 1).unwrap(),
            Action::from_pairs(4, "s13", &[(0, 1)], &[(0, 3)], 1).unwrap(),
        ];
        for goal in [None, Some(0), Some(2), Some(3)] {
            let gl: Vec<(usize, u32)> = goal.map(|g| vec![(0, g)]).unwrap_or_default();
            let t = task_with(4, acts.clone(), &gl);
            let d = build_dtg(&t, VariableId(0));
            for v in 0..4 {
                assert_eq!(
                    d.potential_descendants(v, goal).edges,
                    walk_oracle(&d, v, goal),
                    "v={v} goal={goal:?}"
                );
            }
        }
    }
}
