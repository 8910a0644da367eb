//! Strongly connected components and a deterministic sink-first ordering of
//! the condensation.

use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

/// Condensation of a directed graph on nodes `0..n`.
#[derive(Debug, Clone)]
pub struct Condensation {
    /// Component members, each sorted; components ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Successor components (self-loops removed).
    pub successors: Vec<BTreeSet<usize>>,
}

impl Condensation {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        let mut g = DiGraph::<(), ()>::with_capacity(n, edges.len());
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for &(u, v) in &edges {
            g.add_edge(nodes[u], nodes[v], ());
        }
        let mut components: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                c.sort_unstable();
                c
            })
            .collect();
        components.sort_unstable_by_key(|c| c[0]);
        let mut component_of = vec![0; n];
        for (i, c) in components.iter().enumerate() {
            for &v in c {
                component_of[v] = i;
            }
        }
        let mut successors = vec![BTreeSet::new(); components.len()];
        for (u, v) in edges {
            let (cu, cv) = (component_of[u], component_of[v]);
            if cu != cv {
                successors[cu].insert(cv);
            }
        }
        Self {
            components,
            component_of,
            successors,
        }
    }

    /// Components ordered so that every component appears after all of its
    /// successors. Among ready components the one with the smallest member
    /// goes first, which makes the order deterministic.
    pub fn sink_first_order(&self) -> Vec<usize> {
        let k = self.components.len();
        let mut remaining: Vec<usize> = self.successors.iter().map(BTreeSet::len).collect();
        let mut predecessors = vec![Vec::new(); k];
        for (c, succ) in self.successors.iter().enumerate() {
            for &d in succ {
                predecessors[d].push(c);
            }
        }
        // components are indexed by smallest member, so the index is the key
        let mut ready: BTreeSet<usize> = (0..k).filter(|&c| remaining[c] == 0).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(c) = ready.pop_first() {
            order.push(c);
            for &p in &predecessors[c] {
                remaining[p] -= 1;
                if remaining[p] == 0 {
                    ready.insert(p);
                }
            }
        }
        debug_assert_eq!(order.len(), k);
        order
    }

    /// Components ordered so that every component appears before all of its
    /// successors (sources first).
    pub fn source_first_order(&self) -> Vec<usize> {
        let k = self.components.len();
        let mut indegree = vec![0usize; k];
        for succ in &self.successors {
            for &d in succ {
                indegree[d] += 1;
            }
        }
        let mut ready: BTreeSet<usize> = (0..k).filter(|&c| indegree[c] == 0).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(c) = ready.pop_first() {
            order.push(c);
            for &d in &self.successors[c] {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    ready.insert(d);
                }
            }
        }
        order
    }
}
