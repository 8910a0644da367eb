//! Graphviz rendering for the derived graphs. Node labels are value, variable
//! or action names from the task.

use std::fmt::Write as _;

use super::{Asg, CausalGraph, Dtg, DtgVertex, Pdg, Stratification};
use crate::task::Task;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn dtg_to_dot(task: &Task, dtg: &Dtg) -> String {
    let var = &task.variables()[dtg.variable.0];
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(&format!("dtg {}", var.name)));
    let _ = writeln!(out, "  \"v0\" [label=\"v0\", shape=point];");
    for (i, name) in var.value_names.iter().enumerate() {
        let _ = writeln!(out, "  \"{i}\" [label={}];", quote(name));
    }
    for e in &dtg.edges {
        let from = match e.from {
            DtgVertex::Source => "v0".to_string(),
            DtgVertex::Value(v) => v.to_string(),
        };
        let label: Vec<&str> = e.actions.iter().map(|&a| task.action(a).name.as_str()).collect();
        let _ = writeln!(out, "  \"{from}\" -> \"{}\" [label={}];", e.to, quote(&label.join(", ")));
    }
    out.push_str("}\n");
    out
}

fn variable_graph<'a>(
    task: &Task,
    title: &str,
    edges: impl Iterator<Item = &'a (crate::task::VariableId, crate::task::VariableId)>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(title));
    for (i, v) in task.variables().iter().enumerate() {
        let _ = writeln!(out, "  \"{i}\" [label={}];", quote(&v.name));
    }
    for (x, y) in edges {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", x.0, y.0);
    }
    out.push_str("}\n");
    out
}

pub fn causal_graph_to_dot(task: &Task, cg: &CausalGraph) -> String {
    variable_graph(task, "causal graph", cg.edges.iter())
}

pub fn pdg_to_dot(task: &Task, pdg: &Pdg) -> String {
    variable_graph(task, &format!("pdg {}", pdg.state), pdg.edges.iter())
}

pub fn asg_to_dot(task: &Task, asg: &Asg) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(&format!("asg {}", asg.state)));
    for a in task.actions() {
        let _ = writeln!(out, "  \"{}\" [label={}];", a.id.0, quote(&a.name));
    }
    for (a, b) in &asg.edges {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", a.0, b.0);
    }
    out.push_str("}\n");
    out
}

/// Causal graph with one cluster per level.
pub fn strata_to_dot(task: &Task, cg: &CausalGraph, strata: &Stratification) -> String {
    let mut out = String::new();
    out.push_str("digraph \"strata\" {\n");
    for (level, vars) in strata.layers() {
        let _ = writeln!(out, "  subgraph \"cluster_{level}\" {{\n    label=\"level {level}\";");
        for v in vars {
            let _ = writeln!(out, "    \"{}\" [label={}];", v.0, quote(&task.variables()[v.0].name));
        }
        out.push_str("  }\n");
    }
    for (x, y) in &cg.edges {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", x.0, y.0);
    }
    out.push_str("}\n");
    out
}
