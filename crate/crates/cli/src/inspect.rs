use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use porplan::graphs::dot::{asg_to_dot, causal_graph_to_dot, dtg_to_dot, pdg_to_dot, strata_to_dot};
use porplan::graphs::{build_asg, build_causal_graph, build_dtg, build_pdg, build_all_dtgs, stratify, DtgVertex, LevelTieBreak};
use porplan::{ExpansionContext, State, Strategy, StrategyConfig, StrategyKind, Task, VariableId};

use crate::{read_task, write_file, CliError, TieBreakArg, EXIT_SOLVED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct InspectArgs {
    pub input: PathBuf,
    /// Graphs to emit: `dtg:<var>`, `cg`, `strata`, `asg@<state>`,
    /// `pdg@<state>`, `expansion@<state>`. A state is `init` or
    /// comma-separated values.
    #[arg(long = "graph", short = 'g', required = true)]
    pub graphs: Vec<String>,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: Format,
    /// Generating action (by name) for SP expansion sets.
    #[arg(long)]
    pub via: Option<String>,
    #[arg(long, value_enum, default_value = "canonical")]
    pub strat_tiebreak: TieBreakArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphRequest {
    Dtg(String),
    CausalGraph,
    Strata,
    Asg(String),
    Pdg(String),
    Expansion(String),
}

impl FromStr for GraphRequest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(v) = s.strip_prefix("dtg:") {
            return Ok(Self::Dtg(v.to_string()));
        }
        match s.split_once('@') {
            Some(("asg", st)) => Ok(Self::Asg(st.to_string())),
            Some(("pdg", st)) => Ok(Self::Pdg(st.to_string())),
            Some(("expansion", st)) => Ok(Self::Expansion(st.to_string())),
            None if s == "cg" => Ok(Self::CausalGraph),
            None if s == "strata" => Ok(Self::Strata),
            None if s == "expansion" => Ok(Self::Expansion("init".into())),
            _ => Err(format!("unknown graph `{s}`")),
        }
    }
}

fn parse_state(task: &Task, s: &str) -> Result<State, CliError> {
    if s == "init" {
        return Ok(task.initial().clone());
    }
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Config(format!("bad state `{s}`")))?;
    let state = State::new(values);
    task.check_state(&state).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(state)
}

fn parse_variable(task: &Task, v: &str) -> Result<VariableId, CliError> {
    let id = match v.parse::<usize>() {
        Ok(i) => Some(i),
        Err(_) => task.variables().iter().position(|x| x.name == v),
    };
    id.filter(|&i| i < task.num_variables())
        .map(VariableId)
        .ok_or_else(|| CliError::Config(format!("unknown variable `{v}`")))
}

fn action_names(task: &Task, ids: &[porplan::ActionId]) -> Vec<String> {
    ids.iter().map(|&a| task.action(a).name.clone()).collect()
}

fn var_name(task: &Task, v: VariableId) -> &str {
    &task.variables()[v.0].name
}

/// Expansion set of every strategy at `state`.
pub fn expansion_sets(task: &Task, state: &State, via: Option<porplan::ActionId>, tb: LevelTieBreak) -> Result<Value, CliError> {
    let mut out = serde_json::Map::new();
    let ctx = ExpansionContext {
        state,
        generating_action: via,
    };
    for kind in StrategyKind::ALL {
        let cfg = StrategyConfig {
            level_tie_break: tb,
            ..Default::default()
        };
        let s = Strategy::new(task, kind, cfg).map_err(|e| CliError::Config(e.to_string()))?;
        let v = match s.expand(task, &ctx) {
            Ok(set) => json!(action_names(task, &set)),
            Err(e) => json!({ "error": e.to_string() }),
        };
        out.insert(kind.to_string(), v);
    }
    Ok(Value::Object(out))
}

fn render(task: &Task, req: &GraphRequest, args: &InspectArgs) -> Result<String, CliError> {
    let tb: LevelTieBreak = args.strat_tiebreak.into();
    let json_mode = args.format == Format::Json;
    let value = match req {
        GraphRequest::Dtg(v) => {
            let dtg = build_dtg(task, parse_variable(task, v)?);
            if !json_mode {
                return Ok(dtg_to_dot(task, &dtg));
            }
            let edges: Vec<Value> = dtg
                .edges
                .iter()
                .map(|e| {
                    let from = match e.from {
                        DtgVertex::Source => json!("v0"),
                        DtgVertex::Value(x) => json!(x),
                    };
                    json!({ "from": from, "to": e.to, "actions": action_names(task, &e.actions) })
                })
                .collect();
            json!({ "graph": "dtg", "variable": var_name(task, dtg.variable), "domain_size": dtg.domain_size, "edges": edges })
        }
        GraphRequest::CausalGraph => {
            let cg = build_causal_graph(task);
            if !json_mode {
                return Ok(causal_graph_to_dot(task, &cg));
            }
            let edges: Vec<Value> = cg.edges.iter().map(|&(a, b)| json!([var_name(task, a), var_name(task, b)])).collect();
            json!({ "graph": "cg", "nodes": task.num_variables(), "edges": edges })
        }
        GraphRequest::Strata => {
            let cg = build_causal_graph(task);
            let strata = stratify(task, &cg, tb).map_err(|e| CliError::Config(e.to_string()))?;
            if !json_mode {
                return Ok(strata_to_dot(task, &cg, &strata));
            }
            json!({ "graph": "strata", "variable_level": strata.variable_level, "action_level": strata.action_level })
        }
        GraphRequest::Asg(st) => {
            let asg = build_asg(task, &parse_state(task, st)?);
            if !json_mode {
                return Ok(asg_to_dot(task, &asg));
            }
            let edges: Vec<Value> = asg
                .edges
                .iter()
                .map(|&(a, b)| json!([task.action(a).name, task.action(b).name]))
                .collect();
            json!({ "graph": "asg", "state": asg.state.values(), "edges": edges })
        }
        GraphRequest::Pdg(st) => {
            let pdg = build_pdg(task, &parse_state(task, st)?, &build_all_dtgs(task));
            if !json_mode {
                return Ok(pdg_to_dot(task, &pdg));
            }
            let edges: Vec<Value> = pdg.edges.iter().map(|&(a, b)| json!([var_name(task, a), var_name(task, b)])).collect();
            json!({ "graph": "pdg", "state": pdg.state.values(), "edges": edges })
        }
        GraphRequest::Expansion(st) => {
            let state = parse_state(task, st)?;
            let via = match &args.via {
                Some(name) => Some(
                    task.find_action(name)
                        .ok_or_else(|| CliError::Config(format!("unknown action `{name}`")))?,
                ),
                None => None,
            };
            json!({ "expansion": { "state": state.values(), "sets": expansion_sets(task, &state, via, tb)? } })
        }
    };
    Ok(serde_json::to_string_pretty(&value).map_err(|e| CliError::Output(e.to_string()))? + "\n")
}

pub fn run(args: &InspectArgs) -> Result<i32, CliError> {
    let task = read_task(&args.input)?;
    let requests = args
        .graphs
        .iter()
        .map(|g| g.parse::<GraphRequest>().map_err(CliError::Config))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::new();
    for r in &requests {
        out.push_str(&render(&task, r, args)?);
    }
    match &args.out {
        Some(p) => write_file(p, &out)?,
        None => print!("{out}"),
    }
    Ok(EXIT_SOLVED)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_requests() {
        assert_eq!("dtg:0".parse(), Ok(GraphRequest::Dtg("0".into())));
        assert_eq!("cg".parse(), Ok(GraphRequest::CausalGraph));
        assert_eq!("pdg@0,1".parse(), Ok(GraphRequest::Pdg("0,1".into())));
        assert_eq!("expansion@init".parse(), Ok(GraphRequest::Expansion("init".into())));
        assert!("bogus".parse::<GraphRequest>().is_err());
    }

    #[test]
    fn toy2_expansion_sets() {
        let t = porplan::fixtures::toy2();
        let v = expansion_sets(&t, t.initial(), None, LevelTieBreak::Canonical).unwrap();
        assert_eq!(v["none"], json!(["a", "b"]));
        assert_eq!(v["sp"], json!(["a", "b"]));
        assert_eq!(v["ec"].as_array().unwrap().len(), 1);
        assert_eq!(v["sac"].as_array().unwrap().len(), 1);
    }
}
