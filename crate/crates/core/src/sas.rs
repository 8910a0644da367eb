//! Reader and writer for the translator's textual `.sas` output (version 3).
//!
//! Section order is fixed: version, metric, variables, mutex groups, initial
//! state, goal, operators, axioms. Every error carries the 1-based line it was
//! detected on.

use std::fmt::Write as _;

use thiserror::Error;

use crate::task::{Action, ActionId, PartialAssignment, State, Task, Variable, VariableId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SasError {
    #[error("line {line}: expected {expected}")]
    Syntax { line: usize, expected: String },
    #[error("line {line}: unsupported format version {version}")]
    UnsupportedVersion { line: usize, version: i64 },
    #[error("line {line}: unsupported feature: {feature}")]
    UnsupportedFeature { line: usize, feature: &'static str },
    #[error("line {line}: {message}")]
    Range { line: usize, message: String },
}

impl SasError {
    pub fn line(&self) -> usize {
        match self {
            SasError::Syntax { line, .. }
            | SasError::UnsupportedVersion { line, .. }
            | SasError::UnsupportedFeature { line, .. }
            | SasError::Range { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SasVariable {
    pub name: String,
    pub axiom_layer: i64,
    pub value_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SasEffect {
    pub var: usize,
    /// `None` when the file gives `-1`.
    pub pre: Option<u32>,
    pub post: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SasOperator {
    pub name: String,
    pub prevail: Vec<(usize, u32)>,
    pub effects: Vec<SasEffect>,
    pub cost: u32,
    /// Line of `begin_operator`, kept for diagnostics raised after parsing.
    pub line: usize,
}

/// A parsed document, before conversion into a [`Task`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SasDocument {
    pub version: i64,
    pub metric: bool,
    pub variables: Vec<SasVariable>,
    pub mutex_groups: Vec<Vec<(usize, u32)>>,
    pub initial: Vec<u32>,
    pub goal: Vec<(usize, u32)>,
    pub operators: Vec<SasOperator>,
    pub axiom_count: usize,
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().map(|l| l.trim_end_matches('\r')).collect(),
            pos: 0,
        }
    }

    /// Line number of the next line to be read.
    fn line_no(&self) -> usize {
        self.pos + 1
    }

    fn next(&mut self, expected: &str) -> Result<(usize, &'a str), SasError> {
        let line = self.line_no();
        let text = self.lines.get(self.pos).ok_or_else(|| SasError::Syntax {
            line,
            expected: format!("{expected}, found end of input"),
        })?;
        self.pos += 1;
        Ok((line, text))
    }

    fn keyword(&mut self, kw: &str) -> Result<usize, SasError> {
        let (line, text) = self.next(&format!("`{kw}`"))?;
        if text.trim() != kw {
            return Err(SasError::Syntax {
                line,
                expected: format!("`{kw}`"),
            });
        }
        Ok(line)
    }

    fn ints(&mut self, count: usize, what: &str) -> Result<(usize, Vec<i64>), SasError> {
        let (line, text) = self.next(what)?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != count {
            return Err(SasError::Syntax {
                line,
                expected: format!("{what} ({count} integer(s))"),
            });
        }
        let values = fields
            .iter()
            .map(|f| f.parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SasError::Syntax {
                line,
                expected: format!("{what} ({count} integer(s))"),
            })?;
        Ok((line, values))
    }

    fn int(&mut self, what: &str) -> Result<(usize, i64), SasError> {
        let (line, v) = self.ints(1, what)?;
        Ok((line, v[0]))
    }

    fn count(&mut self, what: &str) -> Result<(usize, usize), SasError> {
        let (line, v) = self.int(what)?;
        let n = usize::try_from(v).map_err(|_| SasError::Range {
            line,
            message: format!("{what} must be non-negative, got {v}"),
        })?;
        Ok((line, n))
    }

    fn rest_is_blank(&self) -> Option<usize> {
        (self.pos..self.lines.len())
            .find(|&i| !self.lines[i].trim().is_empty())
            .map(|i| i + 1)
    }
}

struct Domains<'d>(&'d [SasVariable]);

impl Domains<'_> {
    fn var(&self, line: usize, v: i64) -> Result<usize, SasError> {
        usize::try_from(v)
            .ok()
            .filter(|&i| i < self.0.len())
            .ok_or_else(|| SasError::Range {
                line,
                message: format!("variable {v} out of range (have {})", self.0.len()),
            })
    }

    fn value(&self, line: usize, var: usize, v: i64) -> Result<u32, SasError> {
        let size = self.0[var].value_names.len();
        u32::try_from(v)
            .ok()
            .filter(|&x| (x as usize) < size)
            .ok_or_else(|| SasError::Range {
                line,
                message: format!("value {v} outside domain of variable {var} (size {size})"),
            })
    }

    fn fact(&self, line: usize, pair: &[i64]) -> Result<(usize, u32), SasError> {
        let var = self.var(line, pair[0])?;
        Ok((var, self.value(line, var, pair[1])?))
    }
}

impl SasDocument {
    pub fn parse(text: &str) -> Result<Self, SasError> {
        let mut r = Lines::new(text);

        r.keyword("begin_version")?;
        let (line, version) = r.int("format version")?;
        if version != 3 {
            return Err(SasError::UnsupportedVersion { line, version });
        }
        r.keyword("end_version")?;

        r.keyword("begin_metric")?;
        let (line, metric) = r.int("metric flag")?;
        let metric = match metric {
            0 => false,
            1 => true,
            _ => {
                return Err(SasError::Syntax {
                    line,
                    expected: "metric flag 0 or 1".into(),
                })
            }
        };
        r.keyword("end_metric")?;

        let (_, nvars) = r.count("variable count")?;
        let mut variables = Vec::new();
        for _ in 0..nvars {
            r.keyword("begin_variable")?;
            let (_, name) = r.next("variable name")?;
            let (line, axiom_layer) = r.int("axiom layer")?;
            if axiom_layer != -1 {
                return Err(SasError::UnsupportedFeature {
                    line,
                    feature: "axioms",
                });
            }
            let (line, size) = r.count("domain size")?;
            if size == 0 {
                return Err(SasError::Range {
                    line,
                    message: "domain size must be at least 1".into(),
                });
            }
            if size > u32::MAX as usize {
                return Err(SasError::Range {
                    line,
                    message: format!("domain size {size} too large"),
                });
            }
            let mut value_names = Vec::new();
            for _ in 0..size {
                let (_, v) = r.next("value name")?;
                value_names.push(v.to_string());
            }
            r.keyword("end_variable")?;
            variables.push(SasVariable {
                name: name.to_string(),
                axiom_layer,
                value_names,
            });
        }
        let dom = Domains(&variables);

        let (_, ngroups) = r.count("mutex group count")?;
        let mut mutex_groups = Vec::new();
        for _ in 0..ngroups {
            r.keyword("begin_mutex_group")?;
            let (_, size) = r.count("mutex group size")?;
            let mut group = Vec::new();
            for _ in 0..size {
                let (line, f) = r.ints(2, "mutex fact `var val`")?;
                group.push(dom.fact(line, &f)?);
            }
            r.keyword("end_mutex_group")?;
            mutex_groups.push(group);
        }

        r.keyword("begin_state")?;
        let mut initial = Vec::new();
        for var in 0..variables.len() {
            let (line, v) = r.int("initial value")?;
            initial.push(dom.value(line, var, v)?);
        }
        r.keyword("end_state")?;

        r.keyword("begin_goal")?;
        let (_, ngoal) = r.count("goal count")?;
        let mut goal = Vec::new();
        for _ in 0..ngoal {
            let (line, f) = r.ints(2, "goal fact `var val`")?;
            goal.push((line, dom.fact(line, &f)?));
        }
        r.keyword("end_goal")?;
        let goal = merge_facts(goal)?;

        let (_, nops) = r.count("operator count")?;
        let mut operators = Vec::new();
        for _ in 0..nops {
            operators.push(parse_operator(&mut r, &dom, metric)?);
        }

        let (line, axiom_count) = r.count("axiom count")?;
        if axiom_count > 0 {
            return Err(SasError::UnsupportedFeature {
                line,
                feature: "axioms",
            });
        }
        if let Some(line) = r.rest_is_blank() {
            return Err(SasError::Syntax {
                line,
                expected: "end of input".into(),
            });
        }

        Ok(Self {
            version,
            metric,
            variables,
            mutex_groups,
            initial,
            goal,
            operators,
            axiom_count,
        })
    }

    /// Merges prevail conditions and effect pre-values into preconditions.
    pub fn into_task(self) -> Result<Task, SasError> {
        let variables = self
            .variables
            .into_iter()
            .map(|v| Variable::new(v.name, v.value_names))
            .collect();
        let mut actions = Vec::with_capacity(self.operators.len());
        for (i, op) in self.operators.into_iter().enumerate() {
            let line = op.line;
            let pre = op
                .prevail
                .iter()
                .map(|&(v, x)| (VariableId(v), x))
                .chain(op.effects.iter().filter_map(|e| e.pre.map(|p| (VariableId(e.var), p))));
            let pre = PartialAssignment::new(pre).map_err(|_| SasError::Syntax {
                line,
                expected: "consistent preconditions (a variable is required to hold two values)"
                    .into(),
            })?;
            let eff = PartialAssignment::new(op.effects.iter().map(|e| (VariableId(e.var), e.post)))
                .map_err(|_| SasError::Syntax {
                    line,
                    expected: "consistent effects (a variable is set to two values)".into(),
                })?;
            actions.push(Action {
                id: ActionId(i),
                name: op.name,
                pre,
                eff,
                cost: op.cost,
            });
        }
        let goal = PartialAssignment::new(self.goal.iter().map(|&(v, x)| (VariableId(v), x)))
            .expect("goal entries merged during parsing");
        Task::new(variables, actions, State::new(self.initial), goal, self.metric).map_err(|e| {
            SasError::Range {
                line: 1,
                message: e.to_string(),
            }
        })
    }

    pub fn from_task(task: &Task) -> Self {
        let variables = task
            .variables()
            .iter()
            .map(|v| SasVariable {
                name: v.name.clone(),
                axiom_layer: -1,
                value_names: v.value_names.clone(),
            })
            .collect();
        let operators = task
            .actions()
            .iter()
            .map(|a| SasOperator {
                name: a.name.clone(),
                prevail: a
                    .pre
                    .iter()
                    .filter(|(v, _)| !a.eff.contains_var(*v))
                    .map(|(v, x)| (v.0, x))
                    .collect(),
                effects: a
                    .eff
                    .iter()
                    .map(|(v, x)| SasEffect {
                        var: v.0,
                        pre: a.pre.get(v),
                        post: x,
                    })
                    .collect(),
                cost: a.cost,
                line: 0,
            })
            .collect();
        Self {
            version: 3,
            metric: task.uses_metric(),
            variables,
            mutex_groups: Vec::new(),
            initial: task.initial().values().to_vec(),
            goal: task.goal().iter().map(|(v, x)| (v.0, x)).collect(),
            operators,
            axiom_count: 0,
        }
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "begin_version\n{}\nend_version", self.version);
        let _ = writeln!(w, "begin_metric\n{}\nend_metric", u8::from(self.metric));
        let _ = writeln!(w, "{}", self.variables.len());
        for v in &self.variables {
            let _ = writeln!(w, "begin_variable\n{}\n{}\n{}", v.name, v.axiom_layer, v.value_names.len());
            for name in &v.value_names {
                let _ = writeln!(w, "{name}");
            }
            let _ = writeln!(w, "end_variable");
        }
        let _ = writeln!(w, "{}", self.mutex_groups.len());
        for g in &self.mutex_groups {
            let _ = writeln!(w, "begin_mutex_group\n{}", g.len());
            for (v, x) in g {
                let _ = writeln!(w, "{v} {x}");
            }
            let _ = writeln!(w, "end_mutex_group");
        }
        let _ = writeln!(w, "begin_state");
        for x in &self.initial {
            let _ = writeln!(w, "{x}");
        }
        let _ = writeln!(w, "end_state");
        let _ = writeln!(w, "begin_goal\n{}", self.goal.len());
        for (v, x) in &self.goal {
            let _ = writeln!(w, "{v} {x}");
        }
        let _ = writeln!(w, "end_goal");
        let _ = writeln!(w, "{}", self.operators.len());
        for op in &self.operators {
            let _ = writeln!(w, "begin_operator\n{}\n{}", op.name, op.prevail.len());
            for (v, x) in &op.prevail {
                let _ = writeln!(w, "{v} {x}");
            }
            let _ = writeln!(w, "{}", op.effects.len());
            for e in &op.effects {
                let pre = e.pre.map_or(-1, i64::from);
                let _ = writeln!(w, "0 {} {} {}", e.var, pre, e.post);
            }
            let _ = writeln!(w, "{}\nend_operator", op.cost);
        }
        let _ = writeln!(w, "{}", self.axiom_count);
        out
    }
}

fn merge_facts(facts: Vec<(usize, (usize, u32))>) -> Result<Vec<(usize, u32)>, SasError> {
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(facts.len());
    for (line, (v, x)) in facts {
        match out.iter().find(|(w, _)| *w == v) {
            Some(&(_, y)) if y != x => {
                return Err(SasError::Syntax {
                    line,
                    expected: format!("a single value for variable {v}"),
                })
            }
            Some(_) => {}
            None => out.push((v, x)),
        }
    }
    Ok(out)
}

fn parse_operator(r: &mut Lines<'_>, dom: &Domains<'_>, metric: bool) -> Result<SasOperator, SasError> {
    let begin = r.keyword("begin_operator")?;
    let (_, name) = r.next("operator name")?;
    let (_, nprevail) = r.count("prevail count")?;
    let mut prevail = Vec::new();
    for _ in 0..nprevail {
        let (line, f) = r.ints(2, "prevail condition `var val`")?;
        prevail.push((line, dom.fact(line, &f)?));
    }
    let prevail = merge_facts(prevail)?;

    let (line, neff) = r.count("effect count")?;
    if neff == 0 {
        return Err(SasError::Syntax {
            line,
            expected: "at least one effect".into(),
        });
    }
    let mut effects: Vec<SasEffect> = Vec::new();
    for _ in 0..neff {
        let (line, text) = r.next("effect `0 var pre post`")?;
        let fields = text
            .split_whitespace()
            .map(|f| f.parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SasError::Syntax {
                line,
                expected: "effect `0 var pre post`".into(),
            })?;
        match fields.first() {
            Some(0) if fields.len() == 4 => {}
            Some(&n) if n > 0 => {
                return Err(SasError::UnsupportedFeature {
                    line,
                    feature: "conditional effects",
                })
            }
            _ => {
                return Err(SasError::Syntax {
                    line,
                    expected: "effect `0 var pre post`".into(),
                })
            }
        }
        let var = dom.var(line, fields[1])?;
        let pre = match fields[2] {
            -1 => None,
            p => Some(dom.value(line, var, p)?),
        };
        let post = dom.value(line, var, fields[3])?;
        if let Some(&(_, x)) = prevail.iter().find(|(v, _)| *v == var) {
            if pre.is_some_and(|p| p != x) {
                return Err(SasError::Syntax {
                    line,
                    expected: format!("effect pre-value matching prevail on variable {var}"),
                });
            }
        }
        if let Some(other) = effects.iter_mut().find(|e| e.var == var) {
            if other.post != post || (other.pre.is_some() && pre.is_some() && other.pre != pre) {
                return Err(SasError::Syntax {
                    line,
                    expected: format!("a single effect on variable {var}"),
                });
            }
            other.pre = other.pre.or(pre);
            continue;
        }
        effects.push(SasEffect { var, pre, post });
    }

    let (line, cost) = r.int("operator cost")?;
    let cost = u32::try_from(cost).map_err(|_| SasError::Range {
        line,
        message: format!("operator cost {cost} out of range"),
    })?;
    r.keyword("end_operator")?;
    Ok(SasOperator {
        name: name.to_string(),
        prevail,
        effects,
        cost: if metric { cost } else { 1 },
        line: begin,
    })
}

pub fn parse_sas(text: &str) -> Result<Task, SasError> {
    SasDocument::parse(text)?.into_task()
}

pub fn emit_sas(task: &Task) -> String {
    SasDocument::from_task(task).emit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::toy2;

    pub(crate) const TOY2_SAS: &str = "begin_version
3
end_version
begin_metric
0
end_metric
2
begin_variable
x1
-1
2
0
1
end_variable
begin_variable
x2
-1
2
0
1
end_variable
0
begin_state
0
0
end_state
begin_goal
2
0 1
1 1
end_goal
2
begin_operator
a
0
1
0 0 0 1
1
end_operator
begin_operator
b
0
1
0 1 0 1
1
end_operator
0
";

    #[test]
    fn parses_hand_written_toy2() {
        let t = parse_sas(TOY2_SAS).unwrap();
        assert_eq!(t.num_variables(), 2);
        assert_eq!(t.num_actions(), 2);
        assert!(t.actions().iter().all(|a| a.cost == 1));
        assert_eq!(t, toy2());
        assert_eq!(emit_sas(&t), TOY2_SAS);
    }

    #[test]
    fn version_gate() {
        let doc = TOY2_SAS.replacen("begin_version\n3", "begin_version\n2", 1);
        assert_eq!(
            parse_sas(&doc),
            Err(SasError::UnsupportedVersion { line: 2, version: 2 })
        );
    }

    #[test]
    fn axiom_gate() {
        let doc = TOY2_SAS.trim_end().strip_suffix('0').unwrap().to_string()
            + "1\nbegin_rule\n0\n0 0 1\nend_rule\n";
        assert!(matches!(
            parse_sas(&doc),
            Err(SasError::UnsupportedFeature { feature: "axioms", .. })
        ));
    }

    #[test]
    fn conditional_effect_gate() {
        let doc = TOY2_SAS.replacen("0 0 0 1", "1 1 0 0 0 1", 1);
        assert!(matches!(
            parse_sas(&doc),
            Err(SasError::UnsupportedFeature {
                feature: "conditional effects",
                ..
            })
        ));
    }

    #[test]
    fn out_of_domain_value() {
        let doc = TOY2_SAS.replacen("0 0 0 1", "0 0 0 2", 1);
        assert!(matches!(parse_sas(&doc), Err(SasError::Range { .. })));
    }

    #[test]
    fn conflicting_prevail_and_pre() {
        let doc = TOY2_SAS.replacen("a\n0\n1\n0 0 0 1", "a\n1\n0 1\n1\n0 0 0 1", 1);
        assert!(matches!(parse_sas(&doc), Err(SasError::Syntax { .. })));
    }

    #[test]
    fn pre_equal_post_is_kept() {
        let doc = TOY2_SAS.replacen("0 0 0 1", "0 0 1 1", 1);
        let t = parse_sas(&doc).unwrap();
        let a = &t.actions()[0];
        assert_eq!(a.pre.get(VariableId(0)), Some(1));
        assert_eq!(a.eff.get(VariableId(0)), Some(1));
    }

    #[test]
    fn mutex_groups_are_skipped() {
        let doc = TOY2_SAS.replacen(
            "end_variable\n0\nbegin_state",
            "end_variable\n1\nbegin_mutex_group\n2\n0 0\n0 1\nend_mutex_group\nbegin_state",
            1,
        );
        let d = SasDocument::parse(&doc).unwrap();
        assert_eq!(d.mutex_groups, vec![vec![(0, 0), (0, 1)]]);
        assert_eq!(d.into_task().unwrap(), toy2());
    }

    #[test]
    fn truncated_input_reports_line() {
        let cut: String = TOY2_SAS.lines().take(10).collect::<Vec<_>>().join("\n");
        let err = parse_sas(&cut).unwrap_err();
        assert_eq!(err.line(), 11);
    }

    #[test]
    fn trailing_garbage() {
        let doc = format!("{TOY2_SAS}junk\n");
        assert!(matches!(parse_sas(&doc), Err(SasError::Syntax { .. })));
    }
}
