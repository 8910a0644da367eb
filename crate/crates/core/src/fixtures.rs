//! Small hand-built tasks used by tests, the CLI and the documentation.

use crate::task::{Action, PartialAssignment, State, Task, Variable};

fn binary(name: &str) -> Variable {
    Variable::with_domain(name, 2)
}

/// Two independent binary variables, each flipped by one action.
///
/// `x1, x2 ∈ {0,1}`, initial `{x1=0, x2=0}`, goal `{x1=1, x2=1}`,
/// `a: x1 0→1`, `b: x2 0→1`.
pub fn toy2() -> Task {
    Task::new(
        vec![binary("x1"), binary("x2")],
        vec![
            Action::from_pairs(0, "a", &[(0, 0)], &[(0, 1)], 1).unwrap(),
            Action::from_pairs(1, "b", &[(1, 0)], &[(1, 1)], 1).unwrap(),
        ],
        State::new(vec![0, 0]),
        PartialAssignment::from_pairs(&[(0, 1), (1, 1)]).unwrap(),
        false,
    )
    .unwrap()
}

/// Three variables where `b` needs the value `a` produces.
///
/// `a: pre{x1=0} eff{x2=1}`, `b: pre{x2=1, x3=2} eff{x3=3}`, initial
/// `{x1=0, x2=0, x3=2}`, goal `{x3=3}`.
pub fn toy3() -> Task {
    Task::new(
        vec![binary("x1"), binary("x2"), Variable::with_domain("x3", 4)],
        vec![
            Action::from_pairs(0, "a", &[(0, 0)], &[(1, 1)], 1).unwrap(),
            Action::from_pairs(1, "b", &[(1, 1), (2, 2)], &[(2, 3)], 1).unwrap(),
        ],
        State::new(vec![0, 0, 2]),
        PartialAssignment::from_pairs(&[(2, 3)]).unwrap(),
        false,
    )
    .unwrap()
}

/// A goal action `a` reached through a support chain `d → b → a`, plus an
/// applicable action `c` on the chain's middle variable that supports
/// nothing.
///
/// Variables `g ∈ {0,1}`, `m ∈ {0,1,2}`, `r ∈ {0,1}`; initial all zero,
/// goal `{g=1}`.
/// * `a: pre{g=0, m=1} eff{g=1}`
/// * `b: pre{m=0, r=1} eff{m=1}`
/// * `c: pre{m=0} eff{m=2}`
/// * `d: pre{r=0} eff{r=1}`
/// * `e: pre{g=1} eff{g=0}`
pub fn support_chain() -> Task {
    Task::new(
        vec![
            binary("g"),
            Variable::with_domain("m", 3),
            binary("r"),
        ],
        vec![
            Action::from_pairs(0, "a", &[(0, 0), (1, 1)], &[(0, 1)], 1).unwrap(),
            Action::from_pairs(1, "b", &[(1, 0), (2, 1)], &[(1, 1)], 1).unwrap(),
            Action::from_pairs(2, "c", &[(1, 0)], &[(1, 2)], 1).unwrap(),
            Action::from_pairs(3, "d", &[(2, 0)], &[(2, 1)], 1).unwrap(),
            Action::from_pairs(4, "e", &[(0, 1)], &[(0, 0)], 1).unwrap(),
        ],
        State::new(vec![0, 0, 0]),
        PartialAssignment::from_pairs(&[(0, 1)]).unwrap(),
        false,
    )
    .unwrap()
}

fn named(name: &str, values: &[&str]) -> Variable {
    Variable::new(name, values.iter().map(|v| v.to_string()).collect())
}

/// Name, preconditions, effects and cost of one action.
type OpSpec = (String, Vec<(usize, u32)>, Vec<(usize, u32)>, u32);

/// One truck on a line of three locations moving two packages between the
/// ends. With `metric`, driving costs 3, loading 1 and unloading 0.
pub fn logistics(metric: bool) -> Task {
    let locs = ["l0", "l1", "l2"];
    let pkg_vals = ["l0", "l1", "l2", "truck"];
    let variables = vec![named("truck", &locs), named("p1", &pkg_vals), named("p2", &pkg_vals)];
    let (drive, load, unload) = if metric { (3, 1, 0) } else { (1, 1, 1) };
    let mut specs: Vec<OpSpec> = Vec::new();
    for (from, to) in [(0u32, 1u32), (1, 0), (1, 2), (2, 1)] {
        let name = format!("drive {} {}", locs[from as usize], locs[to as usize]);
        specs.push((name, vec![(0, from)], vec![(0, to)], drive));
    }
    for p in 1..=2usize {
        for l in 0..3u32 {
            let loc = locs[l as usize];
            specs.push((format!("load p{p} {loc}"), vec![(0, l), (p, l)], vec![(p, 3)], load));
            specs.push((format!("unload p{p} {loc}"), vec![(0, l), (p, 3)], vec![(p, l)], unload));
        }
    }
    let actions = specs
        .into_iter()
        .enumerate()
        .map(|(i, (n, pre, eff, c))| Action::from_pairs(i, n, &pre, &eff, c).unwrap())
        .collect();
    Task::new(
        variables,
        actions,
        State::new(vec![0, 0, 2]),
        PartialAssignment::from_pairs(&[(1, 2), (2, 0)]).unwrap(),
        metric,
    )
    .unwrap()
}

/// Two rooms, a two-handed robot and three balls that must all move from
/// room `a` to room `b`.
pub fn gripper() -> Task {
    let ball_vals = ["a", "b", "left", "right"];
    let mut variables = vec![named("robot", &["a", "b"])];
    for b in 1..=3 {
        variables.push(named(&format!("ball{b}"), &ball_vals));
    }
    variables.push(named("left", &["free", "busy"]));
    variables.push(named("right", &["free", "busy"]));
    let mut actions = vec![
        Action::from_pairs(0, "move a b", &[(0, 0)], &[(0, 1)], 1).unwrap(),
        Action::from_pairs(1, "move b a", &[(0, 1)], &[(0, 0)], 1).unwrap(),
    ];
    for ball in 1..=3usize {
        for room in 0..2u32 {
            for (hand, hand_var) in [(2u32, 4usize), (3, 5)] {
                let (r, h) = (ball_vals[room as usize], ball_vals[hand as usize]);
                let id = actions.len();
                actions.push(
                    Action::from_pairs(
                        id,
                        format!("pick ball{ball} {r} {h}"),
                        &[(0, room), (ball, room), (hand_var, 0)],
                        &[(ball, hand), (hand_var, 1)],
                        1,
                    )
                    .unwrap(),
                );
                actions.push(
                    Action::from_pairs(
                        id + 1,
                        format!("drop ball{ball} {r} {h}"),
                        &[(0, room), (ball, hand)],
                        &[(ball, room), (hand_var, 0)],
                        1,
                    )
                    .unwrap(),
                );
            }
        }
    }
    Task::new(
        variables,
        actions,
        State::new(vec![0, 0, 0, 0, 0, 0]),
        PartialAssignment::from_pairs(&[(1, 1), (2, 1), (3, 1)]).unwrap(),
        false,
    )
    .unwrap()
}

/// `n` independent switches, each turned on by its own action.
pub fn switches(n: usize) -> Task {
    Task::new(
        (0..n).map(|i| named(&format!("s{i}"), &["off", "on"])).collect(),
        (0..n)
            .map(|i| Action::from_pairs(i, format!("on{i}"), &[(i, 0)], &[(i, 1)], 1).unwrap())
            .collect(),
        State::new(vec![0; n]),
        PartialAssignment::new((0..n).map(|i| (crate::task::VariableId(i), 1))).unwrap(),
        false,
    )
    .unwrap()
}

/// A lock whose key is never produced: the goal is unreachable.
pub fn locked_door() -> Task {
    Task::new(
        vec![named("door", &["closed", "open"]), named("key", &["absent", "present"]), named("lamp", &["off", "on"])],
        vec![
            Action::from_pairs(0, "open", &[(0, 0), (1, 1)], &[(0, 1)], 1).unwrap(),
            Action::from_pairs(1, "light", &[(2, 0)], &[(2, 1)], 1).unwrap(),
            Action::from_pairs(2, "dim", &[(2, 1)], &[(2, 0)], 1).unwrap(),
        ],
        State::new(vec![0, 0, 0]),
        PartialAssignment::from_pairs(&[(0, 1)]).unwrap(),
        false,
    )
    .unwrap()
}

/// Every fixture with the file stem used under `fixtures/`.
pub fn corpus() -> Vec<(&'static str, Task)> {
    vec![
        ("toy2", toy2()),
        ("toy3", toy3()),
        ("support_chain", support_chain()),
        ("logistics", logistics(false)),
        ("logistics_metric", logistics(true)),
        ("gripper", gripper()),
        ("switches", switches(6)),
        ("locked_door", locked_door()),
    ]
}
