//! Seeded random SAS+ tasks small enough for exhaustive enumeration.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::task::{Action, PartialAssignment, State, Task, Variable, VariableId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    Unit,
    /// Costs drawn from `0..=3`; the task uses a metric.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomTaskSpec {
    pub seed: u64,
    /// 1 to 6.
    pub num_variables: usize,
    /// Largest domain size, 1 to 3.
    pub max_domain: u32,
    /// 0 to 12.
    pub num_actions: usize,
    /// Clamped to `num_variables`.
    pub goal_size: usize,
    pub cost_mode: CostMode,
    /// Take the goal from the end of a random walk, which guarantees a plan.
    pub goal_from_walk: bool,
    pub walk_length: usize,
}

impl Default for RandomTaskSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            num_variables: 4,
            max_domain: 3,
            num_actions: 8,
            goal_size: 2,
            cost_mode: CostMode::Unit,
            goal_from_walk: true,
            walk_length: 6,
        }
    }
}

impl RandomTaskSpec {
    /// Shape parameters drawn from the seed; always solvable.
    pub fn varied(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
        let num_variables = rng.gen_range(3..=6);
        Self {
            seed,
            num_variables,
            max_domain: rng.gen_range(2..=3),
            num_actions: rng.gen_range(6..=12),
            goal_size: rng.gen_range(1..=num_variables),
            cost_mode: if rng.gen_bool(0.3) { CostMode::Random } else { CostMode::Unit },
            goal_from_walk: true,
            walk_length: rng.gen_range(2..=10),
        }
    }

    /// Same shape with a uniformly random goal, which may be unreachable.
    pub fn with_random_goal(mut self) -> Self {
        self.goal_from_walk = false;
        self
    }

    fn validate(&self) {
        assert!((1..=6).contains(&self.num_variables), "num_variables must be 1..=6");
        assert!((1..=3).contains(&self.max_domain), "max_domain must be 1..=3");
        assert!(self.num_actions <= 12, "num_actions must be at most 12");
    }
}

fn random_assignment(rng: &mut ChaCha8Rng, domains: &[u32], count: usize) -> Vec<(VariableId, u32)> {
    let count = count.min(domains.len());
    sample(rng, domains.len(), count)
        .into_iter()
        .map(|v| (VariableId(v), rng.gen_range(0..domains[v])))
        .collect()
}

/// Deterministic per spec. Panics if the spec is out of range.
pub fn generate_random_task(spec: &RandomTaskSpec) -> Task {
    spec.validate();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let domains: Vec<u32> = (0..spec.num_variables)
        .map(|_| rng.gen_range(spec.max_domain.min(2)..=spec.max_domain))
        .collect();
    let variables = domains
        .iter()
        .enumerate()
        .map(|(i, &d)| Variable::with_domain(format!("v{i}"), d))
        .collect();
    let initial = State::new(domains.iter().map(|&d| rng.gen_range(0..d)).collect());
    let metric = spec.cost_mode == CostMode::Random;
    let actions: Vec<Action> = (0..spec.num_actions)
        .map(|i| {
            let eff_size = rng.gen_range(1..=2);
            let eff = random_assignment(&mut rng, &domains, eff_size);
            // each effect variable may carry a transition source; other
            // variables get an occasional prevail condition
            let mut pre: Vec<(VariableId, u32)> = Vec::new();
            for (v, &d) in domains.iter().enumerate() {
                match eff.iter().find(|&&(e, _)| e.0 == v) {
                    Some(&(_, to)) if d > 1 && rng.gen_bool(0.35) => {
                        let from = (to + rng.gen_range(1..d)) % d;
                        pre.push((VariableId(v), from));
                    }
                    None if rng.gen_bool(0.1) => pre.push((VariableId(v), rng.gen_range(0..d))),
                    _ => {}
                }
            }
            let cost = if metric { rng.gen_range(0..=3) } else { 1 };
            Action {
                id: crate::task::ActionId(i),
                name: format!("op{i}"),
                pre: PartialAssignment::new(pre).expect("distinct variables"),
                eff: PartialAssignment::new(eff).expect("distinct variables"),
                cost,
            }
        })
        .collect();

    let goal_source = if spec.goal_from_walk {
        let mut s = initial.clone();
        for _ in 0..spec.walk_length {
            let app: Vec<&Action> = actions.iter().filter(|a| a.pre.holds_in(&s)).collect();
            if app.is_empty() {
                break;
            }
            s = crate::task::apply_unchecked(&s, app[rng.gen_range(0..app.len())]);
        }
        s
    } else {
        State::new(domains.iter().map(|&d| rng.gen_range(0..d)).collect())
    };
    let goal = PartialAssignment::new(
        sample(&mut rng, domains.len(), spec.goal_size.clamp(1, domains.len()))
            .into_iter()
            .map(|v| (VariableId(v), goal_source.get(VariableId(v)))),
    )
    .expect("distinct variables");
    Task::new(variables, actions, initial, goal, metric).expect("generated task is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::space::brute_force_optimal_cost;

    #[test]
    fn deterministic_per_seed() {
        let spec = RandomTaskSpec::default();
        assert_eq!(generate_random_task(&spec), generate_random_task(&spec));
        for seed in 0..50 {
            let s = RandomTaskSpec::varied(seed);
            assert_eq!(generate_random_task(&s), generate_random_task(&s));
        }
    }

    #[test]
    fn walk_goal_is_solvable() {
        for seed in 0..200 {
            let t = generate_random_task(&RandomTaskSpec::varied(seed));
            assert!(brute_force_optimal_cost(&t, 2000).unwrap().is_some(), "seed {seed}");
        }
    }

    #[test]
    fn minimal_task() {
        let spec = RandomTaskSpec {
            num_variables: 1,
            num_actions: 1,
            goal_size: 1,
            ..Default::default()
        };
        let t = generate_random_task(&spec);
        assert_eq!((t.num_variables(), t.num_actions()), (1, 1));
        let text = crate::sas::emit_sas(&t);
        assert_eq!(crate::sas::parse_sas(&text).unwrap(), t);
    }
}
