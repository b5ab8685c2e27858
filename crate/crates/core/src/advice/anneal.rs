//! Simulated annealing over one candidate index per agent.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    all_candidates, evaluate_plan, induced_graph, AdviceError, AdvicePlan, RelaxationCandidate,
    DEFAULT_LABEL_CAP,
};
use crate::instance::RestrictionsGraph;
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnealConfig {
    pub initial_temperature: Rational,
    /// Multiplies the temperature after every iteration; in `(0, 1)`.
    pub factor: Rational,
    pub floor: Rational,
    pub iterations: u32,
    /// Return to the best state after this many iterations without a new
    /// best.
    pub revert_after: u32,
    pub seed: u64,
    pub label_cap: usize,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            initial_temperature: int(100),
            factor: ratio(99, 100),
            floor: ratio(1, 100),
            iterations: 1000,
            revert_after: 40,
            seed: 0,
            label_cap: DEFAULT_LABEL_CAP,
        }
    }
}

impl AnnealConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Problems with the schedule, if any.
    pub fn check(&self) -> Result<(), &'static str> {
        if self.factor <= Rational::zero() || self.factor >= int(1) {
            return Err("factor must lie strictly between 0 and 1");
        }
        if self.floor <= Rational::zero() {
            return Err("temperature floor must be positive");
        }
        if self.initial_temperature <= Rational::zero() {
            return Err("initial temperature must be positive");
        }
        Ok(())
    }
}

struct Evaluator<'a> {
    g: &'a RestrictionsGraph,
    candidates: &'a [Vec<RelaxationCandidate>],
    memo: BTreeMap<Vec<usize>, usize>,
}

impl Evaluator<'_> {
    fn count(&mut self, state: &[usize]) -> usize {
        if let Some(&v) = self.memo.get(state) {
            return v;
        }
        let v = evaluate_plan(self.g, &self.choices(state)).0;
        self.memo.insert(state.to_vec(), v);
        v
    }

    fn choices(&self, state: &[usize]) -> Vec<&RelaxationCandidate> {
        state
            .iter()
            .zip(self.candidates)
            .map(|(&i, c)| &c[i])
            .collect()
    }
}

/// Annealing from the all-empty plan: each step moves one random agent to
/// another of its candidates and keeps the move by the Metropolis rule on
/// the satisfied count. Deterministic for a fixed seed.
///
/// # Panics
/// If `cfg` fails [`AnnealConfig::check`].
pub fn anneal_advice(g: &RestrictionsGraph, cfg: &AnnealConfig) -> Result<AdvicePlan, AdviceError> {
    if let Err(msg) = cfg.check() {
        panic!("invalid annealing schedule: {msg}");
    }
    let candidates = all_candidates(g, cfg.label_cap)?;
    let n = g.agents().len();
    let movable: Vec<usize> = (0..n).filter(|&a| candidates[a].len() > 1).collect();
    let mut eval = Evaluator {
        g,
        candidates: &candidates,
        memo: BTreeMap::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut state = vec![0usize; n];
    let mut current = eval.count(&state);
    let mut best_state = state.clone();
    let mut best = current;
    let mut temperature = cfg.initial_temperature.clone();
    let mut stall = 0;
    for _ in 0..cfg.iterations {
        if best == n || movable.is_empty() {
            break;
        }
        let a = movable[rng.random_range(0..movable.len())];
        let old = state[a];
        let mut next = rng.random_range(0..candidates[a].len() - 1);
        if next >= old {
            next += 1;
        }
        state[a] = next;
        let value = eval.count(&state);
        let accept = value >= current || {
            let t = temperature.to_f64().expect("finite temperature");
            let delta = (current - value) as f64;
            rng.random::<f64>() < libm::exp(-delta / t)
        };
        if accept {
            current = value;
        } else {
            state[a] = old;
        }
        if current > best {
            best = current;
            best_state.clone_from(&state);
            stall = 0;
        } else {
            stall += 1;
            if stall >= cfg.revert_after {
                state.clone_from(&best_state);
                current = best;
                stall = 0;
            }
        }
        temperature = (&temperature * &cfg.factor).max(cfg.floor.clone());
    }

    let choices = eval.choices(&best_state);
    let (satisfied, solution) = evaluate_plan(g, &choices);
    let compatibility = induced_graph(g, &choices);
    Ok(AdvicePlan {
        choices: choices.into_iter().cloned().collect(),
        compatibility,
        solution,
        satisfied,
    })
}
