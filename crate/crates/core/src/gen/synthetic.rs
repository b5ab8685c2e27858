//! Random restrictions graphs on a complete bipartite agent-resource graph.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, ToPrimitive};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{bernoulli, GenError};
use crate::instance::{AgentSpec, EdgeSpec, LabelId, ResourceSpec, RestrictionsGraph};
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    pub k: u32,
    /// Size of each agent's label pool.
    pub labels_per_agent: usize,
    /// Inclusive range of integer label costs.
    pub cost_range: (u32, u32),
    /// Largest restriction set on one edge.
    pub max_restrictions_per_edge: usize,
    /// Inclusive range of demands.
    pub rho_range: (u32, u32),
    /// Chance that each round beyond the first `rho` is also allowed.
    pub round_inclusion: Rational,
    pub budget: Rational,
    pub capacity: u32,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self::preset("paper-synthetic", 0).expect("known preset")
    }
}

impl GenParams {
    pub const PRESETS: &'static [&'static str] = &["paper-synthetic", "small"];

    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        let base = Self {
            n: 50,
            m: 50,
            k: 5,
            labels_per_agent: 10,
            cost_range: (1, 4),
            max_restrictions_per_edge: 5,
            rho_range: (1, 5),
            round_inclusion: ratio(1, 2),
            budget: int(4),
            capacity: 1,
            seed,
        };
        match name {
            "paper-synthetic" => Some(base),
            "small" => Some(Self {
                n: 6,
                m: 4,
                k: 3,
                labels_per_agent: 4,
                max_restrictions_per_edge: 2,
                rho_range: (1, 3),
                ..base
            }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: &str| Err(GenError::InvalidParams(msg.into()));
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if self.cost_range.0 == 0 || self.cost_range.0 > self.cost_range.1 {
            return bad("cost range must be non-empty and positive");
        }
        if self.rho_range.0 > self.rho_range.1 {
            return bad("rho range must be non-empty");
        }
        if self.rho_range.1 > self.k {
            return bad("rho cannot exceed k");
        }
        if self.round_inclusion.is_negative() || self.round_inclusion > Rational::one() {
            return bad("round inclusion probability must lie in [0, 1]");
        }
        if self.round_inclusion.denom().to_u64().is_none() {
            return bad("round inclusion denominator too large");
        }
        if self.budget.is_negative() {
            return bad("budget must be non-negative");
        }
        if self.capacity == 0 {
            return bad("capacity must be at least 1");
        }
        Ok(())
    }
}

/// Complete bipartite restrictions graph drawn from `p`; identical for
/// identical parameters.
pub fn gen_synthetic(p: &GenParams) -> Result<RestrictionsGraph, GenError> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let num = p.round_inclusion.numer().to_u64().expect("validated");
    let den = p.round_inclusion.denom().to_u64().expect("validated");
    let width = |n: usize| format!("{}", n.max(1)).len();
    let (wa, wr) = (width(p.n), width(p.m));

    let mut agents = Vec::with_capacity(p.n);
    let mut edges = Vec::with_capacity(p.n * p.m);
    for i in 1..=p.n {
        let id = format!("x{i:0wa$}");
        let rho = rng.random_range(p.rho_range.0..=p.rho_range.1);
        let mut rounds: Vec<u32> = sample(&mut rng, p.k as usize, rho as usize)
            .into_iter()
            .map(|t| t as u32 + 1)
            .collect();
        for t in 1..=p.k {
            if !rounds.contains(&t) && bernoulli(&mut rng, num, den) {
                rounds.push(t);
            }
        }
        let mut agent = AgentSpec::new(id.as_str(), rho, rounds).with_budget(p.budget.clone());
        let pool: Vec<LabelId> = (1..=p.labels_per_agent)
            .map(|l| LabelId(format!("c{l}")))
            .collect();
        for l in &pool {
            agent = agent.with_label(
                l.clone(),
                int(rng.random_range(p.cost_range.0..=p.cost_range.1) as i64),
            );
        }
        for j in 1..=p.m {
            let size = rng.random_range(0..=p.max_restrictions_per_edge.min(pool.len()));
            let picked = sample(&mut rng, pool.len(), size)
                .into_iter()
                .map(|x| pool[x].clone());
            edges.push(EdgeSpec::new(id.as_str(), format!("y{j:0wr$}"), picked));
        }
        agents.push(agent);
    }
    let resources = (1..=p.m)
        .map(|j| ResourceSpec::new(format!("y{j:0wr$}"), p.capacity))
        .collect();
    Ok(RestrictionsGraph::new(p.k, agents, resources, edges)?)
}
