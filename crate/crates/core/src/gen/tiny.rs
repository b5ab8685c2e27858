//! Tiny random instances sized for exhaustive cross-checks.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng;

use super::bernoulli;
use crate::instance::{
    AgentSpec, CompatibilityGraph, EdgeSpec, LabelId, ResourceSpec, RestrictionsGraph,
};
use crate::rational::int;

/// Inclusive ranges for every random dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TinyParams {
    pub agents: (usize, usize),
    pub resources: (usize, usize),
    pub k: (u32, u32),
    pub min_rho: u32,
    /// Edge probability as `(num, den)`.
    pub edge_prob: (u64, u64),
    pub capacity: (u32, u32),
    pub labels: (usize, usize),
    pub label_cost: (u32, u32),
    pub budget: (u32, u32),
}

impl Default for TinyParams {
    fn default() -> Self {
        Self {
            agents: (1, 4),
            resources: (1, 3),
            k: (1, 3),
            min_rho: 0,
            edge_prob: (1, 2),
            capacity: (1, 1),
            labels: (0, 0),
            label_cost: (1, 1),
            budget: (0, 0),
        }
    }
}

fn draw(rng: &mut impl Rng, p: &TinyParams) -> RestrictionsGraph {
    let n = rng.random_range(p.agents.0..=p.agents.1);
    let m = rng.random_range(p.resources.0..=p.resources.1);
    let k = rng.random_range(p.k.0..=p.k.1);
    let mut agents = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for i in 1..=n {
        let id = format!("x{i}");
        let allowed = rng.random_range(1..=k) as usize;
        let rounds = sample(rng, k as usize, allowed)
            .into_iter()
            .map(|t| t as u32 + 1);
        let rho = rng.random_range(p.min_rho.min(allowed as u32)..=allowed as u32);
        let mut agent = AgentSpec::new(id.as_str(), rho, rounds)
            .with_budget(int(rng.random_range(p.budget.0..=p.budget.1) as i64));
        let labels: Vec<LabelId> = (1..=rng.random_range(p.labels.0..=p.labels.1))
            .map(|l| LabelId(format!("l{l}")))
            .collect();
        for l in &labels {
            agent = agent.with_label(
                l.clone(),
                int(rng.random_range(p.label_cost.0..=p.label_cost.1) as i64),
            );
        }
        for j in 1..=m {
            if bernoulli(rng, p.edge_prob.0, p.edge_prob.1) {
                let restrictions: Vec<LabelId> = labels
                    .iter()
                    .filter(|_| bernoulli(rng, 1, 2))
                    .cloned()
                    .collect();
                edges.push(EdgeSpec::new(id.as_str(), format!("y{j}"), restrictions));
            }
        }
        agents.push(agent);
    }
    let resources = (1..=m)
        .map(|j| {
            ResourceSpec::new(
                format!("y{j}"),
                rng.random_range(p.capacity.0..=p.capacity.1),
            )
        })
        .collect();
    RestrictionsGraph::new(k, agents, resources, edges).expect("tiny instances are well formed")
}

/// Random label-free instance.
pub fn random_compatibility(rng: &mut impl Rng, p: &TinyParams) -> CompatibilityGraph {
    let p = TinyParams {
        labels: (0, 0),
        ..p.clone()
    };
    draw(rng, &p).compatibility()
}

/// Random labeled instance.
pub fn random_restrictions(rng: &mut impl Rng, p: &TinyParams) -> RestrictionsGraph {
    draw(rng, p)
}
