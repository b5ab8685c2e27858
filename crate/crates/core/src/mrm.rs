//! Feasibility of satisfying every agent, by reduction to one
//! maximum-cardinality matching.
//!
//! Left nodes are agent copies: a single copy for agents needing one round
//! (adjacent to every allowed round of every compatible resource), one copy per
//! allowed round otherwise. Right nodes are resource-round pairs, one per unit
//! of capacity, plus `|K_i| - rho_i` dummy nodes per multi-round agent that
//! absorb the rounds the agent sits out. The instance is feasible iff the
//! matching covers every copy.

use alloc::vec::Vec;

use crate::instance::{CompatibilityGraph, MultiRoundSolution, UnitExpansion};
use crate::matching::{max_cardinality_matching, BipartiteGraph, Matching};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopyNode {
    /// Only copy of an agent with `rho = 1`.
    Single { agent: usize },
    /// Copy of agent for one allowed round.
    Round { agent: usize, round: u32 },
}

impl CopyNode {
    pub fn agent(&self) -> usize {
        match *self {
            Self::Single { agent } | Self::Round { agent, .. } => agent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotNode {
    /// Unit `unit` of resource `resource` in `round`.
    ResourceRound {
        resource: usize,
        unit: usize,
        round: u32,
    },
    /// `index`-th idle slot of `agent`, 1-based.
    Dummy { agent: usize, index: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrmReduction {
    pub graph: BipartiteGraph,
    pub left: Vec<CopyNode>,
    pub right: Vec<SlotNode>,
}

impl MrmReduction {
    pub fn dummy_count(&self, agent: usize) -> usize {
        self.right
            .iter()
            .filter(|s| matches!(s, SlotNode::Dummy { agent: a, .. } if *a == agent))
            .count()
    }

    pub fn copy_count(&self, agent: usize) -> usize {
        self.left.iter().filter(|c| c.agent() == agent).count()
    }

    pub fn resource_round_count(&self) -> usize {
        self.right
            .iter()
            .filter(|s| matches!(s, SlotNode::ResourceRound { .. }))
            .count()
    }
}

pub fn build_mrm_graph(g: &CompatibilityGraph) -> MrmReduction {
    build_for(g, &alloc::vec![true; g.agents().len()])
}

/// Reduction over the agents with `include[i]`; others are left out as if
/// their demand were zero.
pub(crate) fn build_for(g: &CompatibilityGraph, include: &[bool]) -> MrmReduction {
    let units = g.unit_expansion();
    let k = g.k();
    let slot = |u: &UnitExpansion, copy: usize, round: u32| (round as usize - 1) * u.len() + copy;

    let mut right: Vec<SlotNode> = Vec::with_capacity(k as usize * units.len());
    for round in 1..=k {
        for (copy, &resource) in units.origin.iter().enumerate() {
            right.push(SlotNode::ResourceRound {
                resource,
                unit: copy - units.first[resource],
                round,
            });
        }
    }

    let mut left = Vec::new();
    let mut edges = Vec::new();
    let mut neighbors: Vec<Vec<usize>> = alloc::vec![Vec::new(); g.agents().len()];
    for &(a, r) in g.edges() {
        neighbors[a].push(r);
    }
    for (a, spec) in g.agents().iter().enumerate() {
        if !include[a] || spec.rho == 0 {
            continue;
        }
        if spec.rho == 1 {
            let x = left.len();
            left.push(CopyNode::Single { agent: a });
            for &t in &spec.allowed_rounds {
                for &r in &neighbors[a] {
                    edges.extend(units.copies(r).map(|c| (x, slot(&units, c, t))));
                }
            }
            continue;
        }
        let dummies = spec.allowed_rounds.len() - spec.rho as usize;
        let first_dummy = right.len();
        right.extend((1..=dummies as u32).map(|index| SlotNode::Dummy { agent: a, index }));
        for &t in &spec.allowed_rounds {
            let x = left.len();
            left.push(CopyNode::Round { agent: a, round: t });
            for &r in &neighbors[a] {
                edges.extend(units.copies(r).map(|c| (x, slot(&units, c, t))));
            }
            edges.extend((first_dummy..first_dummy + dummies).map(|z| (x, z)));
        }
    }
    let graph =
        BipartiteGraph::new(left.len(), right.len(), edges).expect("reduction edges are distinct");
    MrmReduction { graph, left, right }
}

/// A solution meeting every agent's demand exactly, or `None` when no
/// solution satisfies all agents.
pub fn solve_mrm(g: &CompatibilityGraph) -> Option<MultiRoundSolution> {
    solve_for(g, &alloc::vec![true; g.agents().len()])
}

/// As [`solve_mrm`] for the agents with `include[i]`; the others stay
/// unmatched in the returned solution.
pub fn solve_mrm_subset(g: &CompatibilityGraph, include: &[bool]) -> Option<MultiRoundSolution> {
    solve_for(g, include)
}

fn solve_for(g: &CompatibilityGraph, include: &[bool]) -> Option<MultiRoundSolution> {
    let red = build_for(g, include);
    let m = max_cardinality_matching(&red.graph);
    if m.len() != red.left.len() {
        return None;
    }
    Some(extract(g, &red, &m))
}

/// Per-round assignments from a covering matching. Agents holding more real
/// slots than they need keep their lowest rounds.
fn extract(g: &CompatibilityGraph, red: &MrmReduction, m: &Matching) -> MultiRoundSolution {
    let mut per_agent: Vec<Vec<(u32, usize)>> = alloc::vec![Vec::new(); g.agents().len()];
    for (x, y) in m.pairs() {
        if let SlotNode::ResourceRound {
            resource, round, ..
        } = red.right[y]
        {
            per_agent[red.left[x].agent()].push((round, resource));
        }
    }
    let mut rounds: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); g.k() as usize];
    for (a, mut slots) in per_agent.into_iter().enumerate() {
        slots.sort_unstable();
        slots.truncate(g.agents()[a].rho as usize);
        for (t, r) in slots {
            rounds[t as usize - 1].push((a, r));
        }
    }
    MultiRoundSolution::from_indexed(g, &rounds)
}
