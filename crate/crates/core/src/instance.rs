//! Problem data shared by every solver: restrictions graphs, compatibility
//! graphs and multi-round solutions.
//!
//! Agents, resources and edges are stored sorted by id, so index order is
//! deterministic and every solver iterates in the same order. Solvers work on
//! indices; the public solution type speaks in ids.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub String);

        impl $name {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(String::from(s))
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

id_type!(
    /// Opaque agent identifier.
    AgentId
);
id_type!(
    /// Opaque resource identifier.
    ResourceId
);
id_type!(
    /// Restriction label identifier, scoped to one agent.
    LabelId
);

/// One agent: how many rounds it needs, which rounds it accepts, and the
/// restriction labels it may pay to remove.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSpec {
    pub id: AgentId,
    pub rho: u32,
    pub allowed_rounds: BTreeSet<u32>,
    pub budget: Rational,
    pub labels: BTreeMap<LabelId, Rational>,
}

impl AgentSpec {
    /// Agent with zero budget and no labels.
    pub fn new(
        id: impl Into<AgentId>,
        rho: u32,
        allowed_rounds: impl IntoIterator<Item = u32>,
    ) -> Self {
        Self {
            id: id.into(),
            rho,
            allowed_rounds: allowed_rounds.into_iter().collect(),
            budget: Rational::zero(),
            labels: BTreeMap::new(),
        }
    }

    pub fn with_budget(mut self, budget: Rational) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_label(mut self, label: impl Into<LabelId>, cost: Rational) -> Self {
        self.labels.insert(label.into(), cost);
        self
    }

    /// Total removal cost of a label set; unknown labels are ignored.
    pub fn cost_of<'a>(&self, labels: impl IntoIterator<Item = &'a LabelId>) -> Rational {
        labels
            .into_iter()
            .filter_map(|l| self.labels.get(l))
            .fold(Rational::zero(), |acc, c| acc + c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceSpec {
    pub id: ResourceId,
    pub capacity: u32,
}

impl ResourceSpec {
    pub fn new(id: impl Into<ResourceId>, capacity: u32) -> Self {
        Self {
            id: id.into(),
            capacity,
        }
    }

    pub fn unit(id: impl Into<ResourceId>) -> Self {
        Self::new(id, 1)
    }
}

/// Edge as supplied by callers, addressed by ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub agent: AgentId,
    pub resource: ResourceId,
    pub restrictions: BTreeSet<LabelId>,
}

impl EdgeSpec {
    pub fn new<L: Into<LabelId>>(
        agent: impl Into<AgentId>,
        resource: impl Into<ResourceId>,
        restrictions: impl IntoIterator<Item = L>,
    ) -> Self {
        Self {
            agent: agent.into(),
            resource: resource.into(),
            restrictions: restrictions.into_iter().map(Into::into).collect(),
        }
    }

    pub fn free(agent: impl Into<AgentId>, resource: impl Into<ResourceId>) -> Self {
        Self::new::<LabelId>(agent, resource, [])
    }
}

/// Stored edge: indices into the sorted agent and resource lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabeledEdge {
    pub agent: usize,
    pub resource: usize,
    pub restrictions: BTreeSet<LabelId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("round count must be at least 1")]
    NoRounds,
    #[error("duplicate agent id {0}")]
    DuplicateAgent(AgentId),
    #[error("duplicate resource id {0}")]
    DuplicateResource(ResourceId),
    #[error("agent {agent}: rho {rho} exceeds the {allowed} allowed rounds")]
    RhoExceedsAllowed {
        agent: AgentId,
        rho: u32,
        allowed: usize,
    },
    #[error("agent {agent}: round {round} outside 1..={k}")]
    RoundOutOfRange { agent: AgentId, round: u32, k: u32 },
    #[error("agent {agent}: label {label} must have a positive cost")]
    NonPositiveCost { agent: AgentId, label: LabelId },
    #[error("agent {0}: budget must be non-negative")]
    NegativeBudget(AgentId),
    #[error("resource {0}: capacity must be at least 1")]
    ZeroCapacity(ResourceId),
    #[error("unknown agent {0}")]
    UnknownAgent(AgentId),
    #[error("unknown resource {0}")]
    UnknownResource(ResourceId),
    #[error("agent {agent}: unknown label {label}")]
    UnknownLabel { agent: AgentId, label: LabelId },
    #[error("more than one edge between {agent} and {resource}")]
    DuplicateEdge {
        agent: AgentId,
        resource: ResourceId,
    },
}

fn validate_agents(k: u32, agents: &[AgentSpec]) -> Result<(), InstanceError> {
    for (i, a) in agents.iter().enumerate() {
        if i > 0 && agents[i - 1].id == a.id {
            return Err(InstanceError::DuplicateAgent(a.id.clone()));
        }
        if let Some(&round) = a.allowed_rounds.iter().find(|&&t| t == 0 || t > k) {
            return Err(InstanceError::RoundOutOfRange {
                agent: a.id.clone(),
                round,
                k,
            });
        }
        if a.rho as usize > a.allowed_rounds.len() {
            return Err(InstanceError::RhoExceedsAllowed {
                agent: a.id.clone(),
                rho: a.rho,
                allowed: a.allowed_rounds.len(),
            });
        }
        if a.budget.is_negative() {
            return Err(InstanceError::NegativeBudget(a.id.clone()));
        }
        if let Some((label, _)) = a.labels.iter().find(|(_, c)| !c.is_positive()) {
            return Err(InstanceError::NonPositiveCost {
                agent: a.id.clone(),
                label: label.clone(),
            });
        }
    }
    Ok(())
}

fn validate_resources(resources: &[ResourceSpec]) -> Result<(), InstanceError> {
    for (j, r) in resources.iter().enumerate() {
        if j > 0 && resources[j - 1].id == r.id {
            return Err(InstanceError::DuplicateResource(r.id.clone()));
        }
        if r.capacity == 0 {
            return Err(InstanceError::ZeroCapacity(r.id.clone()));
        }
    }
    Ok(())
}

fn agent_index(agents: &[AgentSpec], id: &AgentId) -> Option<usize> {
    agents.binary_search_by(|a| a.id.cmp(id)).ok()
}

fn resource_index(resources: &[ResourceSpec], id: &ResourceId) -> Option<usize> {
    resources.binary_search_by(|r| r.id.cmp(id)).ok()
}

/// Labeled bipartite graph of agents and resources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionsGraph {
    k: u32,
    agents: Arc<[AgentSpec]>,
    resources: Arc<[ResourceSpec]>,
    edges: Vec<LabeledEdge>,
}

impl RestrictionsGraph {
    pub fn new(
        k: u32,
        mut agents: Vec<AgentSpec>,
        mut resources: Vec<ResourceSpec>,
        edges: Vec<EdgeSpec>,
    ) -> Result<Self, InstanceError> {
        if k == 0 {
            return Err(InstanceError::NoRounds);
        }
        agents.sort_by(|a, b| a.id.cmp(&b.id));
        resources.sort_by(|a, b| a.id.cmp(&b.id));
        validate_agents(k, &agents)?;
        validate_resources(&resources)?;

        let mut stored = Vec::with_capacity(edges.len());
        for e in edges {
            let agent = agent_index(&agents, &e.agent)
                .ok_or_else(|| InstanceError::UnknownAgent(e.agent.clone()))?;
            let resource = resource_index(&resources, &e.resource)
                .ok_or_else(|| InstanceError::UnknownResource(e.resource.clone()))?;
            if let Some(label) = e
                .restrictions
                .iter()
                .find(|l| !agents[agent].labels.contains_key(*l))
            {
                return Err(InstanceError::UnknownLabel {
                    agent: e.agent.clone(),
                    label: label.clone(),
                });
            }
            stored.push(LabeledEdge {
                agent,
                resource,
                restrictions: e.restrictions,
            });
        }
        stored.sort();
        for w in stored.windows(2) {
            if w[0].agent == w[1].agent && w[0].resource == w[1].resource {
                return Err(InstanceError::DuplicateEdge {
                    agent: agents[w[0].agent].id.clone(),
                    resource: resources[w[0].resource].id.clone(),
                });
            }
        }
        Ok(Self {
            k,
            agents: agents.into(),
            resources: resources.into(),
            edges: stored,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn resources(&self) -> &[ResourceSpec] {
        &self.resources
    }

    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    pub fn agent_index(&self, id: &AgentId) -> Option<usize> {
        agent_index(&self.agents, id)
    }

    pub fn resource_index(&self, id: &ResourceId) -> Option<usize> {
        resource_index(&self.resources, id)
    }

    /// Edges incident to one agent, in resource order.
    pub fn edges_of(&self, agent: usize) -> impl Iterator<Item = &LabeledEdge> + '_ {
        let start = self.edges.partition_point(|e| e.agent < agent);
        self.edges[start..]
            .iter()
            .take_while(move |e| e.agent == agent)
    }

    /// Same instance with every budget multiplied by `scale`.
    pub fn with_scaled_budgets(&self, scale: &Rational) -> Self {
        let agents: Vec<AgentSpec> = self
            .agents
            .iter()
            .map(|a| AgentSpec {
                budget: &a.budget * scale,
                ..a.clone()
            })
            .collect();
        Self {
            agents: agents.into(),
            ..self.clone()
        }
    }

    /// Compatibility graph with no labels removed.
    pub fn compatibility(&self) -> CompatibilityGraph {
        self.compatibility_where(|e| e.restrictions.is_empty())
    }

    /// Keeps the edges whose restriction set is covered by the removals of
    /// the incident agent.
    pub fn derive_compatibility(
        &self,
        removals: &BTreeMap<AgentId, BTreeSet<LabelId>>,
    ) -> Result<CompatibilityGraph, InstanceError> {
        let mut per_agent: Vec<Option<&BTreeSet<LabelId>>> = alloc::vec![None; self.agents.len()];
        for (id, labels) in removals {
            let i = self
                .agent_index(id)
                .ok_or_else(|| InstanceError::UnknownAgent(id.clone()))?;
            if let Some(label) = labels
                .iter()
                .find(|l| !self.agents[i].labels.contains_key(*l))
            {
                return Err(InstanceError::UnknownLabel {
                    agent: id.clone(),
                    label: label.clone(),
                });
            }
            per_agent[i] = Some(labels);
        }
        Ok(self.compatibility_where(|e| match per_agent[e.agent] {
            Some(removed) => e.restrictions.is_subset(removed),
            None => e.restrictions.is_empty(),
        }))
    }

    pub(crate) fn compatibility_where(
        &self,
        mut keep: impl FnMut(&LabeledEdge) -> bool,
    ) -> CompatibilityGraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| keep(e))
            .map(|e| (e.agent, e.resource))
            .collect();
        CompatibilityGraph {
            k: self.k,
            agents: Arc::clone(&self.agents),
            resources: Arc::clone(&self.resources),
            edges,
        }
    }
}

/// Label-free graph on which matchings are computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityGraph {
    k: u32,
    agents: Arc<[AgentSpec]>,
    resources: Arc<[ResourceSpec]>,
    edges: Vec<(usize, usize)>,
}

impl CompatibilityGraph {
    /// Builds a compatibility graph directly from unlabeled edges.
    pub fn new(
        k: u32,
        agents: Vec<AgentSpec>,
        resources: Vec<ResourceSpec>,
        edges: Vec<(AgentId, ResourceId)>,
    ) -> Result<Self, InstanceError> {
        let edges = edges
            .into_iter()
            .map(|(a, r)| EdgeSpec::free(a, r))
            .collect();
        Ok(RestrictionsGraph::new(k, agents, resources, edges)?.compatibility())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn resources(&self) -> &[ResourceSpec] {
        &self.resources
    }

    /// `(agent index, resource index)` pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = (&AgentId, &ResourceId)> + '_ {
        self.edges
            .iter()
            .map(|&(a, r)| (&self.agents[a].id, &self.resources[r].id))
    }

    pub fn has_edge(&self, agent: usize, resource: usize) -> bool {
        self.edges.binary_search(&(agent, resource)).is_ok()
    }

    pub fn agent_index(&self, id: &AgentId) -> Option<usize> {
        agent_index(&self.agents, id)
    }

    pub fn resource_index(&self, id: &ResourceId) -> Option<usize> {
        resource_index(&self.resources, id)
    }

    /// Same graph with one more edge; no-op if present.
    pub fn with_edge(&self, agent: usize, resource: usize) -> Self {
        let mut g = self.clone();
        if let Err(pos) = g.edges.binary_search(&(agent, resource)) {
            g.edges.insert(pos, (agent, resource));
        }
        g
    }

    /// Same graph without the listed agents' edges and with their demand
    /// dropped to zero, so they drop out of every reduction.
    pub fn restricted_to(&self, keep: &[bool]) -> Self {
        let agents: Vec<AgentSpec> = self
            .agents
            .iter()
            .zip(keep)
            .map(|(a, &k)| {
                if k {
                    a.clone()
                } else {
                    AgentSpec {
                        rho: 0,
                        ..a.clone()
                    }
                }
            })
            .collect();
        Self {
            k: self.k,
            agents: agents.into(),
            resources: Arc::clone(&self.resources),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|&(a, _)| keep[a])
                .collect(),
        }
    }

    /// Splits every resource of capacity `c` into `c` unit copies.
    pub fn unit_expansion(&self) -> UnitExpansion {
        let mut origin = Vec::new();
        let mut first = Vec::with_capacity(self.resources.len());
        for (j, r) in self.resources.iter().enumerate() {
            first.push(origin.len());
            origin.extend(core::iter::repeat_n(j, r.capacity as usize));
        }
        UnitExpansion { origin, first }
    }
}

/// Unit-capacity copies of the resources of a compatibility graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitExpansion {
    /// Copy index to original resource index.
    pub origin: Vec<usize>,
    /// Original resource index to its first copy.
    pub first: Vec<usize>,
}

impl UnitExpansion {
    pub fn len(&self) -> usize {
        self.origin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin.is_empty()
    }

    pub fn copies(&self, resource: usize) -> core::ops::Range<usize> {
        let end = self
            .first
            .get(resource + 1)
            .copied()
            .unwrap_or(self.origin.len());
        self.first[resource]..end
    }
}

/// `k` matchings plus per-agent matched-round counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiRoundSolution {
    pub rounds: Vec<BTreeSet<(AgentId, ResourceId)>>,
    pub gamma: BTreeMap<AgentId, u32>,
}

impl MultiRoundSolution {
    /// `k` empty rounds, every agent at zero.
    pub fn empty(g: &CompatibilityGraph) -> Self {
        Self::from_indexed(g, &alloc::vec![Vec::new(); g.k() as usize])
    }

    /// Builds a solution from per-round `(agent, resource)` index pairs,
    /// recomputing gamma. `rounds[0]` is round 1.
    pub fn from_indexed(g: &CompatibilityGraph, rounds: &[Vec<(usize, usize)>]) -> Self {
        let mut gamma: BTreeMap<AgentId, u32> =
            g.agents().iter().map(|a| (a.id.clone(), 0)).collect();
        let rounds = rounds
            .iter()
            .map(|pairs| {
                pairs
                    .iter()
                    .map(|&(a, r)| {
                        let id = g.agents()[a].id.clone();
                        (id, g.resources()[r].id.clone())
                    })
                    .collect::<BTreeSet<_>>()
            })
            .collect::<Vec<_>>();
        for round in &rounds {
            for (a, _) in round {
                *gamma.entry(a.clone()).or_insert(0) += 1;
            }
        }
        Self { rounds, gamma }
    }

    pub fn gamma_of(&self, agent: &AgentId) -> u32 {
        self.gamma.get(agent).copied().unwrap_or(0)
    }

    pub fn total_assignments(&self) -> usize {
        self.rounds.iter().map(BTreeSet::len).sum()
    }

    /// Drops every assignment of the agents for which `keep` is false.
    pub fn retain_agents(&mut self, mut keep: impl FnMut(&AgentId) -> bool) {
        for round in &mut self.rounds {
            round.retain(|(a, _)| keep(a));
        }
        for (a, g) in self.gamma.iter_mut() {
            if !keep(a) {
                *g = 0;
            }
        }
    }
}

/// One broken solution invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RoundCount {
        expected: u32,
        found: usize,
    },
    UnknownAgent {
        round: u32,
        agent: AgentId,
    },
    UnknownResource {
        round: u32,
        resource: ResourceId,
    },
    AgentRepeated {
        round: u32,
        agent: AgentId,
    },
    OverCapacity {
        round: u32,
        resource: ResourceId,
        load: u32,
        capacity: u32,
    },
    RoundNotAllowed {
        round: u32,
        agent: AgentId,
    },
    NotAnEdge {
        round: u32,
        agent: AgentId,
        resource: ResourceId,
    },
    GammaMismatch {
        agent: AgentId,
        recorded: u32,
        actual: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RoundCount { expected, found } => {
                write!(f, "expected {expected} rounds, found {found}")
            }
            Self::UnknownAgent { round, agent } => {
                write!(f, "round {round}: unknown agent {agent}")
            }
            Self::UnknownResource { round, resource } => {
                write!(f, "round {round}: unknown resource {resource}")
            }
            Self::AgentRepeated { round, agent } => {
                write!(f, "round {round}: agent {agent} matched more than once")
            }
            Self::OverCapacity {
                round,
                resource,
                load,
                capacity,
            } => {
                write!(
                    f,
                    "round {round}: resource {resource} carries {load} agents, capacity {capacity}"
                )
            }
            Self::RoundNotAllowed { round, agent } => {
                write!(f, "round {round} is not allowed for agent {agent}")
            }
            Self::NotAnEdge {
                round,
                agent,
                resource,
            } => {
                write!(
                    f,
                    "round {round}: {agent}-{resource} is not a compatibility edge"
                )
            }
            Self::GammaMismatch {
                agent,
                recorded,
                actual,
            } => {
                write!(
                    f,
                    "agent {agent}: gamma recorded {recorded}, actual {actual}"
                )
            }
        }
    }
}

/// Lists every violated solution invariant; empty iff `s` is valid on `g`.
pub fn validate_solution(s: &MultiRoundSolution, g: &CompatibilityGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    if s.rounds.len() != g.k() as usize {
        out.push(Violation::RoundCount {
            expected: g.k(),
            found: s.rounds.len(),
        });
    }
    let mut actual = alloc::vec![0u32; g.agents().len()];
    for (t, round) in s.rounds.iter().enumerate() {
        let t = t as u32 + 1;
        let mut seen = alloc::vec![false; g.agents().len()];
        let mut load = alloc::vec![0u32; g.resources().len()];
        for (a_id, r_id) in round {
            let a = g.agent_index(a_id);
            let r = g.resource_index(r_id);
            if a.is_none() {
                out.push(Violation::UnknownAgent {
                    round: t,
                    agent: a_id.clone(),
                });
            }
            if r.is_none() {
                out.push(Violation::UnknownResource {
                    round: t,
                    resource: r_id.clone(),
                });
            }
            let (Some(a), Some(r)) = (a, r) else { continue };
            if seen[a] {
                out.push(Violation::AgentRepeated {
                    round: t,
                    agent: a_id.clone(),
                });
            }
            seen[a] = true;
            actual[a] += 1;
            load[r] += 1;
            if !g.agents()[a].allowed_rounds.contains(&t) {
                out.push(Violation::RoundNotAllowed {
                    round: t,
                    agent: a_id.clone(),
                });
            }
            if !g.has_edge(a, r) {
                out.push(Violation::NotAnEdge {
                    round: t,
                    agent: a_id.clone(),
                    resource: r_id.clone(),
                });
            }
        }
        for (r, spec) in g.resources().iter().enumerate() {
            if load[r] > spec.capacity {
                out.push(Violation::OverCapacity {
                    round: t,
                    resource: spec.id.clone(),
                    load: load[r],
                    capacity: spec.capacity,
                });
            }
        }
    }
    for (a, spec) in g.agents().iter().enumerate() {
        let recorded = s.gamma_of(&spec.id);
        if recorded != actual[a] {
            out.push(Violation::GammaMismatch {
                agent: spec.id.clone(),
                recorded,
                actual: actual[a],
            });
        }
    }
    out
}

/// `true` for agents matched in at least `rho` rounds.
pub fn satisfaction(s: &MultiRoundSolution, agents: &[AgentSpec]) -> BTreeMap<AgentId, bool> {
    agents
        .iter()
        .map(|a| (a.id.clone(), s.gamma_of(&a.id) >= a.rho))
        .collect()
}

pub fn satisfied_count(s: &MultiRoundSolution, agents: &[AgentSpec]) -> usize {
    agents.iter().filter(|a| s.gamma_of(&a.id) >= a.rho).count()
}
