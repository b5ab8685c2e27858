//! Advice generation: which labels each agent should drop, within budget, so
//! that as many agents as possible can be satisfied.
//!
//! Every agent gets a short list of relaxation candidates (the label sets
//! worth considering), a plan picks one candidate per agent, and plans are
//! searched either by simulated annealing or exhaustively.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::benefit::{profiles_for, Welfare};
use crate::instance::{
    satisfied_count, AgentId, CompatibilityGraph, LabelId, MultiRoundSolution, ResourceId,
    RestrictionsGraph,
};
use crate::maxsa::{solve_maxsa_exact, MaxsaError, MaxsaResult, DEFAULT_BUDGET};
use crate::maxtb::solve_maxtb;
use crate::rational::{zero, Rational};

mod anneal;
mod ilp;

pub use anneal::{anneal_advice, AnnealConfig};
pub(crate) use ilp::integer_row;
pub use ilp::{
    build_ilp, emit_lp, ConstraintFamily, IlpConstraint, IlpModel, IlpVar, Sense, VarKind,
};

/// Largest label pool enumerated per agent by default.
pub const DEFAULT_LABEL_CAP: usize = 20;

/// Default limit on plans visited by [`exact_advice`].
pub const DEFAULT_NODE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdviceError {
    #[error("agent {agent} has {labels} labels, above the enumeration cap of {cap}")]
    LabelCap {
        agent: AgentId,
        labels: usize,
        cap: usize,
    },
    #[error("node limit of {limit} exceeded; best plan found satisfies {}", .incumbent.satisfied)]
    BudgetExceeded {
        limit: u64,
        incumbent: Box<AdvicePlan>,
    },
    #[error(transparent)]
    Maxsa(#[from] MaxsaError),
}

/// One label set an agent may remove.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RelaxationCandidate {
    pub agent: AgentId,
    pub labels: BTreeSet<LabelId>,
    pub cost: Rational,
    /// Resources whose edge becomes usable, excluding edges that are free
    /// already.
    pub unlocked: BTreeSet<ResourceId>,
}

impl RelaxationCandidate {
    /// Removes nothing.
    pub fn empty(agent: AgentId) -> Self {
        Self {
            agent,
            labels: BTreeSet::new(),
            cost: zero(),
            unlocked: BTreeSet::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdvicePlan {
    /// One choice per agent, in agent order.
    pub choices: Vec<RelaxationCandidate>,
    pub compatibility: CompatibilityGraph,
    pub solution: MultiRoundSolution,
    pub satisfied: usize,
}

impl AdvicePlan {
    /// Non-empty removals only.
    pub fn removals(&self) -> BTreeMap<AgentId, BTreeSet<LabelId>> {
        self.choices
            .iter()
            .filter(|c| !c.is_empty())
            .map(|c| (c.agent.clone(), c.labels.clone()))
            .collect()
    }
}

/// Pareto-maximal affordable label sets of `agent` (no further label fits),
/// reduced to those unlocking a set of edges not contained in another
/// candidate's, cheapest first among equal unlocked sets. Index 0 is always
/// the empty choice.
pub fn candidate_relaxations(
    g: &RestrictionsGraph,
    agent: usize,
    cap: usize,
) -> Result<Vec<RelaxationCandidate>, AdviceError> {
    let spec = &g.agents()[agent];
    if spec.labels.len() > cap {
        return Err(AdviceError::LabelCap {
            agent: spec.id.clone(),
            labels: spec.labels.len(),
            cap,
        });
    }
    let labels: Vec<(&LabelId, &Rational)> = spec.labels.iter().collect();
    let mut maximal = Vec::new();
    let mut chosen = vec![false; labels.len()];
    maximal_sets(&labels, &spec.budget, 0, zero(), &mut chosen, &mut maximal);

    let mut by_unlocked: BTreeMap<BTreeSet<ResourceId>, RelaxationCandidate> = BTreeMap::new();
    for (set, cost) in maximal {
        let unlocked: BTreeSet<ResourceId> = g
            .edges_of(agent)
            .filter(|e| !e.restrictions.is_empty() && e.restrictions.is_subset(&set))
            .map(|e| g.resources()[e.resource].id.clone())
            .collect();
        if unlocked.is_empty() {
            continue;
        }
        let candidate = RelaxationCandidate {
            agent: spec.id.clone(),
            labels: set,
            cost,
            unlocked: unlocked.clone(),
        };
        match by_unlocked.get(&unlocked) {
            Some(kept) if (&kept.cost, &kept.labels) <= (&candidate.cost, &candidate.labels) => {}
            _ => {
                by_unlocked.insert(unlocked, candidate);
            }
        }
    }
    let keys: Vec<&BTreeSet<ResourceId>> = by_unlocked.keys().collect();
    let mut out: Vec<RelaxationCandidate> = by_unlocked
        .values()
        .filter(|c| {
            !keys
                .iter()
                .any(|k| k.len() > c.unlocked.len() && c.unlocked.is_subset(k))
        })
        .cloned()
        .collect();
    out.sort_by(|a, b| a.labels.cmp(&b.labels));
    out.insert(0, RelaxationCandidate::empty(spec.id.clone()));
    Ok(out)
}

fn maximal_sets(
    labels: &[(&LabelId, &Rational)],
    budget: &Rational,
    pos: usize,
    cost: Rational,
    chosen: &mut [bool],
    out: &mut Vec<(BTreeSet<LabelId>, Rational)>,
) {
    if pos == labels.len() {
        let room = budget - &cost;
        let fits_more = labels
            .iter()
            .zip(chosen.iter())
            .any(|((_, c), &used)| !used && **c <= room);
        if !fits_more {
            let set = labels
                .iter()
                .zip(chosen.iter())
                .filter(|(_, &u)| u)
                .map(|((l, _), _)| (*l).clone())
                .collect();
            out.push((set, cost));
        }
        return;
    }
    let with = &cost + labels[pos].1;
    if with <= *budget {
        chosen[pos] = true;
        maximal_sets(labels, budget, pos + 1, with, chosen, out);
        chosen[pos] = false;
    }
    maximal_sets(labels, budget, pos + 1, cost, chosen, out);
}

/// Candidate lists for every agent.
pub fn all_candidates(
    g: &RestrictionsGraph,
    cap: usize,
) -> Result<Vec<Vec<RelaxationCandidate>>, AdviceError> {
    (0..g.agents().len())
        .map(|a| candidate_relaxations(g, a, cap))
        .collect()
}

/// Compatibility graph induced by one choice per agent.
pub fn induced_graph(
    g: &RestrictionsGraph,
    choices: &[&RelaxationCandidate],
) -> CompatibilityGraph {
    let removals: BTreeMap<AgentId, BTreeSet<LabelId>> = choices
        .iter()
        .map(|c| (c.agent.clone(), c.labels.clone()))
        .collect();
    g.derive_compatibility(&removals)
        .expect("candidates name their own agent's labels")
}

/// Agents fully served by a utilitarian optimum of the induced graph.
pub fn evaluate_plan(
    g: &RestrictionsGraph,
    choices: &[&RelaxationCandidate],
) -> (usize, MultiRoundSolution) {
    let c = induced_graph(g, choices);
    evaluate_induced(&c)
}

fn evaluate_induced(c: &CompatibilityGraph) -> (usize, MultiRoundSolution) {
    let out = solve_maxtb(c, &profiles_for(c, Welfare::Utilitarian))
        .expect("utilitarian profiles are valid");
    (satisfied_count(&out.solution, c.agents()), out.solution)
}

/// Best plan over the full cross product of candidates, each induced graph
/// solved exactly. `limit` caps the plans visited.
pub fn exact_advice(g: &RestrictionsGraph, limit: u64) -> Result<AdvicePlan, AdviceError> {
    exact_advice_within(g, limit, DEFAULT_BUDGET)
}

/// [`exact_advice`] with `checks` feasibility checks allowed per induced
/// graph.
pub fn exact_advice_within(
    g: &RestrictionsGraph,
    limit: u64,
    checks: u64,
) -> Result<AdvicePlan, AdviceError> {
    search_plans(g, limit, checks, false)
        .map(|p| p.expect("search without early exit returns a plan"))
}

/// A plan satisfying everyone, if one exists.
pub fn agmrm_feasible(
    g: &RestrictionsGraph,
    limit: u64,
) -> Result<Option<AdvicePlan>, AdviceError> {
    agmrm_feasible_within(g, limit, DEFAULT_BUDGET)
}

pub fn agmrm_feasible_within(
    g: &RestrictionsGraph,
    limit: u64,
    checks: u64,
) -> Result<Option<AdvicePlan>, AdviceError> {
    search_plans(g, limit, checks, true)
}

fn search_plans(
    g: &RestrictionsGraph,
    limit: u64,
    checks: u64,
    only_full: bool,
) -> Result<Option<AdvicePlan>, AdviceError> {
    let n = g.agents().len();
    let candidates = all_candidates(g, DEFAULT_LABEL_CAP)?;
    let mut pick = vec![0usize; n];
    let mut seen: BTreeMap<Vec<(usize, usize)>, MaxsaResult> = BTreeMap::new();
    let mut best: Option<(Vec<usize>, CompatibilityGraph, MaxsaResult)> = None;
    let mut visited = 0u64;
    let plan = |pick: &[usize], c: CompatibilityGraph, r: MaxsaResult| AdvicePlan {
        choices: pick
            .iter()
            .zip(&candidates)
            .map(|(&p, cs)| cs[p].clone())
            .collect(),
        compatibility: c,
        satisfied: r.count(),
        solution: r.solution,
    };
    loop {
        if visited >= limit {
            let incumbent = match best {
                Some((p, c, r)) => plan(&p, c, r),
                None => {
                    let choices: Vec<RelaxationCandidate> =
                        candidates.iter().map(|cs| cs[0].clone()).collect();
                    let c = induced_graph(g, &choices.iter().collect::<Vec<_>>());
                    AdvicePlan {
                        solution: MultiRoundSolution::empty(&c),
                        compatibility: c,
                        satisfied: 0,
                        choices,
                    }
                }
            };
            return Err(AdviceError::BudgetExceeded {
                limit,
                incumbent: Box::new(incumbent),
            });
        }
        visited += 1;
        let choice: Vec<&RelaxationCandidate> = pick
            .iter()
            .zip(&candidates)
            .map(|(&p, cs)| &cs[p])
            .collect();
        let c = induced_graph(g, &choice);
        let key = c.edges().to_vec();
        let r = match seen.get(&key) {
            Some(r) => r.clone(),
            None => {
                let r = solve_maxsa_exact(&c, checks)?;
                seen.insert(key, r.clone());
                r
            }
        };
        if best.as_ref().is_none_or(|(_, _, b)| r.count() > b.count()) {
            best = Some((pick.clone(), c, r));
        }
        if best.as_ref().is_some_and(|(_, _, b)| b.count() == n) {
            break;
        }
        // Odometer over the cross product.
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            pick[i] += 1;
            if pick[i] < candidates[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let (p, c, r) = best.expect("at least one plan visited");
    if only_full && r.count() < n {
        return Ok(None);
    }
    Ok(Some(plan(&p, c, r)))
}
