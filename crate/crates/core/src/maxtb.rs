//! Total-benefit maximization by reduction to one maximum-weight matching.
//!
//! Every agent gets one copy per allowed round. A copy can take a real
//! resource-round slot (weight 1), one of `rho_i` slack slots of its agent
//! (weight `1 - delta_i(p)`), or one of `|K_i| - rho_i` cap slots (weight
//! `k + 1`). Cap slots are heavy enough to be filled in every optimum, which
//! leaves exactly `rho_i` copies for real and slack slots, so an agent never
//! gets more than `rho_i` rounds. A saturated optimum of weight `W` yields a
//! solution of benefit `W - lambda`, where
//!
//! `lambda = sum_i (k + 1)(|K_i| - rho_i) + sum_i sum_l (1 - delta_i(l))`
//!
//! depends only on the instance. The identity is checked on every solve.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::benefit::{check_validity, total_benefit, BenefitProfile};
use crate::instance::{AgentId, AgentSpec, CompatibilityGraph, MultiRoundSolution};
use crate::matching::{max_weight_matching, BipartiteGraph, Matching};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaxtbError {
    #[error("expected {expected} benefit profiles, got {found}")]
    ProfileCount { expected: usize, found: usize },
    #[error("agent {agent}: profile has {found} increments but rho is {rho}")]
    ProfileLength {
        agent: AgentId,
        rho: u32,
        found: usize,
    },
    #[error("agent {agent}: benefit profile violates {property}")]
    InvalidProfile {
        agent: AgentId,
        property: &'static str,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxtbSlot {
    /// Unit `unit` of resource `resource` in `round`.
    Real {
        resource: usize,
        unit: usize,
        round: u32,
    },
    /// Slack slot `p` of `agent`, weight `1 - delta(p)`.
    Slack { agent: usize, p: u32 },
    /// Cap slot `p` of `agent`, weight `k + 1`.
    Cap { agent: usize, p: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxtbReduction {
    pub graph: BipartiteGraph,
    /// `(agent, round)` per copy.
    pub left: Vec<(usize, u32)>,
    pub right: Vec<MaxtbSlot>,
    pub lambda: Rational,
}

impl MaxtbReduction {
    pub fn slack_count(&self, agent: usize) -> usize {
        self.right
            .iter()
            .filter(|s| matches!(s, MaxtbSlot::Slack { agent: a, .. } if *a == agent))
            .count()
    }

    pub fn cap_count(&self, agent: usize) -> usize {
        self.right
            .iter()
            .filter(|s| matches!(s, MaxtbSlot::Cap { agent: a, .. } if *a == agent))
            .count()
    }
}

fn check_profiles(agents: &[AgentSpec], profiles: &[BenefitProfile]) -> Result<(), MaxtbError> {
    if agents.len() != profiles.len() {
        return Err(MaxtbError::ProfileCount {
            expected: agents.len(),
            found: profiles.len(),
        });
    }
    for (a, p) in agents.iter().zip(profiles) {
        if p.rho() != a.rho as usize {
            return Err(MaxtbError::ProfileLength {
                agent: a.id.clone(),
                rho: a.rho,
                found: p.rho(),
            });
        }
        if let Some(property) = check_validity(p).first_failure() {
            return Err(MaxtbError::InvalidProfile {
                agent: a.id.clone(),
                property,
            });
        }
    }
    Ok(())
}

/// Weighted reduction graph; agents with zero demand are left out.
pub fn build_maxtb_graph(
    g: &CompatibilityGraph,
    profiles: &[BenefitProfile],
) -> Result<MaxtbReduction, MaxtbError> {
    check_profiles(g.agents(), profiles)?;
    let units = g.unit_expansion();
    let k = g.k();
    let cap_weight = int(k as i64 + 1);

    let mut right = Vec::with_capacity(k as usize * units.len());
    for round in 1..=k {
        for (copy, &resource) in units.origin.iter().enumerate() {
            right.push(MaxtbSlot::Real {
                resource,
                unit: copy - units.first[resource],
                round,
            });
        }
    }
    let mut neighbors: Vec<Vec<usize>> = alloc::vec![Vec::new(); g.agents().len()];
    for &(a, r) in g.edges() {
        neighbors[a].push(r);
    }

    let mut left = Vec::new();
    let mut edges = Vec::new();
    let mut lambda = Rational::zero();
    for (a, spec) in g.agents().iter().enumerate() {
        if spec.rho == 0 {
            continue;
        }
        let caps = spec.allowed_rounds.len() - spec.rho as usize;
        let first_slack = right.len();
        right.extend((1..=spec.rho).map(|p| MaxtbSlot::Slack { agent: a, p }));
        let first_cap = right.len();
        right.extend((1..=caps as u32).map(|p| MaxtbSlot::Cap { agent: a, p }));

        let profile = &profiles[a];
        lambda += &cap_weight * int(caps as i64);
        for d in profile.increments() {
            lambda += Rational::one() - d;
        }

        for &t in &spec.allowed_rounds {
            let x = left.len();
            left.push((a, t));
            for &r in &neighbors[a] {
                for c in units.copies(r) {
                    edges.push((x, (t as usize - 1) * units.len() + c, Rational::one()));
                }
            }
            for (p, d) in profile.increments().iter().enumerate() {
                edges.push((x, first_slack + p, Rational::one() - d));
            }
            for c in 0..caps {
                edges.push((x, first_cap + c, cap_weight.clone()));
            }
        }
    }
    let graph = BipartiteGraph::weighted(left.len(), right.len(), edges)
        .map_err(|e| MaxtbError::Internal(alloc::format!("reduction graph rejected: {e}")))?;
    Ok(MaxtbReduction {
        graph,
        left,
        right,
        lambda,
    })
}

/// Extends a maximum-weight matching to cover every copy and every cap slot
/// without changing its weight: leftover copies take free slack slots of
/// their own agent, which must have weight zero.
pub fn saturate(m: &Matching, r: &MaxtbReduction) -> Result<Matching, MaxtbError> {
    let mut out = m.clone();
    for (x, &(agent, _)) in r.left.iter().enumerate() {
        if out.mate_of_left(x).is_some() {
            continue;
        }
        let free = (0..r.right.len()).find(|&y| {
            matches!(r.right[y], MaxtbSlot::Slack { agent: a, .. } if a == agent)
                && out.mate_of_right(y).is_none()
        });
        let Some(y) = free else {
            return Err(MaxtbError::Internal(alloc::format!(
                "copy {x} has no free slack slot"
            )));
        };
        let w = r
            .graph
            .weight(x, y)
            .expect("copies reach all their slack slots");
        if !w.is_zero() {
            return Err(MaxtbError::Internal(alloc::format!(
                "copy {x} and free slack slot {y} have weight {w}; matching was not maximum"
            )));
        }
        out.insert(x, y);
    }
    if let Some(y) = (0..r.right.len())
        .find(|&y| matches!(r.right[y], MaxtbSlot::Cap { .. }) && out.mate_of_right(y).is_none())
    {
        return Err(MaxtbError::Internal(alloc::format!(
            "cap slot {y} unmatched"
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxtbOutcome {
    pub solution: MultiRoundSolution,
    pub total_benefit: Rational,
    /// Weight of the saturated matching.
    pub weight: Rational,
    pub lambda: Rational,
}

/// Solution maximizing `sum_i mu_i(gamma_i)` for valid profiles, given in
/// agent order.
pub fn solve_maxtb(
    g: &CompatibilityGraph,
    profiles: &[BenefitProfile],
) -> Result<MaxtbOutcome, MaxtbError> {
    let red = build_maxtb_graph(g, profiles)?;
    let m = saturate(&max_weight_matching(&red.graph), &red)?;
    let weight = m
        .weight(&red.graph)
        .expect("matching lives on the reduction graph");

    let mut rounds: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); g.k() as usize];
    for (x, y) in m.pairs() {
        if let MaxtbSlot::Real {
            resource, round, ..
        } = red.right[y]
        {
            rounds[round as usize - 1].push((red.left[x].0, resource));
        }
    }
    let solution = MultiRoundSolution::from_indexed(g, &rounds);
    let gamma = g.agents().iter().map(|a| solution.gamma_of(&a.id));
    let total = total_benefit(profiles, gamma);
    if weight != &total + &red.lambda {
        return Err(MaxtbError::Internal(alloc::format!(
            "weight {weight} differs from benefit {total} plus lambda {}",
            red.lambda
        )));
    }
    Ok(MaxtbOutcome {
        solution,
        total_benefit: total,
        weight,
        lambda: red.lambda,
    })
}

/// `min_i gamma_i / rho_i` over agents with positive demand; 1 when there are
/// none.
pub fn min_satisfaction_ratio(s: &MultiRoundSolution, agents: &[AgentSpec]) -> Rational {
    agents
        .iter()
        .filter(|a| a.rho >= 1)
        .map(|a| Rational::new(s.gamma_of(&a.id).into(), a.rho.into()))
        .min()
        .unwrap_or_else(Rational::one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benefit::{profiles_for, satisfied_agents, utilitarian, Welfare};
    use crate::fixtures;
    use crate::instance::{validate_solution, ResourceSpec};
    use crate::rational::ratio;
    use alloc::vec;

    fn one_agent(k: u32, rounds: &[u32], rho: u32, edge: bool) -> CompatibilityGraph {
        let edges = if edge {
            vec![("a".into(), "r".into())]
        } else {
            vec![]
        };
        CompatibilityGraph::new(
            k,
            vec![AgentSpec::new("a", rho, rounds.iter().copied())],
            vec![ResourceSpec::unit("r")],
            edges,
        )
        .unwrap()
    }

    #[test]
    fn lambda_single_round() {
        let g = one_agent(1, &[1], 1, true);
        assert_eq!(
            build_maxtb_graph(&g, &[utilitarian(1)]).unwrap().lambda,
            int(0)
        );
    }

    #[test]
    fn lambda_counts_cap_slots_at_their_weight() {
        let g = one_agent(2, &[1, 2], 1, true);
        let red = build_maxtb_graph(&g, &[utilitarian(1)]).unwrap();
        assert_eq!(red.lambda, int(3));
        let out = solve_maxtb(&g, &[utilitarian(1)]).unwrap();
        assert_eq!(out.weight, int(4));
        assert_eq!(out.total_benefit, int(1));
    }

    #[test]
    fn slot_counts_on_three_agent_example() {
        let g = fixtures::three_agent_example();
        let red = build_maxtb_graph(&g, &profiles_for(&g, Welfare::Utilitarian)).unwrap();
        let counts: Vec<_> = (0..3)
            .map(|a| (red.slack_count(a), red.cap_count(a)))
            .collect();
        assert_eq!(counts, vec![(1, 2), (2, 1), (2, 1)]);
    }

    #[test]
    fn utilitarian_reaches_total_demand_on_feasible_example() {
        let g = fixtures::three_agent_example();
        let out = solve_maxtb(&g, &profiles_for(&g, Welfare::Utilitarian)).unwrap();
        assert_eq!(out.total_benefit, int(5));
        assert!(validate_solution(&out.solution, &g).is_empty());
        assert_eq!(min_satisfaction_ratio(&out.solution, g.agents()), int(1));
    }

    #[test]
    fn empty_graph_has_zero_benefit() {
        let g = CompatibilityGraph::new(
            2,
            vec![AgentSpec::new("a", 2, [1, 2]), AgentSpec::new("b", 1, [2])],
            vec![ResourceSpec::unit("r")],
            vec![],
        )
        .unwrap();
        let out = solve_maxtb(&g, &profiles_for(&g, Welfare::Rawlsian)).unwrap();
        assert_eq!(out.total_benefit, int(0));
        assert_eq!(out.solution.total_assignments(), 0);
    }

    #[test]
    fn isolated_copy_is_saturated_onto_its_slack_slot() {
        let g = one_agent(1, &[1], 1, false);
        let red = build_maxtb_graph(&g, &[utilitarian(1)]).unwrap();
        let m = saturate(&max_weight_matching(&red.graph), &red).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.weight(&red.graph).unwrap(), int(0));
    }

    #[test]
    fn saturating_a_saturated_matching_is_a_fixpoint() {
        let g = fixtures::three_agent_example();
        let red = build_maxtb_graph(&g, &profiles_for(&g, Welfare::Utilitarian)).unwrap();
        let once = saturate(&max_weight_matching(&red.graph), &red).unwrap();
        let twice = saturate(&once, &red).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn rejects_invalid_or_mismatched_profiles() {
        let g = one_agent(2, &[1, 2], 2, true);
        assert_eq!(
            build_maxtb_graph(&g, &[satisfied_agents(2)]).unwrap_err(),
            MaxtbError::InvalidProfile {
                agent: "a".into(),
                property: "P3"
            }
        );
        assert!(matches!(
            build_maxtb_graph(&g, &[utilitarian(1)]),
            Err(MaxtbError::ProfileLength { .. })
        ));
        assert!(matches!(
            build_maxtb_graph(&g, &[]),
            Err(MaxtbError::ProfileCount { .. })
        ));
    }

    #[test]
    fn min_ratio_examples() {
        let g = CompatibilityGraph::new(
            3,
            vec![
                AgentSpec::new("a", 2, [1, 2, 3]),
                AgentSpec::new("b", 3, [1, 2, 3]),
            ],
            vec![ResourceSpec::unit("r"), ResourceSpec::unit("s")],
            vec![("a".into(), "r".into()), ("b".into(), "s".into())],
        )
        .unwrap();
        let s = MultiRoundSolution::from_indexed(&g, &[vec![(0, 0), (1, 1)], vec![], vec![]]);
        assert_eq!(min_satisfaction_ratio(&s, g.agents()), ratio(1, 3));
        let s = MultiRoundSolution::from_indexed(&g, &[vec![(1, 1)], vec![(1, 1)], vec![]]);
        assert_eq!(min_satisfaction_ratio(&s, g.agents()), int(0));
    }
}
