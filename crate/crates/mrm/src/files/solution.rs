//! Solution documents, format `mrm-solution/1`.

use std::collections::{BTreeMap, BTreeSet};

use mrm_core::benefit::total_benefit;
use mrm_core::instance::{satisfied_count, validate_solution};
use mrm_core::maxtb::min_satisfaction_ratio;
use mrm_core::{AgentId, BenefitProfile, CompatibilityGraph, MultiRoundSolution, ResourceId};
use serde::{Deserialize, Serialize};

use super::{check_format, from_text, to_canonical, FileError, Q};

pub const SOLUTION_FORMAT: &str = "mrm-solution/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    pub format: String,
    pub objective: String,
    /// Rounds in order; each an array of `[agent, resource]` pairs.
    pub rounds: Vec<Vec<(String, String)>>,
    pub gamma: BTreeMap<String, u32>,
    pub satisfied: usize,
    pub total_assignments: usize,
    pub min_ratio: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_benefit: Option<Q>,
    /// For searches that may stop early: whether the result is proven
    /// optimal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

/// Objective-specific values stored next to a solution.
#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub profiles: Option<Vec<BenefitProfile>>,
    pub exact: Option<bool>,
}

pub fn solution_doc(
    objective: &str,
    s: &MultiRoundSolution,
    g: &CompatibilityGraph,
    summary: &Summary,
) -> SolutionDoc {
    let rounds = s
        .rounds
        .iter()
        .map(|r| r.iter().map(|(a, y)| (a.0.clone(), y.0.clone())).collect())
        .collect();
    let gamma = s.gamma.iter().map(|(a, v)| (a.0.clone(), *v)).collect();
    let total_benefit = summary.profiles.as_ref().map(|p| {
        Q(total_benefit(
            p,
            g.agents().iter().map(|a| s.gamma_of(&a.id)),
        ))
    });
    SolutionDoc {
        format: SOLUTION_FORMAT.into(),
        objective: objective.into(),
        rounds,
        gamma,
        satisfied: satisfied_count(s, g.agents()),
        total_assignments: s.total_assignments(),
        min_ratio: Q(min_satisfaction_ratio(s, g.agents())),
        total_benefit,
        exact: summary.exact,
    }
}

pub fn write_solution(doc: &SolutionDoc) -> String {
    to_canonical(doc)
}

pub fn parse_solution(text: &str) -> Result<SolutionDoc, FileError> {
    let doc: SolutionDoc = from_text(text)?;
    check_format(&doc.format, SOLUTION_FORMAT)?;
    Ok(doc)
}

impl SolutionDoc {
    pub fn to_solution(&self) -> MultiRoundSolution {
        MultiRoundSolution {
            rounds: self
                .rounds
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|(a, y)| (AgentId::from(a.as_str()), ResourceId::from(y.as_str())))
                        .collect::<BTreeSet<_>>()
                })
                .collect(),
            gamma: self
                .gamma
                .iter()
                .map(|(a, v)| (AgentId::from(a.as_str()), *v))
                .collect(),
        }
    }
}

/// Checks the assignments against `g` and the stored counts against a
/// recount. Benefit totals are not rechecked, since profiles depend on the
/// objective.
pub fn check_solution(doc: &SolutionDoc, g: &CompatibilityGraph) -> Result<(), FileError> {
    let s = doc.to_solution();
    if let Some(v) = validate_solution(&s, g).first() {
        return Err(FileError::new("rounds", v));
    }
    if s.gamma.len() != g.agents().len() {
        return Err(FileError::new("gamma", "must list every agent"));
    }
    let claims = [
        ("satisfied", doc.satisfied, satisfied_count(&s, g.agents())),
        (
            "total_assignments",
            doc.total_assignments,
            s.total_assignments(),
        ),
    ];
    for (field, stored, actual) in claims {
        if stored != actual {
            return Err(FileError::new(
                field,
                format!("stated {stored}, recount gives {actual}"),
            ));
        }
    }
    let ratio = min_satisfaction_ratio(&s, g.agents());
    if doc.min_ratio.0 != ratio {
        return Err(FileError::new(
            "min_ratio",
            format!("stated {}, recount gives {}", doc.min_ratio.0, ratio),
        ));
    }
    Ok(())
}
