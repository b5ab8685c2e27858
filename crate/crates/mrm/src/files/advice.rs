//! Advice documents, format `mrm-advice/1`: label removals per agent and
//! the solution on the graph they induce.

use std::collections::{BTreeMap, BTreeSet};

use mrm_core::advice::AdvicePlan;
use mrm_core::{AgentId, LabelId, RestrictionsGraph};
use serde::{Deserialize, Serialize};

use super::solution::{check_solution, solution_doc, SolutionDoc, Summary};
use super::{check_format, from_text, to_canonical, FileError, Q};

pub const ADVICE_FORMAT: &str = "mrm-advice/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdviceDoc {
    pub format: String,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub satisfied: usize,
    /// Agents with a non-empty removal only.
    pub removals: BTreeMap<String, RemovalDoc>,
    pub solution: SolutionDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemovalDoc {
    pub labels: Vec<String>,
    pub cost: Q,
}

pub fn advice_doc(mode: &str, seed: Option<u64>, plan: &AdvicePlan) -> AdviceDoc {
    let removals = plan
        .choices
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| {
            (
                c.agent.0.clone(),
                RemovalDoc {
                    labels: c.labels.iter().map(|l| l.0.clone()).collect(),
                    cost: Q(c.cost.clone()),
                },
            )
        })
        .collect();
    AdviceDoc {
        format: ADVICE_FORMAT.into(),
        mode: mode.into(),
        seed,
        satisfied: plan.satisfied,
        removals,
        solution: solution_doc(
            &format!("advice:{mode}"),
            &plan.solution,
            &plan.compatibility,
            &Summary::default(),
        ),
    }
}

pub fn write_advice(doc: &AdviceDoc) -> String {
    to_canonical(doc)
}

pub fn parse_advice(text: &str) -> Result<AdviceDoc, FileError> {
    let doc: AdviceDoc = from_text(text)?;
    check_format(&doc.format, ADVICE_FORMAT)?;
    Ok(doc)
}

/// Checks removals against budgets and the solution against the induced
/// graph.
pub fn check_advice(doc: &AdviceDoc, g: &RestrictionsGraph) -> Result<(), FileError> {
    let mut removals: BTreeMap<AgentId, BTreeSet<LabelId>> = BTreeMap::new();
    for (agent, r) in &doc.removals {
        let path = format!("removals.{agent}");
        let Some(i) = g.agent_index(&AgentId::from(agent.as_str())) else {
            return Err(FileError::new(path, "unknown agent"));
        };
        let spec = &g.agents()[i];
        let labels: BTreeSet<LabelId> =
            r.labels.iter().map(|l| LabelId::from(l.as_str())).collect();
        if let Some(l) = labels.iter().find(|l| !spec.labels.contains_key(*l)) {
            return Err(FileError::new(
                format!("{path}.labels"),
                format!("unknown label {l}"),
            ));
        }
        let cost = spec.cost_of(&labels);
        if cost != r.cost.0 {
            return Err(FileError::new(
                format!("{path}.cost"),
                format!("stated {}, labels cost {cost}", r.cost.0),
            ));
        }
        if cost > spec.budget {
            return Err(FileError::new(
                format!("{path}.cost"),
                format!("exceeds the budget {}", spec.budget),
            ));
        }
        removals.insert(spec.id.clone(), labels);
    }
    let c = g
        .derive_compatibility(&removals)
        .map_err(|e| FileError::new("removals", e))?;
    check_solution(&doc.solution, &c)
        .map_err(|e| FileError::new(format!("solution.{}", e.path), e.message))?;
    if doc.satisfied != doc.solution.satisfied {
        return Err(FileError::new(
            "satisfied",
            "differs from the solution's count",
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mrm_core::advice::{exact_advice, DEFAULT_NODE_LIMIT};
    use mrm_core::fixtures;

    #[test]
    fn lab_plan_round_trip() {
        let g = fixtures::lab_example();
        let plan = exact_advice(&g, DEFAULT_NODE_LIMIT).unwrap();
        let doc = advice_doc("exact", None, &plan);
        let back = parse_advice(&write_advice(&doc)).unwrap();
        assert_eq!(back, doc);
        check_advice(&back, &g).unwrap();
        assert_eq!(back.removals.keys().collect::<Vec<_>>(), ["x1"]);

        let mut over = back.clone();
        over.removals.insert(
            "x2".into(),
            RemovalDoc {
                labels: vec!["quiet_2".into()],
                cost: Q(mrm_core::rational::int(2)),
            },
        );
        assert_eq!(
            check_advice(&over, &g).unwrap_err().path,
            "removals.x2.cost"
        );
    }
}
