//! Instance documents, format `mrm-instance/1`.

use std::collections::{BTreeMap, BTreeSet};

use mrm_core::instance::InstanceError;
use mrm_core::rational::zero;
use mrm_core::{AgentSpec, EdgeSpec, ResourceSpec, RestrictionsGraph};
use serde::{Deserialize, Serialize};

use super::{check_format, from_text, to_canonical, FileError, Q};

pub const INSTANCE_FORMAT: &str = "mrm-instance/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    format: String,
    k: u32,
    agents: Vec<AgentDoc>,
    #[serde(default)]
    resources: Vec<ResourceDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentDoc {
    id: String,
    rho: u32,
    allowed_rounds: Vec<u32>,
    #[serde(default = "zero_q")]
    budget: Q,
    #[serde(default)]
    labels: BTreeMap<String, Q>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResourceDoc {
    id: String,
    #[serde(default = "unit")]
    capacity: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    agent: String,
    resource: String,
    #[serde(default)]
    restrictions: Vec<String>,
}

fn zero_q() -> Q {
    Q(zero())
}

fn unit() -> u32 {
    1
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<RestrictionsGraph, FileError> {
    let doc: InstanceDoc = from_text(text)?;
    check_format(&doc.format, INSTANCE_FORMAT)?;
    for (i, a) in doc.agents.iter().enumerate() {
        let distinct: BTreeSet<u32> = a.allowed_rounds.iter().copied().collect();
        if distinct.len() != a.allowed_rounds.len() {
            return Err(FileError::new(
                format!("agents[{i}].allowed_rounds"),
                "repeated round",
            ));
        }
    }
    for (e, edge) in doc.edges.iter().enumerate() {
        let distinct: BTreeSet<&String> = edge.restrictions.iter().collect();
        if distinct.len() != edge.restrictions.len() {
            return Err(FileError::new(
                format!("edges[{e}].restrictions"),
                "repeated label",
            ));
        }
    }
    let agents = doc
        .agents
        .iter()
        .map(|a| {
            let mut spec = AgentSpec::new(a.id.as_str(), a.rho, a.allowed_rounds.iter().copied())
                .with_budget(a.budget.0.clone());
            for (l, c) in &a.labels {
                spec = spec.with_label(l.as_str(), c.0.clone());
            }
            spec
        })
        .collect();
    let resources = doc
        .resources
        .iter()
        .map(|r| ResourceSpec::new(r.id.as_str(), r.capacity))
        .collect();
    let edges = doc
        .edges
        .iter()
        .map(|e| {
            EdgeSpec::new(
                e.agent.as_str(),
                e.resource.as_str(),
                e.restrictions.iter().map(String::as_str),
            )
        })
        .collect();
    RestrictionsGraph::new(doc.k, agents, resources, edges).map_err(|err| locate(&doc, err))
}

/// Field path of a semantic error.
fn locate(doc: &InstanceDoc, err: InstanceError) -> FileError {
    let agent = |id: &str| doc.agents.iter().position(|a| a.id == id);
    let last_agent = |id: &str| doc.agents.iter().rposition(|a| a.id == id);
    let path = match &err {
        InstanceError::NoRounds => "k".to_string(),
        InstanceError::DuplicateAgent(id) => {
            format!("agents[{}].id", last_agent(id.as_str()).unwrap_or(0))
        }
        InstanceError::DuplicateResource(id) => {
            format!(
                "resources[{}].id",
                doc.resources
                    .iter()
                    .rposition(|r| r.id == id.as_str())
                    .unwrap_or(0)
            )
        }
        InstanceError::RhoExceedsAllowed { agent: id, .. } => {
            format!("agents[{}].rho", agent(id.as_str()).unwrap_or(0))
        }
        InstanceError::RoundOutOfRange { agent: id, .. } => {
            format!("agents[{}].allowed_rounds", agent(id.as_str()).unwrap_or(0))
        }
        InstanceError::NonPositiveCost { agent: id, label } => {
            format!("agents[{}].labels.{label}", agent(id.as_str()).unwrap_or(0))
        }
        InstanceError::NegativeBudget(id) => {
            format!("agents[{}].budget", agent(id.as_str()).unwrap_or(0))
        }
        InstanceError::ZeroCapacity(id) => {
            format!(
                "resources[{}].capacity",
                doc.resources
                    .iter()
                    .position(|r| r.id == id.as_str())
                    .unwrap_or(0)
            )
        }
        InstanceError::UnknownAgent(id) => {
            format!(
                "edges[{}].agent",
                doc.edges
                    .iter()
                    .position(|e| e.agent == id.as_str())
                    .unwrap_or(0)
            )
        }
        InstanceError::UnknownResource(id) => {
            format!(
                "edges[{}].resource",
                doc.edges
                    .iter()
                    .position(|e| e.resource == id.as_str())
                    .unwrap_or(0)
            )
        }
        InstanceError::UnknownLabel { agent: id, label } => {
            let e = doc
                .edges
                .iter()
                .position(|e| {
                    e.agent == id.as_str() && e.restrictions.iter().any(|l| l == label.as_str())
                })
                .unwrap_or(0);
            format!("edges[{e}].restrictions")
        }
        InstanceError::DuplicateEdge {
            agent: a,
            resource: r,
        } => {
            let e = doc
                .edges
                .iter()
                .rposition(|e| e.agent == a.as_str() && e.resource == r.as_str())
                .unwrap_or(0);
            format!("edges[{e}]")
        }
    };
    FileError::new(path, err)
}

/// Canonical document for `g`.
pub fn write_instance(g: &RestrictionsGraph) -> String {
    let agents = g
        .agents()
        .iter()
        .map(|a| AgentDoc {
            id: a.id.0.clone(),
            rho: a.rho,
            allowed_rounds: a.allowed_rounds.iter().copied().collect(),
            budget: Q(a.budget.clone()),
            labels: a
                .labels
                .iter()
                .map(|(l, c)| (l.0.clone(), Q(c.clone())))
                .collect(),
        })
        .collect();
    let resources = g
        .resources()
        .iter()
        .map(|r| ResourceDoc {
            id: r.id.0.clone(),
            capacity: r.capacity,
        })
        .collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| EdgeDoc {
            agent: g.agents()[e.agent].id.0.clone(),
            resource: g.resources()[e.resource].id.0.clone(),
            restrictions: e.restrictions.iter().map(|l| l.0.clone()).collect(),
        })
        .collect();
    to_canonical(&InstanceDoc {
        format: INSTANCE_FORMAT.into(),
        k: g.k(),
        agents,
        resources,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mrm_core::fixtures;

    const MINIMAL: &str = r#"{
  "agents": [
    {
      "allowed_rounds": [
        1
      ],
      "budget": "0/1",
      "id": "x",
      "labels": {},
      "rho": 1
    }
  ],
  "edges": [
    {
      "agent": "x",
      "resource": "y",
      "restrictions": []
    }
  ],
  "format": "mrm-instance/1",
  "k": 1,
  "resources": [
    {
      "capacity": 1,
      "id": "y"
    }
  ]
}
"#;

    #[test]
    fn minimal_round_trip_is_byte_identical() {
        let g = parse_instance(MINIMAL).unwrap();
        assert_eq!(write_instance(&g), MINIMAL);
    }

    #[test]
    fn defaults_and_loose_numbers() {
        let text = r#"{"format":"mrm-instance/1","k":2,"agents":[{"id":"x","rho":1,"allowed_rounds":[2],"budget":"1.5","labels":{"l":2}}],
            "resources":[{"id":"y"}],"edges":[{"agent":"x","resource":"y","restrictions":["l"]}]}"#;
        let g = parse_instance(text).unwrap();
        assert_eq!(g.agents()[0].budget, mrm_core::rational::ratio(3, 2));
        assert_eq!(g.resources()[0].capacity, 1);
        assert_eq!(parse_instance(&write_instance(&g)).unwrap(), g);
    }

    #[test]
    fn fixture_round_trip() {
        let g = fixtures::lab_example();
        let text = write_instance(&g);
        assert_eq!(parse_instance(&text).unwrap(), g);
    }

    fn path_of(text: &str) -> String {
        parse_instance(text).unwrap_err().path
    }

    #[test]
    fn errors_carry_field_paths() {
        let base = |agent: &str| {
            format!(
                r#"{{"format":"mrm-instance/1","k":2,"agents":[{{"id":"a","rho":1,"allowed_rounds":[1]}},{agent}],"resources":[{{"id":"y"}}]}}"#
            )
        };
        assert_eq!(
            path_of(&base(r#"{"id":"b","rho":2,"allowed_rounds":[1]}"#)),
            "agents[1].rho"
        );
        assert_eq!(
            path_of(&base(r#"{"id":"b","rho":"x","allowed_rounds":[1]}"#)),
            "agents[1].rho"
        );
        assert_eq!(
            path_of(&base(r#"{"id":"b","rho":1,"allowed_rounds":[3]}"#)),
            "agents[1].allowed_rounds"
        );
        assert_eq!(
            path_of(&base(r#"{"id":"b","rho":1,"allowed_rounds":[1,1]}"#)),
            "agents[1].allowed_rounds"
        );
        assert_eq!(
            path_of(&base(
                r#"{"id":"b","rho":1,"allowed_rounds":[1],"extra":1}"#
            )),
            "agents[1].extra"
        );
        assert_eq!(
            path_of(&base(
                r#"{"id":"b","rho":1,"allowed_rounds":[1],"budget":"-1"}"#
            )),
            "agents[1].budget"
        );
        assert_eq!(
            path_of(&base(
                r#"{"id":"b","rho":1,"allowed_rounds":[1],"labels":{"l":"0"}}"#
            )),
            "agents[1].labels.l"
        );
        assert_eq!(
            path_of(&base(r#"{"id":"a","rho":1,"allowed_rounds":[1]}"#)),
            "agents[1].id"
        );
        assert_eq!(
            path_of(r#"{"format":"mrm-instance/2","k":1,"agents":[]}"#),
            "format"
        );
        assert_eq!(
            path_of(r#"{"format":"mrm-instance/1","k":0,"agents":[]}"#),
            "k"
        );
        let edge = |e: &str| {
            format!(
                r#"{{"format":"mrm-instance/1","k":1,"agents":[{{"id":"a","rho":1,"allowed_rounds":[1]}}],"resources":[{{"id":"y"}}],"edges":[{e}]}}"#
            )
        };
        assert_eq!(
            path_of(&edge(r#"{"agent":"q","resource":"y"}"#)),
            "edges[0].agent"
        );
        assert_eq!(
            path_of(&edge(r#"{"agent":"a","resource":"q"}"#)),
            "edges[0].resource"
        );
        assert_eq!(
            path_of(&edge(
                r#"{"agent":"a","resource":"y","restrictions":["l"]}"#
            )),
            "edges[0].restrictions"
        );
        assert_eq!(
            path_of(&edge(
                r#"{"agent":"a","resource":"y"},{"agent":"a","resource":"y"}"#
            )),
            "edges[1]"
        );
    }
}
