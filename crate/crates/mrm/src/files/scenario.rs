//! Attribute scenario documents, format `mrm-scenario/1`.
//!
//! Resource values and agent preferences are read according to the kind of
//! their attribute:
//!
//! | kind         | resource value | preference                  |
//! |--------------|----------------|-----------------------------|
//! | binary       | `true`/`false` | required value              |
//! | quantitative | rational       | least acceptable value      |
//! | ordinal      | level name     | acceptable levels, best first |

use std::collections::BTreeMap;

use mrm_core::gen::attribute::{ScenarioAgent, ScenarioResource};
use mrm_core::gen::{AttributeKind, AttributeValue, Preference, Scenario};
use mrm_core::rational::{self, zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{check_format, from_text, to_canonical, FileError, Q};

pub const SCENARIO_FORMAT: &str = "mrm-scenario/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    format: String,
    k: u32,
    attributes: BTreeMap<String, KindDoc>,
    resources: Vec<ResourceDoc>,
    agents: Vec<AgentDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum KindDoc {
    Binary {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cost: Option<Q>,
    },
    Quantitative {
        step: Q,
    },
    Ordinal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResourceDoc {
    id: String,
    #[serde(default = "unit")]
    capacity: u32,
    values: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentDoc {
    id: String,
    rho: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    allowed_rounds: Option<Vec<u32>>,
    #[serde(default = "zero_q")]
    budget: Q,
    prefs: BTreeMap<String, Value>,
}

fn unit() -> u32 {
    1
}

fn zero_q() -> Q {
    Q(zero())
}

fn number(v: &Value) -> Option<rational::Rational> {
    match v {
        Value::String(s) => rational::parse(s).ok(),
        Value::Number(n) => n
            .as_i64()
            .and_then(|i| rational::parse(&i.to_string()).ok()),
        _ => None,
    }
}

fn value_of(kind: &AttributeKind, v: &Value) -> Option<AttributeValue> {
    match (kind, v) {
        (AttributeKind::Binary { .. }, Value::Bool(b)) => Some(AttributeValue::Bool(*b)),
        (AttributeKind::Quantitative { .. }, v) => number(v).map(AttributeValue::Number),
        (AttributeKind::Ordinal, Value::String(s)) => Some(AttributeValue::Level(s.clone())),
        _ => None,
    }
}

fn preference_of(kind: &AttributeKind, v: &Value) -> Option<Preference> {
    match (kind, v) {
        (AttributeKind::Binary { .. }, Value::Bool(b)) => Some(Preference::Required(*b)),
        (AttributeKind::Quantitative { .. }, v) => number(v).map(Preference::AtLeast),
        (AttributeKind::Ordinal, Value::Array(items)) => items
            .iter()
            .map(|i| i.as_str().map(String::from))
            .collect::<Option<Vec<_>>>()
            .map(Preference::Order),
        _ => None,
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, FileError> {
    let doc: ScenarioDoc = from_text(text)?;
    check_format(&doc.format, SCENARIO_FORMAT)?;
    let attributes: BTreeMap<String, AttributeKind> = doc
        .attributes
        .iter()
        .map(|(name, k)| {
            let kind = match k {
                KindDoc::Binary { cost } => AttributeKind::Binary {
                    cost: cost.as_ref().map(|c| c.0.clone()),
                },
                KindDoc::Quantitative { step } => AttributeKind::Quantitative {
                    step: step.0.clone(),
                },
                KindDoc::Ordinal => AttributeKind::Ordinal,
            };
            (name.clone(), kind)
        })
        .collect();
    let kind_at = |path: &str, name: &str| {
        attributes
            .get(name)
            .ok_or_else(|| FileError::new(path.to_string(), format!("unknown attribute {name}")))
    };
    let mut resources = Vec::new();
    for (j, r) in doc.resources.iter().enumerate() {
        let mut values = BTreeMap::new();
        for (name, v) in &r.values {
            let path = format!("resources[{j}].values.{name}");
            let kind = kind_at(&path, name)?;
            let value = value_of(kind, v)
                .ok_or_else(|| FileError::new(path, "value does not fit the attribute kind"))?;
            values.insert(name.clone(), value);
        }
        resources.push(ScenarioResource {
            id: r.id.clone(),
            capacity: r.capacity,
            values,
        });
    }
    let mut agents = Vec::new();
    for (i, a) in doc.agents.iter().enumerate() {
        let mut prefs = BTreeMap::new();
        for (name, v) in &a.prefs {
            let path = format!("agents[{i}].prefs.{name}");
            let kind = kind_at(&path, name)?;
            let p = preference_of(kind, v).ok_or_else(|| {
                FileError::new(path, "preference does not fit the attribute kind")
            })?;
            prefs.insert(name.clone(), p);
        }
        agents.push(ScenarioAgent {
            id: a.id.clone(),
            rho: a.rho,
            allowed_rounds: a
                .allowed_rounds
                .as_ref()
                .map(|r| r.iter().copied().collect()),
            budget: a.budget.0.clone(),
            prefs,
        });
    }
    let s = Scenario {
        k: doc.k,
        attributes,
        resources,
        agents,
    };
    s.validate().map_err(|e| FileError::new("(scenario)", e))?;
    Ok(s)
}

pub fn write_scenario(s: &Scenario) -> String {
    let attributes = s
        .attributes
        .iter()
        .map(|(name, k)| {
            let kind = match k {
                AttributeKind::Binary { cost } => KindDoc::Binary {
                    cost: cost.clone().map(Q),
                },
                AttributeKind::Quantitative { step } => KindDoc::Quantitative {
                    step: Q(step.clone()),
                },
                AttributeKind::Ordinal => KindDoc::Ordinal,
            };
            (name.clone(), kind)
        })
        .collect();
    let pq = |r: &rational::Rational| Value::String(rational::to_pq(r));
    let resources = s
        .resources
        .iter()
        .map(|r| ResourceDoc {
            id: r.id.clone(),
            capacity: r.capacity,
            values: r
                .values
                .iter()
                .map(|(n, v)| {
                    let v = match v {
                        AttributeValue::Bool(b) => Value::Bool(*b),
                        AttributeValue::Number(q) => pq(q),
                        AttributeValue::Level(l) => Value::String(l.clone()),
                    };
                    (n.clone(), v)
                })
                .collect(),
        })
        .collect();
    let agents = s
        .agents
        .iter()
        .map(|a| AgentDoc {
            id: a.id.clone(),
            rho: a.rho,
            allowed_rounds: a
                .allowed_rounds
                .as_ref()
                .map(|r| r.iter().copied().collect()),
            budget: Q(a.budget.clone()),
            prefs: a
                .prefs
                .iter()
                .map(|(n, p)| {
                    let v = match p {
                        Preference::Required(b) => Value::Bool(*b),
                        Preference::AtLeast(q) => pq(q),
                        Preference::Order(levels) => {
                            Value::Array(levels.iter().cloned().map(Value::String).collect())
                        }
                    };
                    (n.clone(), v)
                })
                .collect(),
        })
        .collect();
    to_canonical(&ScenarioDoc {
        format: SCENARIO_FORMAT.into(),
        k: s.k,
        attributes,
        resources,
        agents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mrm_core::gen::attribute::preset_scenario;
    use mrm_core::gen::gen_attribute_instance;
    use mrm_core::rational::int;

    const SMALL: &str = r#"{
        "format": "mrm-scenario/1",
        "k": 2,
        "attributes": {"seats": {"kind": "quantitative", "step": 1}, "size": {"kind": "ordinal"}, "window": {"kind": "binary", "cost": "2"}},
        "resources": [{"id": "r1", "values": {"seats": 3, "size": "small", "window": false}}],
        "agents": [{"id": "a1", "rho": 1, "allowed_rounds": [1, 2], "budget": 3,
                    "prefs": {"seats": "5", "size": ["large", "medium", "small"], "window": true}}]
    }"#;

    #[test]
    fn labels_follow_the_preferences() {
        let s = parse_scenario(SMALL).unwrap();
        let g = gen_attribute_instance(&s, 0).unwrap();
        let e = &g.edges()[0];
        let names: Vec<&str> = e.restrictions.iter().map(|l| l.as_str()).collect();
        assert_eq!(
            names,
            ["seats_4", "seats_5", "size_large", "size_medium", "window"]
        );
        let costs = &g.agents()[0].labels;
        let cost = |l: &str| costs[&mrm_core::LabelId::from(l)].clone();
        assert_eq!((cost("seats_5"), cost("seats_4")), (int(1), int(2)));
        assert_eq!((cost("size_large"), cost("size_medium")), (int(1), int(2)));
        assert_eq!(cost("window"), int(2));
    }

    #[test]
    fn round_trip() {
        let s = parse_scenario(SMALL).unwrap();
        assert_eq!(parse_scenario(&write_scenario(&s)).unwrap(), s);
        let p = preset_scenario("lab-space-like", 3, &int(2)).unwrap();
        assert_eq!(parse_scenario(&write_scenario(&p)).unwrap(), p);
    }

    #[test]
    fn kind_mismatch_has_a_path() {
        let bad = SMALL.replace(r#""size": "small""#, r#""size": 3"#);
        assert_eq!(
            parse_scenario(&bad).unwrap_err().path,
            "resources[0].values.size"
        );
        let bad = SMALL.replace(r#""window": true"#, r#""window": "yes""#);
        assert_eq!(
            parse_scenario(&bad).unwrap_err().path,
            "agents[0].prefs.window"
        );
    }
}
