//! Restrictions graphs induced by resource attributes and agent preferences.
//!
//! Each unmet preference puts labels on the edge, and a label's cost grows
//! with its distance from the preferred value:
//!
//! - binary: one label named after the attribute, cost 1 unless overridden;
//! - quantitative (agent wants at least `p`, resource has `v < p`): one label
//!   per step value `p, p - step, ...` above `v`, costing 1, 2, ...;
//! - ordinal (agent ranks levels best first): one label per level ranked
//!   above the resource's level, costing 1, 2, .... A level missing from the
//!   ranking is unacceptable and removes the edge altogether.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{bernoulli, GenError};
use crate::instance::{AgentSpec, EdgeSpec, LabelId, ResourceSpec, RestrictionsGraph};
use crate::rational::{int, Rational};

/// Most labels one quantitative preference may generate.
const MAX_STEPS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeKind {
    Binary { cost: Option<Rational> },
    Quantitative { step: Rational },
    Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeValue {
    Bool(bool),
    Number(Rational),
    Level(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preference {
    Required(bool),
    AtLeast(Rational),
    /// Acceptable levels, best first.
    Order(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioResource {
    pub id: String,
    pub capacity: u32,
    pub values: BTreeMap<String, AttributeValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioAgent {
    pub id: String,
    pub rho: u32,
    /// Drawn from the seed when absent.
    pub allowed_rounds: Option<BTreeSet<u32>>,
    pub budget: Rational,
    pub prefs: BTreeMap<String, Preference>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub k: u32,
    pub attributes: BTreeMap<String, AttributeKind>,
    pub resources: Vec<ScenarioResource>,
    pub agents: Vec<ScenarioAgent>,
}

fn bad<T>(msg: String) -> Result<T, GenError> {
    Err(GenError::Scenario(msg))
}

impl Scenario {
    pub fn validate(&self) -> Result<(), GenError> {
        for (name, kind) in &self.attributes {
            match kind {
                AttributeKind::Quantitative { step } if !step.is_positive() => {
                    return bad(format!("attribute {name}: step must be positive"));
                }
                AttributeKind::Binary { cost: Some(c) } if !c.is_positive() => {
                    return bad(format!("attribute {name}: cost must be positive"));
                }
                _ => {}
            }
        }
        for r in &self.resources {
            for (name, value) in &r.values {
                let ok = match (self.attributes.get(name), value) {
                    (None, _) => {
                        return bad(format!("resource {}: unknown attribute {name}", r.id))
                    }
                    (Some(AttributeKind::Binary { .. }), AttributeValue::Bool(_)) => true,
                    (Some(AttributeKind::Quantitative { .. }), AttributeValue::Number(_)) => true,
                    (Some(AttributeKind::Ordinal), AttributeValue::Level(_)) => true,
                    _ => false,
                };
                if !ok {
                    return bad(format!(
                        "resource {}: value of {name} does not match its kind",
                        r.id
                    ));
                }
            }
        }
        for a in &self.agents {
            for (name, pref) in &a.prefs {
                let ok = match (self.attributes.get(name), pref) {
                    (None, _) => return bad(format!("agent {}: unknown attribute {name}", a.id)),
                    (Some(AttributeKind::Binary { .. }), Preference::Required(_)) => true,
                    (Some(AttributeKind::Quantitative { .. }), Preference::AtLeast(_)) => true,
                    (Some(AttributeKind::Ordinal), Preference::Order(levels)) => {
                        let distinct: BTreeSet<&String> = levels.iter().collect();
                        if levels.is_empty() || distinct.len() != levels.len() {
                            return bad(format!(
                                "agent {}: malformed preference order for {name}",
                                a.id
                            ));
                        }
                        true
                    }
                    _ => false,
                };
                if !ok {
                    return bad(format!(
                        "agent {}: preference for {name} does not match its kind",
                        a.id
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Labels with costs that `resource` imposes on an agent with `prefs`, or
/// `None` when the pair is unacceptable.
fn restrictions(
    s: &Scenario,
    agent: &ScenarioAgent,
    resource: &ScenarioResource,
) -> Result<Option<Vec<(LabelId, Rational)>>, GenError> {
    let mut out = Vec::new();
    for (name, pref) in &agent.prefs {
        let Some(value) = resource.values.get(name) else {
            return bad(format!("resource {} has no value for {name}", resource.id));
        };
        match (pref, value, &s.attributes[name]) {
            (
                Preference::Required(want),
                AttributeValue::Bool(have),
                AttributeKind::Binary { cost },
            ) => {
                if want != have {
                    out.push((
                        LabelId(name.clone()),
                        cost.clone().unwrap_or_else(|| int(1)),
                    ));
                }
            }
            (
                Preference::AtLeast(want),
                AttributeValue::Number(have),
                AttributeKind::Quantitative { step },
            ) => {
                let mut level = want.clone();
                let mut rank = 1;
                while level > *have {
                    if rank > MAX_STEPS {
                        return bad(format!(
                            "agent {}: preference for {name} needs too many steps",
                            agent.id
                        ));
                    }
                    out.push((LabelId(format!("{name}_{level}")), int(rank as i64)));
                    level -= step;
                    rank += 1;
                }
            }
            (Preference::Order(levels), AttributeValue::Level(have), AttributeKind::Ordinal) => {
                let Some(pos) = levels.iter().position(|l| l == have) else {
                    return Ok(None);
                };
                for (rank, level) in levels[..pos].iter().enumerate() {
                    out.push((LabelId(format!("{name}_{level}")), int(rank as i64 + 1)));
                }
            }
            _ => {
                return bad(format!(
                    "agent {} / resource {}: kind mismatch on {name}",
                    agent.id, resource.id
                ))
            }
        }
    }
    Ok(Some(out))
}

/// Draws `rho` rounds plus each other round with probability 1/2.
fn random_rounds(rng: &mut impl Rng, k: u32, rho: u32) -> BTreeSet<u32> {
    let mut rounds: BTreeSet<u32> = sample(rng, k as usize, rho as usize)
        .into_iter()
        .map(|t| t as u32 + 1)
        .collect();
    for t in 1..=k {
        if !rounds.contains(&t) && bernoulli(rng, 1, 2) {
            rounds.insert(t);
        }
    }
    rounds
}

pub fn gen_attribute_instance(s: &Scenario, seed: u64) -> Result<RestrictionsGraph, GenError> {
    s.validate()?;
    if s.agents.iter().any(|a| a.rho > s.k) {
        return bad("rho exceeds k".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agents = Vec::with_capacity(s.agents.len());
    let mut edges = Vec::new();
    for a in &s.agents {
        let rounds = match &a.allowed_rounds {
            Some(r) => r.clone(),
            None => random_rounds(&mut rng, s.k, a.rho),
        };
        let mut spec = AgentSpec::new(a.id.as_str(), a.rho, rounds).with_budget(a.budget.clone());
        for r in &s.resources {
            let Some(labels) = restrictions(s, a, r)? else {
                continue;
            };
            let mut set = Vec::with_capacity(labels.len());
            for (label, cost) in labels {
                spec.labels.insert(label.clone(), cost);
                set.push(label);
            }
            edges.push(EdgeSpec::new(a.id.as_str(), r.id.as_str(), set));
        }
        agents.push(spec);
    }
    let resources = s
        .resources
        .iter()
        .map(|r| ResourceSpec::new(r.id.as_str(), r.capacity))
        .collect();
    Ok(RestrictionsGraph::new(s.k, agents, resources, edges)?)
}

pub const PRESETS: &[&str] = &["lab-space-like", "course-classroom-like"];

/// Synthetic scenario shaped like a published dataset, with every agent's
/// budget set to `budget`.
pub fn preset_scenario(name: &str, seed: u64, budget: &Rational) -> Option<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match name {
        "lab-space-like" => Some(lab_space_like(&mut rng, budget)),
        "course-classroom-like" => Some(course_classroom_like(&mut rng, budget)),
        _ => None,
    }
}

fn levels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| String::from(*s)).collect()
}

/// 14 offices (6 shared by two, 8 single) and 31 members over 5 days.
fn lab_space_like(rng: &mut ChaCha8Rng, budget: &Rational) -> Scenario {
    let mut attributes = BTreeMap::new();
    attributes.insert("size".into(), AttributeKind::Ordinal);
    attributes.insert("window".into(), AttributeKind::Binary { cost: None });
    attributes.insert("quiet".into(), AttributeKind::Binary { cost: None });
    attributes.insert("floor".into(), AttributeKind::Ordinal);
    let floors = levels(&["f1", "f2", "f3"]);
    let resources = (1..=14)
        .map(|j| {
            let big = j <= 6;
            let mut values = BTreeMap::new();
            values.insert(
                "size".into(),
                AttributeValue::Level((if big { "big" } else { "small" }).into()),
            );
            values.insert("window".into(), AttributeValue::Bool(bernoulli(rng, 1, 2)));
            values.insert("quiet".into(), AttributeValue::Bool(bernoulli(rng, 1, 2)));
            values.insert(
                "floor".into(),
                AttributeValue::Level(floors[rng.random_range(0..3)].clone()),
            );
            ScenarioResource {
                id: format!("y{j:02}"),
                capacity: if big { 2 } else { 1 },
                values,
            }
        })
        .collect();
    let agents = (1..=31)
        .map(|i| {
            let mut prefs = BTreeMap::new();
            if bernoulli(rng, 1, 2) {
                prefs.insert("size".into(), Preference::Order(levels(&["big", "small"])));
            }
            if bernoulli(rng, 1, 3) {
                prefs.insert("window".into(), Preference::Required(true));
            }
            if bernoulli(rng, 1, 3) {
                prefs.insert("quiet".into(), Preference::Required(true));
            }
            let mut order = floors.clone();
            order.shuffle(rng);
            if bernoulli(rng, 1, 4) {
                order.pop();
            }
            prefs.insert("floor".into(), Preference::Order(order));
            ScenarioAgent {
                id: format!("x{i:02}"),
                rho: rng.random_range(1..=3),
                allowed_rounds: None,
                budget: budget.clone(),
                prefs,
            }
        })
        .collect();
    Scenario {
        k: 5,
        attributes,
        resources,
        agents,
    }
}

/// 144 rooms and 142 courses over 3 days.
fn course_classroom_like(rng: &mut ChaCha8Rng, budget: &Rational) -> Scenario {
    let mut attributes = BTreeMap::new();
    attributes.insert(
        "seats".into(),
        AttributeKind::Quantitative { step: int(10) },
    );
    attributes.insert("projector".into(), AttributeKind::Binary { cost: None });
    attributes.insert("building".into(), AttributeKind::Ordinal);
    let buildings = levels(&["b1", "b2", "b3", "b4"]);
    let resources = (1..=144)
        .map(|j| {
            let mut values = BTreeMap::new();
            values.insert(
                "seats".into(),
                AttributeValue::Number(int(10 * rng.random_range(2..=12))),
            );
            values.insert(
                "projector".into(),
                AttributeValue::Bool(bernoulli(rng, 2, 3)),
            );
            values.insert(
                "building".into(),
                AttributeValue::Level(buildings[rng.random_range(0..4)].clone()),
            );
            ScenarioResource {
                id: format!("y{j:03}"),
                capacity: 1,
                values,
            }
        })
        .collect();
    let agents = (1..=142)
        .map(|i| {
            let mut prefs = BTreeMap::new();
            prefs.insert(
                "seats".into(),
                Preference::AtLeast(int(10 * rng.random_range(2..=10))),
            );
            if bernoulli(rng, 1, 2) {
                prefs.insert("projector".into(), Preference::Required(true));
            }
            let mut order = buildings.clone();
            order.shuffle(rng);
            order.truncate(rng.random_range(2..=4));
            prefs.insert("building".into(), Preference::Order(order));
            ScenarioAgent {
                id: format!("x{i:03}"),
                rho: rng.random_range(1..=3),
                allowed_rounds: None,
                budget: budget.clone(),
                prefs,
            }
        })
        .collect();
    Scenario {
        k: 3,
        attributes,
        resources,
        agents,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn one_pair(kind: AttributeKind, value: AttributeValue, pref: Preference) -> RestrictionsGraph {
        let mut attributes = BTreeMap::new();
        attributes.insert("a".into(), kind);
        let mut values = BTreeMap::new();
        values.insert("a".into(), value);
        let mut prefs = BTreeMap::new();
        prefs.insert("a".into(), pref);
        let s = Scenario {
            k: 1,
            attributes,
            resources: vec![ScenarioResource {
                id: "y".into(),
                capacity: 1,
                values,
            }],
            agents: vec![ScenarioAgent {
                id: "x".into(),
                rho: 1,
                allowed_rounds: Some([1].into()),
                budget: int(0),
                prefs,
            }],
        };
        gen_attribute_instance(&s, 0).unwrap()
    }

    fn edge_labels(g: &RestrictionsGraph) -> Vec<(String, Rational)> {
        let a = &g.agents()[0];
        g.edges()[0]
            .restrictions
            .iter()
            .map(|l| (l.0.clone(), a.labels[l].clone()))
            .collect()
    }

    #[test]
    fn quantitative_shortfall_labels_each_step() {
        let g = one_pair(
            AttributeKind::Quantitative { step: int(1) },
            AttributeValue::Number(int(3)),
            Preference::AtLeast(int(5)),
        );
        assert_eq!(
            edge_labels(&g),
            vec![("a_4".into(), int(2)), ("a_5".into(), int(1))]
        );
    }

    #[test]
    fn met_preferences_leave_the_edge_free() {
        let g = one_pair(
            AttributeKind::Quantitative { step: int(1) },
            AttributeValue::Number(int(7)),
            Preference::AtLeast(int(5)),
        );
        assert!(g.edges()[0].restrictions.is_empty());
        let g = one_pair(
            AttributeKind::Binary { cost: None },
            AttributeValue::Bool(true),
            Preference::Required(true),
        );
        assert!(g.edges()[0].restrictions.is_empty());
    }

    #[test]
    fn binary_mismatch_costs_one() {
        let g = one_pair(
            AttributeKind::Binary { cost: None },
            AttributeValue::Bool(false),
            Preference::Required(true),
        );
        assert_eq!(edge_labels(&g), vec![("a".into(), int(1))]);
    }

    #[test]
    fn ordinal_labels_levels_ranked_above() {
        let g = one_pair(
            AttributeKind::Ordinal,
            AttributeValue::Level("c".into()),
            Preference::Order(levels(&["a", "b", "c"])),
        );
        assert_eq!(
            edge_labels(&g),
            vec![("a_a".into(), int(1)), ("a_b".into(), int(2))]
        );
        let g = one_pair(
            AttributeKind::Ordinal,
            AttributeValue::Level("z".into()),
            Preference::Order(levels(&["a"])),
        );
        assert!(g.edges().is_empty());
    }

    #[test]
    fn malformed_order_is_rejected() {
        let mut attributes = BTreeMap::new();
        attributes.insert("a".into(), AttributeKind::Ordinal);
        let mut prefs = BTreeMap::new();
        prefs.insert("a".into(), Preference::Order(levels(&["p", "p"])));
        let s = Scenario {
            k: 1,
            attributes,
            resources: vec![],
            agents: vec![ScenarioAgent {
                id: "x".into(),
                rho: 1,
                allowed_rounds: None,
                budget: int(0),
                prefs,
            }],
        };
        assert!(matches!(
            gen_attribute_instance(&s, 0),
            Err(GenError::Scenario(_))
        ));
    }

    #[test]
    fn presets_have_published_shape() {
        let s = preset_scenario("lab-space-like", 1, &int(2)).unwrap();
        assert_eq!((s.resources.len(), s.agents.len(), s.k), (14, 31, 5));
        assert_eq!(s.resources.iter().filter(|r| r.capacity == 2).count(), 6);
        let g = gen_attribute_instance(&s, 1).unwrap();
        assert_eq!(g.agents().len(), 31);
        let s = preset_scenario("course-classroom-like", 1, &int(2)).unwrap();
        assert_eq!((s.resources.len(), s.agents.len(), s.k), (144, 142, 3));
        let g = gen_attribute_instance(&s, 1).unwrap();
        assert_eq!(g, gen_attribute_instance(&s, 1).unwrap());
    }
}
