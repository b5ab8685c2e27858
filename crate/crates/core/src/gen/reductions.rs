//! Hardness gadgets: instances whose optimum is tied to a vertex cover or
//! set cover of a small source instance.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::GenError;
use crate::instance::{AgentSpec, EdgeSpec, LabelId, ResourceSpec, RestrictionsGraph};
use crate::rational::{int, Rational};

/// Vertex-cover gadget plus its satisfied-agent target
/// `2|E| + |V| - bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub graph: RestrictionsGraph,
    pub target: usize,
}

/// Cubic graphs by name: `k4`, `k33`, `cube`, `petersen`.
pub fn named_cubic(name: &str) -> Option<(usize, Vec<(usize, usize)>)> {
    match name {
        "k4" => Some((4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
        "k33" => Some((
            6,
            (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect(),
        )),
        "cube" => Some((
            8,
            vec![
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        )),
        "petersen" => Some((
            10,
            vec![
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        )),
        _ => None,
    }
}

/// One agent per vertex wanting all three rounds, two single-round agents and
/// one resource per edge. Every vertex must have degree exactly 3.
pub fn reduce_from_vertex_cover(
    n: usize,
    edges: &[(usize, usize)],
    bound: usize,
) -> Result<Gadget, GenError> {
    let mut degree = vec![0usize; n];
    let mut seen = BTreeSet::new();
    for &(u, v) in edges {
        if u >= n || v >= n || u == v || !seen.insert((u.min(v), u.max(v))) {
            return Err(GenError::BadEdge(u, v));
        }
        degree[u] += 1;
        degree[v] += 1;
    }
    if let Some((vertex, &d)) = degree.iter().enumerate().find(|(_, &d)| d != 3) {
        return Err(GenError::NotCubic { vertex, degree: d });
    }
    if bound > n {
        return Err(GenError::InvalidParams(format!(
            "bound {bound} exceeds the {n} vertices"
        )));
    }
    let mut agents: Vec<AgentSpec> = (1..=n)
        .map(|v| AgentSpec::new(format!("x{v}"), 3, [1, 2, 3]))
        .collect();
    let mut resources = Vec::new();
    let mut out = Vec::new();
    for (j, &(u, v)) in edges.iter().enumerate() {
        let y = format!("y{}", j + 1);
        for s in 1..=2 {
            let z = format!("z{}_{s}", j + 1);
            agents.push(AgentSpec::new(z.as_str(), 1, [1, 2, 3]));
            out.push(EdgeSpec::free(z, y.as_str()));
        }
        out.push(EdgeSpec::free(format!("x{}", u + 1), y.as_str()));
        out.push(EdgeSpec::free(format!("x{}", v + 1), y.as_str()));
        resources.push(ResourceSpec::unit(y));
    }
    let graph = RestrictionsGraph::new(3, agents, resources, out)?;
    Ok(Gadget {
        graph,
        target: 2 * edges.len() + n - bound,
    })
}

/// Set-cover gadget over elements `0..universe`: a special agent `xstar`
/// needing one round per element can only reach element `j`'s resources by
/// removing the label of a subset containing `j`, with budget `alpha`.
pub fn reduce_from_set_cover(
    universe: usize,
    subsets: &[BTreeSet<usize>],
    alpha: &Rational,
) -> Result<RestrictionsGraph, GenError> {
    if universe == 0 {
        return Err(GenError::InvalidParams("universe must be non-empty".into()));
    }
    if let Some(&e) = subsets.iter().flatten().find(|&&e| e >= universe) {
        return Err(GenError::InvalidParams(format!(
            "element {e} outside the universe"
        )));
    }
    let t = universe as u32;
    let rounds = || 1..=t;
    let mut star = AgentSpec::new("xstar", t, rounds()).with_budget(alpha.clone());
    for h in 1..=subsets.len() {
        star = star.with_label(format!("c{h}"), int(1));
    }
    let mut agents = Vec::new();
    let mut resources = Vec::new();
    let mut edges = Vec::new();
    for j in 0..universe {
        let containing: Vec<usize> = (0..subsets.len())
            .filter(|&h| subsets[h].contains(&j))
            .collect();
        if containing.is_empty() {
            return Err(GenError::UncoveredElement(j));
        }
        let ys: Vec<_> = containing
            .iter()
            .map(|h| format!("y{}_{}", j + 1, h + 1))
            .collect();
        for (y, h) in ys.iter().zip(&containing) {
            resources.push(ResourceSpec::unit(y.as_str()));
            edges.push(EdgeSpec::new(
                "xstar",
                y.as_str(),
                [LabelId(format!("c{}", h + 1))],
            ));
        }
        for a in 1..t as usize * containing.len() {
            let id = format!("x{}_{a}", j + 1);
            agents.push(AgentSpec::new(id.as_str(), 1, rounds()));
            edges.extend(ys.iter().map(|y| EdgeSpec::free(id.as_str(), y.as_str())));
        }
    }
    agents.push(star);
    Ok(RestrictionsGraph::new(t, agents, resources, edges)?)
}
