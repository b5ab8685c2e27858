//! Bipartite matching: maximum cardinality and maximum weight.
//!
//! Nodes are indices `0..n_left` and `0..n_right`. Maximum weight uses
//! successive shortest augmenting paths with node potentials. Rational weights
//! are scaled to integers by the common denominator first; the search runs on
//! `i128` when the bound on every intermediate value fits and on `BigInt`
//! otherwise, so the result is exact either way.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::{common_denominator, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("edge ({left}, {right}) is out of range")]
    OutOfRange { left: usize, right: usize },
    #[error("parallel edge ({left}, {right})")]
    ParallelEdge { left: usize, right: usize },
    #[error("edge ({left}, {right}) has a negative weight")]
    NegativeWeight { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<Rational>>,
}

impl BipartiteGraph {
    pub fn new(
        n_left: usize,
        n_right: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, MatchingError> {
        check_edges(n_left, n_right, &edges)?;
        Ok(Self {
            n_left,
            n_right,
            edges,
            weights: None,
        })
    }

    pub fn weighted(
        n_left: usize,
        n_right: usize,
        edges: Vec<(usize, usize, Rational)>,
    ) -> Result<Self, MatchingError> {
        let (pairs, weights): (Vec<_>, Vec<_>) =
            edges.into_iter().map(|(l, r, w)| ((l, r), w)).unzip();
        check_edges(n_left, n_right, &pairs)?;
        if let Some(i) = weights.iter().position(Signed::is_negative) {
            let (left, right) = pairs[i];
            return Err(MatchingError::NegativeWeight { left, right });
        }
        Ok(Self {
            n_left,
            n_right,
            edges: pairs,
            weights: Some(weights),
        })
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    /// Weight of edge `(l, r)`, 1 on unweighted graphs.
    pub fn weight(&self, l: usize, r: usize) -> Option<Rational> {
        let i = self.edges.iter().position(|&e| e == (l, r))?;
        Some(match &self.weights {
            Some(w) => w[i].clone(),
            None => Rational::from_integer(1.into()),
        })
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_left];
        for (i, &(l, r)) in self.edges.iter().enumerate() {
            adj[l].push((r, i));
        }
        adj
    }
}

fn check_edges(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize)],
) -> Result<(), MatchingError> {
    let mut seen = edges.to_vec();
    for &(left, right) in edges {
        if left >= n_left || right >= n_right {
            return Err(MatchingError::OutOfRange { left, right });
        }
    }
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(MatchingError::ParallelEdge {
            left: w[0].0,
            right: w[0].1,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left_mate: Vec<Option<usize>>,
    right_mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n_left: usize, n_right: usize) -> Self {
        Self {
            left_mate: vec![None; n_left],
            right_mate: vec![None; n_right],
        }
    }

    pub fn len(&self) -> usize {
        self.left_mate.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mate_of_left(&self, l: usize) -> Option<usize> {
        self.left_mate[l]
    }

    pub fn mate_of_right(&self, r: usize) -> Option<usize> {
        self.right_mate[r]
    }

    pub fn contains(&self, l: usize, r: usize) -> bool {
        self.left_mate.get(l).copied().flatten() == Some(r)
    }

    /// Matched pairs in left order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left_mate
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
    }

    /// Adds `(l, r)`. Both endpoints must be free.
    pub fn insert(&mut self, l: usize, r: usize) {
        debug_assert!(self.left_mate[l].is_none() && self.right_mate[r].is_none());
        self.left_mate[l] = Some(r);
        self.right_mate[r] = Some(l);
    }

    /// Sum of edge weights on `g` (edge count when unweighted). `None` if a
    /// matched pair is not an edge of `g`.
    pub fn weight(&self, g: &BipartiteGraph) -> Option<Rational> {
        let mut total = Rational::zero();
        for (l, r) in self.pairs() {
            total += g.weight(l, r)?;
        }
        Some(total)
    }

    /// No node appears twice and every pair is an edge of `g`.
    pub fn is_valid_on(&self, g: &BipartiteGraph) -> bool {
        self.left_mate.len() == g.n_left
            && self.right_mate.len() == g.n_right
            && self
                .pairs()
                .all(|(l, r)| self.right_mate[r] == Some(l) && g.edges.contains(&(l, r)))
            && self
                .right_mate
                .iter()
                .enumerate()
                .all(|(r, l)| l.is_none_or(|l| self.left_mate[l] == Some(r)))
    }
}

/// Hopcroft-Karp: shortest augmenting paths in phases.
pub fn max_cardinality_matching(g: &BipartiteGraph) -> Matching {
    let adj: Vec<Vec<usize>> = g
        .adjacency()
        .into_iter()
        .map(|a| a.into_iter().map(|(r, _)| r).collect())
        .collect();
    let mut m = Matching::empty(g.n_left, g.n_right);
    let mut layer = vec![usize::MAX; g.n_left];
    loop {
        if !bfs_layers(&adj, &m, &mut layer) {
            break;
        }
        let mut next = vec![0usize; g.n_left];
        for l in 0..g.n_left {
            if m.left_mate[l].is_none() {
                augment_from(l, &adj, &mut m, &mut layer, &mut next);
            }
        }
    }
    m
}

fn bfs_layers(adj: &[Vec<usize>], m: &Matching, layer: &mut [usize]) -> bool {
    let mut queue = alloc::collections::VecDeque::new();
    for (l, d) in layer.iter_mut().enumerate() {
        if m.left_mate[l].is_none() {
            *d = 0;
            queue.push_back(l);
        } else {
            *d = usize::MAX;
        }
    }
    let mut found = false;
    while let Some(l) = queue.pop_front() {
        for &r in &adj[l] {
            match m.right_mate[r] {
                None => found = true,
                Some(l2) if layer[l2] == usize::MAX => {
                    layer[l2] = layer[l] + 1;
                    queue.push_back(l2);
                }
                Some(_) => {}
            }
        }
    }
    found
}

/// Iterative layered DFS from the free left node `root`.
fn augment_from(
    root: usize,
    adj: &[Vec<usize>],
    m: &mut Matching,
    layer: &mut [usize],
    next: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&l) = stack.last() {
        if next[l] == adj[l].len() {
            layer[l] = usize::MAX;
            stack.pop();
            continue;
        }
        let r = adj[l][next[l]];
        next[l] += 1;
        match m.right_mate[r] {
            None => {
                // Flip the path: each stacked left node takes the right node
                // it advanced through.
                let mut r = r;
                while let Some(l) = stack.pop() {
                    let prev = m.left_mate[l];
                    m.left_mate[l] = Some(r);
                    m.right_mate[r] = Some(l);
                    match prev {
                        Some(p) => r = p,
                        None => break,
                    }
                }
                return true;
            }
            Some(l2) if layer[l2] == layer[l] + 1 => stack.push(l2),
            Some(_) => {}
        }
    }
    false
}

trait Weight: Clone + Ord + Signed {}
impl Weight for i128 {}
impl Weight for BigInt {}

/// Maximum total weight over all matchings, of any cardinality. Panics on an
/// unweighted graph; use [`max_cardinality_matching`] there.
pub fn max_weight_matching(g: &BipartiteGraph) -> Matching {
    let weights = g
        .weights
        .as_ref()
        .expect("max_weight_matching needs a weighted graph");
    let scale = common_denominator(weights.iter());
    let scaled: Vec<BigInt> = weights.iter().map(|w| (w * &scale).to_integer()).collect();
    let max = scaled.iter().max().cloned().unwrap_or_default();
    // Potentials of unreached nodes grow by at most one maximal label per
    // phase, so every intermediate value is below this bound.
    let nodes = BigInt::from(g.n_left + g.n_right + 2);
    let bound: BigInt = &max * &nodes * &nodes * 8;
    let adj = g.adjacency();
    if bound.to_i128().is_some() {
        let w: Vec<i128> = scaled
            .iter()
            .map(|w| w.to_i128().expect("bounded"))
            .collect();
        successive_shortest_paths(g.n_left, g.n_right, &adj, &w)
    } else {
        successive_shortest_paths(g.n_left, g.n_right, &adj, &scaled)
    }
}

fn successive_shortest_paths<W: Weight>(
    n_left: usize,
    n_right: usize,
    adj: &[Vec<(usize, usize)>],
    weight: &[W],
) -> Matching {
    let n = n_left + n_right;
    let mut m = Matching::empty(n_left, n_right);
    // mate_edge[l]: edge index of l's matched edge.
    let mut mate_edge: Vec<Option<usize>> = vec![None; n_left];
    // Costs are negated weights; start with potentials that make every
    // reduced cost non-negative.
    let mut pot: Vec<W> = vec![W::zero(); n];
    for list in adj {
        for &(r, e) in list {
            let c = -weight[e].clone();
            if c < pot[n_left + r] {
                pot[n_left + r] = c;
            }
        }
    }
    let mut dist: Vec<Option<W>> = vec![None; n];
    let mut parent: Vec<usize> = vec![usize::MAX; n];
    let mut done = vec![false; n];
    loop {
        dist.iter_mut().for_each(|d| *d = None);
        done.iter_mut().for_each(|d| *d = false);
        let mut heap = BinaryHeap::new();
        for l in 0..n_left {
            if m.left_mate[l].is_none() {
                let d = -pot[l].clone();
                dist[l] = Some(d.clone());
                parent[l] = usize::MAX;
                heap.push(Reverse((d, l)));
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            let mut relax = |u: usize, nd: W, heap: &mut BinaryHeap<Reverse<(W, usize)>>| {
                if !done[u] && dist[u].as_ref().is_none_or(|old| nd < *old) {
                    dist[u] = Some(nd.clone());
                    parent[u] = v;
                    heap.push(Reverse((nd, u)));
                }
            };
            if v < n_left {
                for &(r, e) in &adj[v] {
                    if mate_edge[v] == Some(e) {
                        continue;
                    }
                    let u = n_left + r;
                    let reduced = -weight[e].clone() + pot[v].clone() - pot[u].clone();
                    relax(u, d.clone() + reduced, &mut heap);
                }
            } else if let Some(l) = m.right_mate[v - n_left] {
                let e = mate_edge[l].expect("matched left has an edge");
                let reduced = weight[e].clone() + pot[v].clone() - pot[l].clone();
                relax(l, d.clone() + reduced, &mut heap);
            }
        }

        // Real path cost to a free right node r is dist(r) + pot(r).
        let mut best: Option<(W, usize)> = None;
        for r in 0..n_right {
            if m.right_mate[r].is_some() {
                continue;
            }
            if let Some(d) = &dist[n_left + r] {
                let real = d.clone() + pot[n_left + r].clone();
                if best.as_ref().is_none_or(|(b, _)| real < *b) {
                    best = Some((real, r));
                }
            }
        }

        let cap = dist.iter().flatten().max().cloned().unwrap_or_else(W::zero);
        for v in 0..n {
            let d = dist[v].clone().unwrap_or_else(|| cap.clone());
            pot[v] = pot[v].clone() + d;
        }

        let Some((cost, r)) = best else { break };
        if !cost.is_negative() {
            break;
        }
        let mut v = n_left + r;
        loop {
            let l = parent[v];
            let r = v - n_left;
            let e = adj[l]
                .iter()
                .find(|&&(rr, _)| rr == r)
                .expect("tree edge exists")
                .1;
            let prev = m.left_mate[l];
            m.left_mate[l] = Some(r);
            m.right_mate[r] = Some(l);
            mate_edge[l] = Some(e);
            match prev {
                Some(p) => v = n_left + p,
                None => break,
            }
        }
    }
    m
}
