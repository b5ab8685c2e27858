//! Maximizing the number of satisfied agents on a fixed compatibility graph.
//!
//! The exact solver searches agent subsets, largest first, using the MRM
//! solver as feasibility test: a set is satisfiable iff the MRM instance
//! restricted to it is feasible, and supersets of an unsatisfiable set are
//! unsatisfiable. Agents outside the chosen set stay unmatched.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::benefit::{profiles_for, Welfare};
use crate::instance::{AgentId, CompatibilityGraph, MultiRoundSolution};
use crate::maxtb::{solve_maxtb, MaxtbError};
use crate::mrm::solve_mrm_subset;

/// Default limit on feasibility checks.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxsaResult {
    pub satisfied: BTreeSet<AgentId>,
    pub solution: MultiRoundSolution,
    /// `true` when `satisfied` is proven maximum.
    pub exact: bool,
}

impl MaxsaResult {
    pub fn count(&self) -> usize {
        self.satisfied.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaxsaError {
    #[error("search budget of {budget} feasibility checks exceeded; best found satisfies {}", .incumbent.count())]
    BudgetExceeded {
        budget: u64,
        incumbent: Box<MaxsaResult>,
    },
    #[error(transparent)]
    Maxtb(#[from] MaxtbError),
}

struct Search<'a> {
    g: &'a CompatibilityGraph,
    /// Agents with positive demand, in search order.
    order: Vec<usize>,
    include: Vec<bool>,
    best: Vec<bool>,
    best_size: usize,
    size: usize,
    calls: u64,
    budget: u64,
}

impl Search<'_> {
    fn feasible(&mut self) -> Result<bool, ()> {
        if self.calls >= self.budget {
            return Err(());
        }
        self.calls += 1;
        Ok(solve_mrm_subset(self.g, &self.include).is_some())
    }

    /// `include` holds a satisfiable set over `order[..pos]`.
    fn run(&mut self, pos: usize) -> Result<(), ()> {
        if self.size > self.best_size {
            self.best_size = self.size;
            self.best.clone_from(&self.include);
        }
        if pos == self.order.len() || self.size + (self.order.len() - pos) <= self.best_size {
            return Ok(());
        }
        let a = self.order[pos];
        self.include[a] = true;
        self.size += 1;
        let ok = self.feasible();
        let descend = match ok {
            Ok(true) => self.run(pos + 1),
            Ok(false) => Ok(()),
            Err(()) => Err(()),
        };
        self.include[a] = false;
        self.size -= 1;
        descend?;
        self.run(pos + 1)
    }
}

fn result(g: &CompatibilityGraph, include: &[bool], exact: bool) -> MaxsaResult {
    let solution = solve_mrm_subset(g, include).expect("chosen set is satisfiable");
    let satisfied = g
        .agents()
        .iter()
        .zip(include)
        .filter(|(a, &inc)| inc || a.rho == 0)
        .map(|(a, _)| a.id.clone())
        .collect();
    MaxsaResult {
        satisfied,
        solution,
        exact,
    }
}

/// Maximum satisfied set; `budget` caps the number of feasibility checks.
pub fn solve_maxsa_exact(g: &CompatibilityGraph, budget: u64) -> Result<MaxsaResult, MaxsaError> {
    let n = g.agents().len();
    let order: Vec<usize> = (0..n).filter(|&a| g.agents()[a].rho > 0).collect();
    let mut search = Search {
        g,
        include: alloc::vec![false; n],
        best: alloc::vec![false; n],
        best_size: 0,
        size: 0,
        calls: 0,
        budget,
        order,
    };
    // Everyone at once settles feasible instances in one check.
    for &a in &search.order {
        search.include[a] = true;
    }
    search.size = search.order.len();
    match search.feasible() {
        Ok(true) => return Ok(result(g, &search.include, true)),
        Ok(false) => {}
        Err(()) => return Err(budget_error(g, &search.best, budget)),
    }
    search.include.iter_mut().for_each(|x| *x = false);
    search.size = 0;
    match search.run(0) {
        Ok(()) => Ok(result(g, &search.best, true)),
        Err(()) => Err(budget_error(g, &search.best, budget)),
    }
}

fn budget_error(g: &CompatibilityGraph, best: &[bool], budget: u64) -> MaxsaError {
    MaxsaError::BudgetExceeded {
        budget,
        incumbent: Box::new(result(g, best, false)),
    }
}

/// Agents fully served by a utilitarian optimum. Not necessarily maximum.
pub fn solve_maxsa_heuristic(g: &CompatibilityGraph) -> Result<MaxsaResult, MaxsaError> {
    let out = solve_maxtb(g, &profiles_for(g, Welfare::Utilitarian))?;
    let satisfied: BTreeSet<AgentId> = g
        .agents()
        .iter()
        .filter(|a| out.solution.gamma_of(&a.id) == a.rho)
        .map(|a| a.id.clone())
        .collect();
    let mut solution = out.solution;
    solution.retain_agents(|a| satisfied.contains(a));
    Ok(MaxsaResult {
        satisfied,
        solution,
        exact: false,
    })
}
