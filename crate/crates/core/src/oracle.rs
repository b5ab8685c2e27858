//! Brute-force ground truth for tiny instances.
//!
//! Nothing here uses the matching code or the reductions: solutions are
//! enumerated directly cell by cell, so agreement with the solvers is
//! meaningful.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, ToPrimitive, Zero};

use crate::advice::{integer_row, IlpModel, Sense, VarKind};
use crate::benefit::{total_benefit, BenefitProfile};
use crate::instance::{
    AgentId, CompatibilityGraph, LabelId, MultiRoundSolution, RestrictionsGraph,
};
use crate::rational::Rational;

pub const DEFAULT_STATE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("search visited more than {0} states")]
    CapExceeded(u64),
    #[error("expected {expected} benefit profiles, got {found}")]
    ProfileCount { expected: usize, found: usize },
    #[error("model coefficients too large for the exhaustive solver")]
    Coefficients,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub state_cap: u64,
    /// Within a round, try only the first of several interchangeable
    /// resources with equal load. Preserves every objective but not the
    /// solution counts.
    pub resource_symmetry: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            state_cap: DEFAULT_STATE_CAP,
            resource_symmetry: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub best_benefit: Rational,
    pub best_min_ratio: Rational,
    pub best_satisfied: usize,
    pub feasible: bool,
    pub benefit_witness: MultiRoundSolution,
    pub ratio_witness: MultiRoundSolution,
    pub satisfied_witness: MultiRoundSolution,
    /// Maximum of `sum_i gamma_i`.
    pub best_total_assignments: u32,
    pub solutions_enumerated: u64,
    /// Solutions to which no single assignment can be added.
    pub maximal_solutions: u64,
}

struct Search<'a> {
    g: &'a CompatibilityGraph,
    cfg: OracleConfig,
    /// `(round, agent)` cells in visiting order.
    cells: Vec<(u32, usize)>,
    options: Vec<Vec<usize>>,
    /// For each resource, the first resource interchangeable with it.
    class: Vec<usize>,
    gamma: Vec<u32>,
    load: Vec<Vec<u32>>,
    choice: Vec<Option<usize>>,
    states: u64,
    solutions: u64,
    maximal: u64,
    distinct: BTreeMap<Vec<u32>, Vec<Vec<(usize, usize)>>>,
}

impl Search<'_> {
    fn run(&mut self, cell: usize) -> Result<(), OracleError> {
        self.states += 1;
        if self.states > self.cfg.state_cap {
            return Err(OracleError::CapExceeded(self.cfg.state_cap));
        }
        if cell == self.cells.len() {
            self.record();
            return Ok(());
        }
        self.choice[cell] = None;
        self.run(cell + 1)?;
        let (t, a) = self.cells[cell];
        if self.gamma[a] >= self.g.agents()[a].rho {
            return Ok(());
        }
        let ti = t as usize - 1;
        for idx in 0..self.options[a].len() {
            let r = self.options[a][idx];
            if self.load[ti][r] >= self.g.resources()[r].capacity {
                continue;
            }
            if self.cfg.resource_symmetry {
                let c = self.class[r];
                let earlier = self.options[a][..idx]
                    .iter()
                    .any(|&r2| self.class[r2] == c && self.load[ti][r2] == self.load[ti][r]);
                if earlier {
                    continue;
                }
            }
            self.choice[cell] = Some(r);
            self.gamma[a] += 1;
            self.load[ti][r] += 1;
            self.run(cell + 1)?;
            self.gamma[a] -= 1;
            self.load[ti][r] -= 1;
        }
        self.choice[cell] = None;
        Ok(())
    }

    fn record(&mut self) {
        self.solutions += 1;
        let extendable = self.cells.iter().enumerate().any(|(c, &(t, a))| {
            self.choice[c].is_none()
                && self.gamma[a] < self.g.agents()[a].rho
                && self.options[a]
                    .iter()
                    .any(|&r| self.load[t as usize - 1][r] < self.g.resources()[r].capacity)
        });
        if !extendable {
            self.maximal += 1;
        }
        if !self.distinct.contains_key(&self.gamma) {
            let mut rounds = vec![Vec::new(); self.g.k() as usize];
            for (c, &(t, a)) in self.cells.iter().enumerate() {
                if let Some(r) = self.choice[c] {
                    rounds[t as usize - 1].push((a, r));
                }
            }
            self.distinct.insert(self.gamma.clone(), rounds);
        }
    }
}

/// Enumerates every valid solution with `gamma_i <= rho_i` and evaluates all
/// objectives. `profiles` are in agent order.
pub fn enumerate_solutions(
    g: &CompatibilityGraph,
    profiles: &[BenefitProfile],
    cfg: OracleConfig,
) -> Result<OracleResult, OracleError> {
    let n = g.agents().len();
    if profiles.len() != n {
        return Err(OracleError::ProfileCount {
            expected: n,
            found: profiles.len(),
        });
    }
    let mut options = vec![Vec::new(); n];
    for &(a, r) in g.edges() {
        options[a].push(r);
    }
    let mut neighbors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.resources().len()];
    for &(a, r) in g.edges() {
        neighbors[r].insert(a);
    }
    let class = (0..g.resources().len())
        .map(|r| {
            (0..=r)
                .find(|&r2| {
                    neighbors[r2] == neighbors[r]
                        && g.resources()[r2].capacity == g.resources()[r].capacity
                })
                .unwrap_or(r)
        })
        .collect();
    let mut cells = Vec::new();
    for t in 1..=g.k() {
        for (a, spec) in g.agents().iter().enumerate() {
            if spec.allowed_rounds.contains(&t) && !options[a].is_empty() && spec.rho > 0 {
                cells.push((t, a));
            }
        }
    }
    let mut search = Search {
        g,
        cfg,
        choice: vec![None; cells.len()],
        cells,
        options,
        class,
        gamma: vec![0; n],
        load: vec![vec![0; g.resources().len()]; g.k() as usize],
        states: 0,
        solutions: 0,
        maximal: 0,
        distinct: BTreeMap::new(),
    };
    search.run(0)?;

    let rho: Vec<u32> = g.agents().iter().map(|a| a.rho).collect();
    let mut best: Option<(Rational, &Vec<u32>)> = None;
    let mut best_ratio: Option<(Rational, &Vec<u32>)> = None;
    let mut best_sat: Option<(usize, &Vec<u32>)> = None;
    let mut best_total = 0;
    for gamma in search.distinct.keys() {
        let b = total_benefit(profiles, gamma.iter().copied());
        let ratio = gamma
            .iter()
            .zip(&rho)
            .filter(|(_, &r)| r > 0)
            .map(|(&g, &r)| Rational::new(g.into(), r.into()))
            .min()
            .unwrap_or_else(Rational::one);
        let sat = gamma.iter().zip(&rho).filter(|(g, r)| g >= r).count();
        best_total = best_total.max(gamma.iter().sum());
        if best.as_ref().is_none_or(|(v, _)| b > *v) {
            best = Some((b, gamma));
        }
        if best_ratio.as_ref().is_none_or(|(v, _)| ratio > *v) {
            best_ratio = Some((ratio, gamma));
        }
        if best_sat.is_none_or(|(v, _)| sat > v) {
            best_sat = Some((sat, gamma));
        }
    }
    // The empty solution is always enumerated.
    let (best_benefit, bg) = best.expect("at least one solution");
    let (best_min_ratio, rg) = best_ratio.expect("at least one solution");
    let (best_satisfied, sg) = best_sat.expect("at least one solution");
    let witness = |gamma: &Vec<u32>| MultiRoundSolution::from_indexed(g, &search.distinct[gamma]);
    Ok(OracleResult {
        benefit_witness: witness(bg),
        ratio_witness: witness(rg),
        satisfied_witness: witness(sg),
        feasible: best_satisfied == n,
        best_benefit,
        best_min_ratio,
        best_satisfied,
        best_total_assignments: best_total,
        solutions_enumerated: search.solutions,
        maximal_solutions: search.maximal,
    })
}

/// Size of a minimum vertex cover, by trying vertex subsets in increasing
/// size. Vertices are `0..n`.
pub fn min_vertex_cover(n: usize, edges: &[(usize, usize)]) -> usize {
    assert!(n < 64, "vertex cover oracle handles fewer than 64 vertices");
    (0u64..1 << n)
        .filter(|mask| {
            edges
                .iter()
                .all(|&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Size of a minimum cover of `0..universe` by the given subsets, or `None`
/// if even all of them leave an element uncovered.
pub fn min_set_cover(universe: usize, subsets: &[BTreeSet<usize>]) -> Option<usize> {
    assert!(
        subsets.len() < 64,
        "set cover oracle handles fewer than 64 subsets"
    );
    (0u64..1 << subsets.len())
        .filter(|mask| {
            (0..universe).all(|e| {
                subsets
                    .iter()
                    .enumerate()
                    .any(|(h, s)| mask & (1 << h) != 0 && s.contains(&e))
            })
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
}

/// Every label subset of `labels` whose cost fits the budget, unpruned.
fn affordable_subsets(g: &RestrictionsGraph, agent: usize) -> Vec<BTreeSet<LabelId>> {
    let spec = &g.agents()[agent];
    let labels: Vec<&LabelId> = spec.labels.keys().collect();
    assert!(
        labels.len() < 24,
        "advice oracle handles fewer than 24 labels per agent"
    );
    (0u32..1 << labels.len())
        .map(|mask| {
            labels
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, l)| (*l).clone())
                .collect::<BTreeSet<_>>()
        })
        .filter(|set| spec.cost_of(set) <= spec.budget)
        .collect()
}

/// Most agents satisfiable over every combination of affordable label
/// removals, each induced graph solved by [`enumerate_solutions`].
pub fn best_advice(
    g: &RestrictionsGraph,
    profiles: &[BenefitProfile],
    cfg: OracleConfig,
) -> Result<usize, OracleError> {
    let per_agent: Vec<Vec<BTreeSet<LabelId>>> = (0..g.agents().len())
        .map(|a| affordable_subsets(g, a))
        .collect();
    let mut seen: BTreeMap<Vec<(usize, usize)>, usize> = BTreeMap::new();
    let mut best = 0;
    let mut pick = vec![0usize; per_agent.len()];
    loop {
        let removals: BTreeMap<AgentId, BTreeSet<LabelId>> = g
            .agents()
            .iter()
            .zip(&pick)
            .zip(&per_agent)
            .map(|((a, &p), sets)| (a.id.clone(), sets[p].clone()))
            .collect();
        let c = g
            .derive_compatibility(&removals)
            .expect("subsets use the agent's own labels");
        let key = c.edges().to_vec();
        let value = match seen.get(&key) {
            Some(&v) => v,
            None => {
                let v = enumerate_solutions(&c, profiles, cfg)?.best_satisfied;
                seen.insert(key, v);
                v
            }
        };
        best = best.max(value);
        // Odometer over the cross product.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(best);
            }
            pick[i] += 1;
            if pick[i] < per_agent[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

type Row = (Vec<(usize, i128)>, i128);

struct IlpSearch {
    rows: Vec<Row>,
    objective: Vec<(usize, i128)>,
    order: Vec<usize>,
    best: Option<(i128, Vec<i128>)>,
    nodes: u64,
    cap: u64,
}

impl IlpSearch {
    /// Tightens bounds to a fixpoint; `false` when some row cannot hold.
    fn propagate(&self, lo: &mut [i128], hi: &mut [i128]) -> bool {
        loop {
            let mut changed = false;
            for (terms, rhs) in &self.rows {
                let min: i128 = terms
                    .iter()
                    .map(|&(j, a)| if a > 0 { a * lo[j] } else { a * hi[j] })
                    .sum();
                if min > *rhs {
                    return false;
                }
                let slack = rhs - min;
                for &(j, a) in terms {
                    if a > 0 {
                        let top = lo[j] + slack / a;
                        if top < hi[j] {
                            hi[j] = top;
                            changed = true;
                        }
                    } else if a < 0 {
                        let bottom = hi[j] - slack / -a;
                        if bottom > lo[j] {
                            lo[j] = bottom;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&mut self, mut lo: Vec<i128>, mut hi: Vec<i128>) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(OracleError::CapExceeded(self.cap));
        }
        if !self.propagate(&mut lo, &mut hi) {
            return Ok(());
        }
        let bound: i128 = self
            .objective
            .iter()
            .map(|&(j, c)| if c > 0 { c * hi[j] } else { c * lo[j] })
            .sum();
        if self.best.as_ref().is_some_and(|(b, _)| bound <= *b) {
            return Ok(());
        }
        let Some(&v) = self.order.iter().find(|&&v| lo[v] < hi[v]) else {
            self.best = Some((bound, lo));
            return Ok(());
        };
        for value in (lo[v]..=hi[v]).rev() {
            let (mut l, mut h) = (lo.clone(), hi.clone());
            l[v] = value;
            h[v] = value;
            self.run(l, h)?;
        }
        Ok(())
    }
}

fn small_row(terms: &[(usize, Rational)], rhs: &Rational) -> Result<Row, OracleError> {
    let (terms, rhs) = integer_row(terms, rhs);
    let terms = terms
        .into_iter()
        .map(|(j, c)| c.to_i64().map(|c| (j, c as i128)))
        .collect::<Option<Vec<_>>>()
        .ok_or(OracleError::Coefficients)?;
    Ok((
        terms,
        rhs.to_i64().ok_or(OracleError::Coefficients)? as i128,
    ))
}

/// Maximum of an integer model and one maximizing assignment, or `None` if
/// the model is infeasible. Complete branch and bound over the integer
/// domains with bound tightening; `cap` limits the nodes visited.
pub fn solve_ilp(m: &IlpModel, cap: u64) -> Result<Option<(Rational, Vec<i64>)>, OracleError> {
    let mut rows = Vec::new();
    for c in &m.constraints {
        let (terms, rhs) = small_row(&c.terms, &c.rhs)?;
        let negated = || (terms.iter().map(|&(j, a)| (j, -a)).collect(), -rhs);
        match c.sense {
            Sense::Le => rows.push((terms.clone(), rhs)),
            Sense::Ge => rows.push(negated()),
            Sense::Eq => {
                rows.push(negated());
                rows.push((terms.clone(), rhs));
            }
        }
    }
    let (objective, _) = small_row(&m.objective, &Rational::zero())?;
    let mut order: Vec<usize> = (0..m.vars.len()).collect();
    order.sort_by_key(|&v| !objective.iter().any(|&(j, c)| j == v && c != 0));
    let (lo, hi): (Vec<i128>, Vec<i128>) = m
        .vars
        .iter()
        .map(|v| match v.kind {
            VarKind::Binary => (0, 1),
            VarKind::Integer { upper } => (0, upper as i128),
        })
        .unzip();
    let mut search = IlpSearch {
        rows,
        objective,
        order,
        best: None,
        nodes: 0,
        cap,
    };
    search.run(lo, hi)?;
    Ok(search.best.map(|(_, x)| {
        let x: Vec<i64> = x.into_iter().map(|v| v as i64).collect();
        (m.evaluate(&x).expect("search keeps every row"), x)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advice::build_ilp;
    use crate::benefit::{profiles_for, Welfare};
    use crate::fixtures;
    use crate::instance::{validate_solution, AgentSpec, ResourceSpec};
    use crate::rational::int;

    fn utilitarian_oracle(g: &CompatibilityGraph) -> OracleResult {
        enumerate_solutions(
            g,
            &profiles_for(g, Welfare::Utilitarian),
            OracleConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn three_agent_example() {
        let g = fixtures::three_agent_example();
        let r = utilitarian_oracle(&g);
        assert!(r.feasible);
        assert_eq!(r.best_benefit, int(5));
        assert_eq!(r.best_satisfied, 3);
        for w in [&r.benefit_witness, &r.ratio_witness, &r.satisfied_witness] {
            assert!(validate_solution(w, &g).is_empty());
        }
    }

    #[test]
    fn empty_graph() {
        let g = CompatibilityGraph::new(
            2,
            vec![AgentSpec::new("a", 1, [1]), AgentSpec::new("b", 0, [2])],
            vec![ResourceSpec::unit("r")],
            vec![],
        )
        .unwrap();
        let r = utilitarian_oracle(&g);
        assert!(!r.feasible);
        assert_eq!(r.best_benefit, int(0));
        assert_eq!(r.best_satisfied, 1);

        let g =
            CompatibilityGraph::new(1, vec![AgentSpec::new("b", 0, [1])], vec![], vec![]).unwrap();
        assert!(utilitarian_oracle(&g).feasible);
    }

    #[test]
    fn two_maximal_solutions_for_one_agent_and_two_resources() {
        let g = CompatibilityGraph::new(
            1,
            vec![AgentSpec::new("a", 1, [1])],
            vec![ResourceSpec::unit("r"), ResourceSpec::unit("s")],
            vec![("a".into(), "r".into()), ("a".into(), "s".into())],
        )
        .unwrap();
        let r = utilitarian_oracle(&g);
        assert_eq!(r.maximal_solutions, 2);
        assert_eq!(r.solutions_enumerated, 3);
    }

    #[test]
    fn symmetry_pruning_keeps_objectives() {
        let g = CompatibilityGraph::new(
            2,
            vec![
                AgentSpec::new("a", 2, [1, 2]),
                AgentSpec::new("b", 1, [1, 2]),
                AgentSpec::new("c", 2, [1, 2]),
            ],
            vec![ResourceSpec::unit("r"), ResourceSpec::unit("s")],
            vec![
                ("a".into(), "r".into()),
                ("a".into(), "s".into()),
                ("b".into(), "r".into()),
                ("b".into(), "s".into()),
                ("c".into(), "r".into()),
                ("c".into(), "s".into()),
            ],
        )
        .unwrap();
        let p = profiles_for(&g, Welfare::Rawlsian);
        let full = enumerate_solutions(&g, &p, OracleConfig::default()).unwrap();
        let pruned = enumerate_solutions(
            &g,
            &p,
            OracleConfig {
                resource_symmetry: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(pruned.solutions_enumerated < full.solutions_enumerated);
        assert_eq!(
            (
                &full.best_benefit,
                &full.best_min_ratio,
                full.best_satisfied
            ),
            (
                &pruned.best_benefit,
                &pruned.best_min_ratio,
                pruned.best_satisfied
            )
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = fixtures::three_agent_example();
        let cfg = OracleConfig {
            state_cap: 5,
            ..Default::default()
        };
        assert_eq!(
            enumerate_solutions(&g, &profiles_for(&g, Welfare::Utilitarian), cfg).unwrap_err(),
            OracleError::CapExceeded(5)
        );
    }

    #[test]
    fn vertex_and_set_cover() {
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(min_vertex_cover(4, &k4), 3);
        let path = [(0, 1), (1, 2)];
        assert_eq!(min_vertex_cover(3, &path), 1);
        let subsets: Vec<BTreeSet<usize>> = vec![[0].into(), [1].into(), [0, 1].into()];
        assert_eq!(min_set_cover(2, &subsets), Some(1));
        assert_eq!(min_set_cover(3, &subsets), None);
    }

    #[test]
    fn advice_oracle_on_lab_example() {
        let g = fixtures::lab_example();
        let p: Vec<_> = g
            .agents()
            .iter()
            .map(|a| crate::benefit::utilitarian(a.rho))
            .collect();
        assert_eq!(best_advice(&g, &p, OracleConfig::default()).unwrap(), 4);
        let base = enumerate_solutions(&g.compatibility(), &p, OracleConfig::default()).unwrap();
        assert_eq!(base.best_satisfied, 3);
    }

    #[test]
    fn ilp_single_assignment() {
        let g = RestrictionsGraph::new(
            1,
            vec![AgentSpec::new("x", 1, [1])],
            vec![ResourceSpec::unit("y")],
            vec![crate::EdgeSpec::free("x", "y")],
        )
        .unwrap();
        let (best, x) = solve_ilp(&build_ilp(&g), DEFAULT_STATE_CAP)
            .unwrap()
            .unwrap();
        assert_eq!(best, int(1));
        assert_eq!(x, [1, 1, 1, 1]);
    }

    #[test]
    fn ilp_matches_advice_oracle() {
        use crate::gen::tiny::{random_restrictions, TinyParams};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let p = TinyParams {
            agents: (1, 3),
            labels: (0, 3),
            label_cost: (1, 2),
            budget: (0, 3),
            ..Default::default()
        };
        for _ in 0..30 {
            let g = random_restrictions(&mut rng, &p);
            let (best, _) = solve_ilp(&build_ilp(&g), DEFAULT_STATE_CAP)
                .unwrap()
                .unwrap();
            let c = g.compatibility();
            let direct = best_advice(
                &g,
                &profiles_for(&c, Welfare::Utilitarian),
                OracleConfig::default(),
            )
            .unwrap();
            assert_eq!(best, int(direct as i64));
        }
    }

    #[test]
    fn ilp_infeasible_model() {
        let g = RestrictionsGraph::new(1, vec![], vec![], vec![]).unwrap();
        let mut m = build_ilp(&g);
        assert_eq!(solve_ilp(&m, 10).unwrap().map(|r| r.0), Some(int(0)));
        m.constraints.push(crate::advice::IlpConstraint {
            family: crate::advice::ConstraintFamily::Budget,
            terms: vec![],
            sense: Sense::Ge,
            rhs: int(1),
        });
        assert_eq!(solve_ilp(&m, 10).unwrap(), None);
    }
}
