//! Integer program for the advice problem and its LP-format text.
//!
//! Variables, in this order: label removals `w_i_t`, edge presence `z_i_j`,
//! assignments `a_i_j_r`, rounds served `eta_i` and satisfaction `s_i`, all
//! numbered from 1 in sorted id order. Every agent-resource pair gets a `z`
//! variable; pairs without an edge are pinned to 0.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::instance::RestrictionsGraph;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintFamily {
    /// Removal cost within the agent's budget.
    Budget,
    /// An edge is present only if each of its labels is removed.
    EdgeNeedsLabel,
    /// An edge is present once all its labels are removed.
    EdgeFromLabels,
    /// Label-free edges are present.
    FreeEdge,
    /// Pairs without an edge are absent.
    MissingEdge,
    /// Assignments use present edges only.
    AssignmentOnEdge,
    /// `eta_i` counts the agent's assignments.
    RoundsServed,
    /// At most one resource per agent per round.
    AgentPerRound,
    /// At most capacity agents per resource per round.
    ResourcePerRound,
    /// No assignment in a round the agent did not allow.
    RoundNotAllowed,
    /// `eta_i - rho_i + 1 <= k s_i`.
    SatisfiedIfServed,
    /// `k s_i <= eta_i - rho_i + k`.
    ServedIfSatisfied,
}

impl ConstraintFamily {
    pub const ALL: [ConstraintFamily; 12] = [
        Self::Budget,
        Self::EdgeNeedsLabel,
        Self::EdgeFromLabels,
        Self::FreeEdge,
        Self::MissingEdge,
        Self::AssignmentOnEdge,
        Self::RoundsServed,
        Self::AgentPerRound,
        Self::ResourcePerRound,
        Self::RoundNotAllowed,
        Self::SatisfiedIfServed,
        Self::ServedIfSatisfied,
    ];

    /// Prefix of the constraint names in LP text.
    pub fn tag(self) -> &'static str {
        match self {
            Self::Budget => "budget",
            Self::EdgeNeedsLabel => "edge_label",
            Self::EdgeFromLabels => "edge_all",
            Self::FreeEdge => "edge_free",
            Self::MissingEdge => "edge_missing",
            Self::AssignmentOnEdge => "assign_edge",
            Self::RoundsServed => "served",
            Self::AgentPerRound => "agent_round",
            Self::ResourcePerRound => "resource_round",
            Self::RoundNotAllowed => "round_allowed",
            Self::SatisfiedIfServed => "sat_lower",
            Self::ServedIfSatisfied => "sat_upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    /// Integer in `0..=upper`.
    Integer {
        upper: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpVar {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpConstraint {
    pub family: ConstraintFamily,
    /// `(variable index, coefficient)`, no repeated variable.
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Maximization model with integer variables and linear constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    pub vars: Vec<IlpVar>,
    pub constraints: Vec<IlpConstraint>,
    /// Objective coefficients.
    pub objective: Vec<(usize, Rational)>,
    n: usize,
    m: usize,
    k: usize,
    w_start: Vec<usize>,
}

impl IlpModel {
    pub fn w(&self, agent: usize, label: usize) -> usize {
        self.w_start[agent] + label
    }

    pub fn w_count(&self) -> usize {
        self.w_start[self.n]
    }

    pub fn z(&self, agent: usize, resource: usize) -> usize {
        self.w_count() + agent * self.m + resource
    }

    /// `round` is 1-based.
    pub fn a(&self, agent: usize, resource: usize, round: u32) -> usize {
        self.w_count() + self.n * self.m + (agent * self.m + resource) * self.k + round as usize - 1
    }

    pub fn eta(&self, agent: usize) -> usize {
        self.w_count() + self.n * self.m * (1 + self.k) + agent
    }

    pub fn s(&self, agent: usize) -> usize {
        self.eta(agent) + self.n
    }

    pub fn family_count(&self, f: ConstraintFamily) -> usize {
        self.constraints.iter().filter(|c| c.family == f).count()
    }

    /// Objective value of `x`, or `None` if `x` breaks a bound or a
    /// constraint.
    pub fn evaluate(&self, x: &[i64]) -> Option<Rational> {
        if x.len() != self.vars.len() {
            return None;
        }
        let in_bounds = self.vars.iter().zip(x).all(|(v, &x)| match v.kind {
            VarKind::Binary => x == 0 || x == 1,
            VarKind::Integer { upper } => (0..=upper as i64).contains(&x),
        });
        if !in_bounds {
            return None;
        }
        let dot = |terms: &[(usize, Rational)]| -> Rational {
            terms.iter().map(|(i, c)| c * int(x[*i])).sum()
        };
        let ok = self.constraints.iter().all(|c| {
            let lhs = dot(&c.terms);
            match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Ge => lhs >= c.rhs,
                Sense::Eq => lhs == c.rhs,
            }
        });
        ok.then(|| dot(&self.objective))
    }
}

/// The advice model of `g`.
pub fn build_ilp(g: &RestrictionsGraph) -> IlpModel {
    let n = g.agents().len();
    let m = g.resources().len();
    let k = g.k() as usize;
    let mut w_start = Vec::with_capacity(n + 1);
    let mut vars = Vec::new();
    for (i, a) in g.agents().iter().enumerate() {
        w_start.push(vars.len());
        for t in 1..=a.labels.len() {
            vars.push(IlpVar {
                name: format!("w_{}_{t}", i + 1),
                kind: VarKind::Binary,
            });
        }
    }
    w_start.push(vars.len());
    for i in 1..=n {
        for j in 1..=m {
            vars.push(IlpVar {
                name: format!("z_{i}_{j}"),
                kind: VarKind::Binary,
            });
        }
    }
    for i in 1..=n {
        for j in 1..=m {
            for r in 1..=k {
                vars.push(IlpVar {
                    name: format!("a_{i}_{j}_{r}"),
                    kind: VarKind::Binary,
                });
            }
        }
    }
    for i in 1..=n {
        vars.push(IlpVar {
            name: format!("eta_{i}"),
            kind: VarKind::Integer { upper: k as u32 },
        });
    }
    for i in 1..=n {
        vars.push(IlpVar {
            name: format!("s_{i}"),
            kind: VarKind::Binary,
        });
    }
    let mut model = IlpModel {
        vars,
        constraints: Vec::new(),
        objective: Vec::new(),
        n,
        m,
        k,
        w_start,
    };
    model.objective = (0..n).map(|i| (model.s(i), Rational::one())).collect();

    let one = Rational::one;
    let mut out = Vec::new();
    let mut push = |family, terms: Vec<(usize, Rational)>, sense, rhs: Rational| {
        if !terms.is_empty() {
            out.push(IlpConstraint {
                family,
                terms,
                sense,
                rhs,
            });
        }
    };
    let label_pos = |i: usize, l| {
        g.agents()[i]
            .labels
            .keys()
            .position(|x| x == l)
            .expect("edge labels belong to the agent")
    };

    for (i, a) in g.agents().iter().enumerate() {
        let terms = a
            .labels
            .values()
            .enumerate()
            .map(|(t, c)| (model.w(i, t), c.clone()))
            .collect();
        push(ConstraintFamily::Budget, terms, Sense::Le, a.budget.clone());
    }
    let labeled: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| !e.restrictions.is_empty())
        .collect();
    for e in &labeled {
        for l in &e.restrictions {
            let terms = alloc::vec![
                (model.z(e.agent, e.resource), one()),
                (model.w(e.agent, label_pos(e.agent, l)), -one())
            ];
            push(
                ConstraintFamily::EdgeNeedsLabel,
                terms,
                Sense::Le,
                Rational::zero(),
            );
        }
    }
    for e in &labeled {
        let mut terms = alloc::vec![(model.z(e.agent, e.resource), one())];
        terms.extend(
            e.restrictions
                .iter()
                .map(|l| (model.w(e.agent, label_pos(e.agent, l)), -one())),
        );
        push(
            ConstraintFamily::EdgeFromLabels,
            terms,
            Sense::Ge,
            int(1 - e.restrictions.len() as i64),
        );
    }
    for e in g.edges().iter().filter(|e| e.restrictions.is_empty()) {
        push(
            ConstraintFamily::FreeEdge,
            alloc::vec![(model.z(e.agent, e.resource), one())],
            Sense::Eq,
            one(),
        );
    }
    let present: BTreeSet<(usize, usize)> =
        g.edges().iter().map(|e| (e.agent, e.resource)).collect();
    for i in 0..n {
        for j in 0..m {
            if !present.contains(&(i, j)) {
                push(
                    ConstraintFamily::MissingEdge,
                    alloc::vec![(model.z(i, j), one())],
                    Sense::Eq,
                    Rational::zero(),
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..m {
            for r in 1..=k as u32 {
                let terms = alloc::vec![(model.a(i, j, r), one()), (model.z(i, j), -one())];
                push(
                    ConstraintFamily::AssignmentOnEdge,
                    terms,
                    Sense::Le,
                    Rational::zero(),
                );
            }
        }
    }
    for i in 0..n {
        let mut terms = alloc::vec![(model.eta(i), one())];
        for j in 0..m {
            terms.extend((1..=k as u32).map(|r| (model.a(i, j, r), -one())));
        }
        push(
            ConstraintFamily::RoundsServed,
            terms,
            Sense::Eq,
            Rational::zero(),
        );
    }
    for i in 0..n {
        for r in 1..=k as u32 {
            let terms = (0..m).map(|j| (model.a(i, j, r), one())).collect();
            push(ConstraintFamily::AgentPerRound, terms, Sense::Le, one());
        }
    }
    for j in 0..m {
        for r in 1..=k as u32 {
            let terms = (0..n).map(|i| (model.a(i, j, r), one())).collect();
            push(
                ConstraintFamily::ResourcePerRound,
                terms,
                Sense::Le,
                int(g.resources()[j].capacity.into()),
            );
        }
    }
    for (i, a) in g.agents().iter().enumerate() {
        for r in (1..=k as u32).filter(|r| !a.allowed_rounds.contains(r)) {
            for j in 0..m {
                push(
                    ConstraintFamily::RoundNotAllowed,
                    alloc::vec![(model.a(i, j, r), one())],
                    Sense::Eq,
                    Rational::zero(),
                );
            }
        }
    }
    let kk = int(k as i64);
    for (i, a) in g.agents().iter().enumerate() {
        let rho = int(a.rho.into());
        let terms = alloc::vec![(model.eta(i), one()), (model.s(i), -kk.clone())];
        push(
            ConstraintFamily::SatisfiedIfServed,
            terms,
            Sense::Le,
            &rho - one(),
        );
    }
    for (i, a) in g.agents().iter().enumerate() {
        let rho = int(a.rho.into());
        let terms = alloc::vec![(model.s(i), kk.clone()), (model.eta(i), -one())];
        push(
            ConstraintFamily::ServedIfSatisfied,
            terms,
            Sense::Le,
            &kk - rho,
        );
    }
    model.constraints = out;
    model
}

/// Multiplies a row by the lcm of its denominators.
pub(crate) fn integer_row(
    terms: &[(usize, Rational)],
    rhs: &Rational,
) -> (Vec<(usize, BigInt)>, BigInt) {
    let l = terms
        .iter()
        .map(|(_, c)| c.denom())
        .chain(core::iter::once(rhs.denom()))
        .fold(BigInt::one(), |acc, d| acc.lcm(d));
    let scale = |r: &Rational| (r * Rational::from_integer(l.clone())).to_integer();
    (
        terms.iter().map(|(i, c)| (*i, scale(c))).collect(),
        scale(rhs),
    )
}

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, vars: &[IlpVar], terms: &[(usize, BigInt)]) {
    for (pos, (i, c)) in terms.iter().enumerate() {
        if pos > 0 && pos % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        if c.is_negative() {
            out.push_str(" - ");
        } else if pos > 0 {
            out.push_str(" + ");
        } else {
            out.push(' ');
        }
        let mag = c.abs();
        if mag.is_one() {
            out.push_str(&vars[*i].name);
        } else {
            let _ = write!(out, "{mag} {}", vars[*i].name);
        }
    }
}

/// LP-format text of `m`. Rational coefficients are cleared row by row.
pub fn emit_lp(m: &IlpModel) -> String {
    let mut out = String::new();
    out.push_str("Maximize\n obj:");
    if m.objective.is_empty() {
        out.push_str(" 0");
    } else {
        let (terms, _) = integer_row(&m.objective, &Rational::zero());
        write_terms(&mut out, &m.vars, &terms);
    }
    out.push_str("\nSubject To\n");
    let mut counters = [0usize; ConstraintFamily::ALL.len()];
    for c in &m.constraints {
        let slot = ConstraintFamily::ALL
            .iter()
            .position(|f| *f == c.family)
            .expect("listed family");
        counters[slot] += 1;
        let (terms, rhs) = integer_row(&c.terms, &c.rhs);
        let _ = write!(out, " {}_{}:", c.family.tag(), counters[slot]);
        write_terms(&mut out, &m.vars, &terms);
        let _ = writeln!(out, " {} {rhs}", c.sense.symbol());
    }
    out.push_str("Bounds\n");
    for v in &m.vars {
        if let VarKind::Integer { upper } = v.kind {
            let _ = writeln!(out, " 0 <= {} <= {upper}", v.name);
        }
    }
    out.push_str("Binaries\n");
    for v in m.vars.iter().filter(|v| v.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("Generals\n");
    for v in m.vars.iter().filter(|v| v.kind != VarKind::Binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::{AgentSpec, EdgeSpec, ResourceSpec};
    use crate::rational::ratio;

    /// Counts variables and constraints by reading LP text back.
    fn recount(text: &str) -> (usize, usize, usize) {
        let mut section = "";
        let (mut rows, mut binaries, mut generals) = (0, 0, 0);
        for line in text.lines() {
            match line {
                "Maximize" | "Subject To" | "Bounds" | "Binaries" | "Generals" | "End" => {
                    section = line;
                    continue;
                }
                _ => {}
            }
            let first = line.split_whitespace().next().unwrap_or("");
            match section {
                "Subject To" if first.ends_with(':') => rows += 1,
                "Binaries" => binaries += 1,
                "Generals" => generals += 1,
                _ => {}
            }
        }
        (rows, binaries, generals)
    }

    #[test]
    fn variable_counts() {
        let g = fixtures::lab_example();
        let m = build_ilp(&g);
        let (n, r, k) = (g.agents().len(), g.resources().len(), g.k() as usize);
        let labels: usize = g.agents().iter().map(|a| a.labels.len()).sum();
        let named = |p: &str| m.vars.iter().filter(|v| v.name.starts_with(p)).count();
        assert_eq!(named("w_"), labels);
        assert_eq!(named("z_"), n * r);
        assert_eq!(named("a_"), n * r * k);
        assert_eq!(named("eta_"), n);
        assert_eq!(named("s_"), n);
        assert_eq!(m.vars.len(), labels + n * r * (1 + k) + 2 * n);
        assert_eq!(m.vars[m.z(3, 1)].name, "z_4_2");
        assert_eq!(m.vars[m.a(2, 0, 2)].name, "a_3_1_2");
        assert_eq!(m.vars[m.w(1, 0)].name, "w_2_1");
        assert_eq!(m.vars[m.s(0)].name, "s_1");
    }

    #[test]
    fn family_counts() {
        let g = fixtures::lab_example();
        let m = build_ilp(&g);
        use ConstraintFamily::*;
        // Three labeled edges with one label each, four free edges, one
        // missing pair (x4, y1), x3 and x4 each barred from one round.
        let expect = [
            (Budget, 3),
            (EdgeNeedsLabel, 3),
            (EdgeFromLabels, 3),
            (FreeEdge, 4),
            (MissingEdge, 1),
            (AssignmentOnEdge, 4 * 2 * 2),
            (RoundsServed, 4),
            (AgentPerRound, 4 * 2),
            (ResourcePerRound, 2 * 2),
            (RoundNotAllowed, 2 * 2),
            (SatisfiedIfServed, 4),
            (ServedIfSatisfied, 4),
        ];
        for (f, count) in expect {
            assert_eq!(m.family_count(f), count, "{f:?}");
        }
        let text = emit_lp(&m);
        let total: usize = expect.iter().map(|(_, c)| c).sum();
        assert_eq!(recount(&text), (total, m.vars.len() - 4, 4));
    }

    #[test]
    fn single_assignment_optimum_is_one() {
        let g = RestrictionsGraph::new(
            1,
            alloc::vec![AgentSpec::new("x", 1, [1])],
            alloc::vec![ResourceSpec::unit("y")],
            alloc::vec![EdgeSpec::free("x", "y")],
        )
        .unwrap();
        let m = build_ilp(&g);
        // w: none; z, a, eta, s.
        assert_eq!(m.vars.len(), 4);
        assert_eq!(m.evaluate(&[1, 1, 1, 1]), Some(int(1)));
        assert_eq!(m.evaluate(&[1, 0, 0, 1]), None);
        assert_eq!(m.evaluate(&[1, 0, 0, 0]), Some(int(0)));
        assert_eq!(m.evaluate(&[0, 0, 0, 0]), None);
    }

    #[test]
    fn empty_model() {
        let g = RestrictionsGraph::new(1, alloc::vec![], alloc::vec![], alloc::vec![]).unwrap();
        let text = emit_lp(&build_ilp(&g));
        assert_eq!(
            text,
            "Maximize\n obj: 0\nSubject To\nBounds\nBinaries\nGenerals\nEnd\n"
        );
    }

    #[test]
    fn fractional_costs_are_scaled() {
        let a = AgentSpec::new("x", 1, [1])
            .with_budget(ratio(3, 4))
            .with_label("p", ratio(1, 2))
            .with_label("q", ratio(1, 3));
        let g = RestrictionsGraph::new(
            1,
            alloc::vec![a],
            alloc::vec![ResourceSpec::unit("y")],
            alloc::vec![EdgeSpec::new("x", "y", ["p", "q"])],
        )
        .unwrap();
        let text = emit_lp(&build_ilp(&g));
        assert!(
            text.contains(" budget_1: 6 w_1_1 + 4 w_1_2 <= 9\n"),
            "{text}"
        );
        assert!(
            text.contains(" edge_all_1: z_1_1 - w_1_1 - w_1_2 >= -1\n"),
            "{text}"
        );
        assert!(text.contains(" sat_lower_1: eta_1 - s_1 <= 0\n"), "{text}");
    }

    #[test]
    fn long_rows_wrap() {
        let agents = (1..=10)
            .map(|i| AgentSpec::new(alloc::format!("x{i:02}"), 1, [1]))
            .collect();
        let edges = (1..=10)
            .map(|i| EdgeSpec::free(alloc::format!("x{i:02}"), "y"))
            .collect();
        let g = RestrictionsGraph::new(1, agents, alloc::vec![ResourceSpec::new("y", 3)], edges)
            .unwrap();
        let text = emit_lp(&build_ilp(&g));
        assert!(text.contains(" resource_round_1: a_1_1_1 + a_2_1_1"));
        assert!(text.contains("\n   + a_9_1_1 + a_10_1_1 <= 3\n"), "{text}");
        assert_eq!(recount(&text).0, build_ilp(&g).constraints.len());
    }

    #[test]
    fn deterministic_text() {
        let g = fixtures::lab_example();
        assert_eq!(emit_lp(&build_ilp(&g)), emit_lp(&build_ilp(&g)));
    }
}
