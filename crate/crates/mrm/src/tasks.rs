//! Solver runs shared by `solve`, `advise` and `bench`.

use std::fmt;
use std::str::FromStr;

use mrm_core::advice::{
    anneal_advice, exact_advice_within, AdviceError, AdvicePlan, AnnealConfig, DEFAULT_NODE_LIMIT,
};
use mrm_core::benefit::{profiles_for, Welfare};
use mrm_core::maxsa::{solve_maxsa_exact, solve_maxsa_heuristic, MaxsaError, DEFAULT_BUDGET};
use mrm_core::maxtb::solve_maxtb;
use mrm_core::mrm::solve_mrm;
use mrm_core::rational::to_pq;
use mrm_core::RestrictionsGraph;

use crate::files::{solution_doc, SolutionDoc, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Objective {
    Mrm,
    Utilitarian,
    Rawlsian,
    MaxsaExact,
    MaxsaHeuristic,
}

impl Objective {
    pub const ALL: [Objective; 5] = [
        Objective::Mrm,
        Objective::Utilitarian,
        Objective::Rawlsian,
        Objective::MaxsaExact,
        Objective::MaxsaHeuristic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::Mrm => "mrm",
            Objective::Utilitarian => "maxtb:utilitarian",
            Objective::Rawlsian => "maxtb:rawlsian",
            Objective::MaxsaExact => "maxsa:exact",
            Objective::MaxsaHeuristic => "maxsa:heuristic",
        }
    }

    pub fn solver(self) -> &'static str {
        match self {
            Objective::Mrm => "mrm-reduction",
            Objective::Utilitarian | Objective::Rawlsian => "maxtb-reduction",
            Objective::MaxsaExact => "maxsa-exact",
            Objective::MaxsaHeuristic => "maxsa-heuristic",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Objective::ALL.iter().map(|o| o.name()).collect();
                format!(
                    "unknown objective {s:?}; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

/// Overrides of the library's search limits, from `MRM_SEARCH_CAP`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    pub cap: Option<u64>,
}

impl Limits {
    pub fn checks(self) -> u64 {
        self.cap.unwrap_or(DEFAULT_BUDGET)
    }

    pub fn plans(self) -> u64 {
        self.cap.unwrap_or(DEFAULT_NODE_LIMIT)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    /// A search stopped at its limit.
    #[error("{0}")]
    Limit(String),
    /// Parameters the run cannot use.
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Failed(String),
}

impl RunError {
    /// Same kind of error with `context` in front of the message.
    pub fn context(self, context: &str) -> Self {
        match self {
            RunError::Limit(m) => RunError::Limit(format!("{context}: {m}")),
            RunError::Invalid(m) => RunError::Invalid(format!("{context}: {m}")),
            RunError::Failed(m) => RunError::Failed(format!("{context}: {m}")),
        }
    }
}

impl From<MaxsaError> for RunError {
    fn from(e: MaxsaError) -> Self {
        match e {
            MaxsaError::BudgetExceeded { .. } => RunError::Limit(e.to_string()),
            MaxsaError::Maxtb(_) => RunError::Failed(e.to_string()),
        }
    }
}

impl From<AdviceError> for RunError {
    fn from(e: AdviceError) -> Self {
        match e {
            AdviceError::BudgetExceeded { .. } | AdviceError::LabelCap { .. } => {
                RunError::Limit(e.to_string())
            }
            AdviceError::Maxsa(inner) => inner.into(),
        }
    }
}

/// A solve: the solution document (none if infeasible) and the value for
/// result tables.
#[derive(Debug, Clone)]
pub struct Solved {
    pub doc: Option<SolutionDoc>,
    pub value: String,
}

/// Value columns: 1/0 for feasibility, the total benefit for utilitarian,
/// the least satisfaction ratio for Rawlsian, and satisfied counts
/// otherwise.
pub fn solve(
    g: &RestrictionsGraph,
    objective: Objective,
    limits: Limits,
) -> Result<Solved, RunError> {
    let c = g.compatibility();
    let name = objective.name();
    match objective {
        Objective::Mrm => Ok(match solve_mrm(&c) {
            Some(s) => Solved {
                doc: Some(solution_doc(name, &s, &c, &Summary::default())),
                value: "1".into(),
            },
            None => Solved {
                doc: None,
                value: "0".into(),
            },
        }),
        Objective::Utilitarian | Objective::Rawlsian => {
            let welfare = if objective == Objective::Utilitarian {
                Welfare::Utilitarian
            } else {
                Welfare::Rawlsian
            };
            let profiles = profiles_for(&c, welfare);
            let out = solve_maxtb(&c, &profiles).map_err(|e| RunError::Failed(e.to_string()))?;
            let doc = solution_doc(
                name,
                &out.solution,
                &c,
                &Summary {
                    profiles: Some(profiles),
                    exact: None,
                },
            );
            let value = match welfare {
                Welfare::Utilitarian => to_pq(&out.total_benefit),
                Welfare::Rawlsian => to_pq(&doc.min_ratio.0),
            };
            Ok(Solved {
                doc: Some(doc),
                value,
            })
        }
        Objective::MaxsaExact | Objective::MaxsaHeuristic => {
            let r = if objective == Objective::MaxsaExact {
                solve_maxsa_exact(&c, limits.checks())?
            } else {
                solve_maxsa_heuristic(&c)?
            };
            let doc = solution_doc(
                name,
                &r.solution,
                &c,
                &Summary {
                    profiles: None,
                    exact: Some(r.exact),
                },
            );
            Ok(Solved {
                doc: Some(doc),
                value: r.count().to_string(),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdviceRun {
    Anneal(Box<AnnealConfig>),
    Exact,
}

impl AdviceRun {
    pub fn mode(&self) -> &'static str {
        match self {
            AdviceRun::Anneal(_) => "anneal",
            AdviceRun::Exact => "exact",
        }
    }
}

pub fn advise(
    g: &RestrictionsGraph,
    run: &AdviceRun,
    limits: Limits,
) -> Result<AdvicePlan, RunError> {
    Ok(match run {
        AdviceRun::Anneal(cfg) => anneal_advice(g, cfg)?,
        AdviceRun::Exact => exact_advice_within(g, limits.plans(), limits.checks())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mrm_core::fixtures;

    #[test]
    fn objective_names_round_trip() {
        for o in Objective::ALL {
            assert_eq!(o.name().parse::<Objective>(), Ok(o));
        }
        assert!("maxtb".parse::<Objective>().is_err());
    }

    #[test]
    fn values_per_objective() {
        let g = fixtures::lab_example();
        let value = |o| solve(&g, o, Limits::default()).unwrap().value;
        assert_eq!(value(Objective::MaxsaExact), "3");
        let exact = advise(&g, &AdviceRun::Exact, Limits::default()).unwrap();
        assert_eq!(exact.satisfied, 4);
    }

    #[test]
    fn tiny_cap_is_a_limit_error() {
        let g = fixtures::lab_example();
        let err = advise(&g, &AdviceRun::Exact, Limits { cap: Some(1) }).unwrap_err();
        assert!(matches!(err, RunError::Limit(_)));
    }
}
