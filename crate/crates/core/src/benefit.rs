//! Per-agent benefit functions, stored as increment sequences.
//!
//! `delta[l - 1]` is the extra benefit of the `l`-th matched round and
//! `mu(l)` the running total. A profile is valid when totals start at 0 (P1),
//! increments are non-negative (P2), non-increasing (P3) and at most 1 (P4).

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::instance::CompatibilityGraph;
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BenefitProfile {
    delta: Vec<Rational>,
}

impl BenefitProfile {
    pub fn from_increments(delta: Vec<Rational>) -> Self {
        Self { delta }
    }

    pub fn increments(&self) -> &[Rational] {
        &self.delta
    }

    /// Number of increments, i.e. the agent's demand.
    pub fn rho(&self) -> usize {
        self.delta.len()
    }

    /// Increment of the `l`-th round, `1 <= l <= rho`.
    pub fn delta(&self, l: usize) -> &Rational {
        &self.delta[l - 1]
    }

    /// Total benefit of `l` rounds; rounds beyond `rho` add nothing.
    pub fn mu(&self, l: usize) -> Rational {
        self.delta
            .iter()
            .take(l)
            .fold(Rational::zero(), |acc, d| acc + d)
    }
}

/// Outcome of one property check; `first_violation` is a 1-based round index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

impl PropertyCheck {
    fn from_violation(first_violation: Option<usize>) -> Self {
        Self {
            holds: first_violation.is_none(),
            first_violation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidityReport {
    pub p1: PropertyCheck,
    pub p2: PropertyCheck,
    pub p3: PropertyCheck,
    pub p4: PropertyCheck,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.p1.holds && self.p2.holds && self.p3.holds && self.p4.holds
    }

    /// Name of the first failing property, if any.
    pub fn first_failure(&self) -> Option<&'static str> {
        [
            ("P1", self.p1),
            ("P2", self.p2),
            ("P3", self.p3),
            ("P4", self.p4),
        ]
        .into_iter()
        .find(|(_, c)| !c.holds)
        .map(|(name, _)| name)
    }
}

pub fn check_validity(p: &BenefitProfile) -> ValidityReport {
    let d = &p.delta;
    ValidityReport {
        // mu(0) is the empty sum.
        p1: PropertyCheck::from_violation(None),
        p2: PropertyCheck::from_violation(d.iter().position(Signed::is_negative).map(|i| i + 1)),
        p3: PropertyCheck::from_violation((1..d.len()).find(|&i| d[i] > d[i - 1]).map(|i| i + 1)),
        p4: PropertyCheck::from_violation(
            d.iter().position(|x| *x > Rational::one()).map(|i| i + 1),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BenefitError {
    #[error("rho {rho} exceeds the round count {k}")]
    RhoExceedsRounds { rho: u32, k: u32 },
    #[error("agent count and round count must be positive")]
    EmptyScale,
}

/// One benefit per matched round.
pub fn utilitarian(rho: u32) -> BenefitProfile {
    BenefitProfile {
        delta: (0..rho).map(|_| Rational::one()).collect(),
    }
}

/// Benefit only once all `rho` rounds are matched.
pub fn satisfied_agents(rho: u32) -> BenefitProfile {
    BenefitProfile {
        delta: (1..=rho)
            .map(|l| {
                if l == rho {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    }
}

/// Increments that make the max-min satisfaction ratio the dominant term of
/// total benefit.
///
/// Every satisfaction level `q` a round can start from is a fraction in
/// `F = {a/b : 1 <= a <= b <= k} ∪ {0}`. Levels are ranked from the largest
/// (rank 1) down to 0 (rank `|F|`), and the round taking an agent from level
/// `q` is worth `(nk)^rank(q) / (nk)^|F|`: each step down the ranking
/// multiplies the increment by `nk`, so one round for a worse-off agent
/// outweighs every round all other agents could get at higher levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawlsianScale {
    n: u32,
    k: u32,
    /// F in descending order; position + 1 is the rank.
    levels: Vec<Rational>,
}

impl RawlsianScale {
    pub fn new(n: u32, k: u32) -> Result<Self, BenefitError> {
        if n == 0 || k == 0 {
            return Err(BenefitError::EmptyScale);
        }
        Ok(Self {
            n,
            k,
            levels: fraction_levels(k).into_iter().rev().collect(),
        })
    }

    pub fn levels(&self) -> &[Rational] {
        &self.levels
    }

    /// 1-based descending rank of `q` in F.
    pub fn rank(&self, q: &Rational) -> Option<usize> {
        self.levels.iter().position(|x| x == q).map(|i| i + 1)
    }

    pub fn base(&self) -> u64 {
        self.n as u64 * self.k as u64
    }

    /// Weight of a round that starts from level `q`; `q` must lie in F.
    pub fn xi(&self, q: &Rational) -> Rational {
        let rank = self.rank(q).expect("level lies in F");
        let base = BigInt::from(self.base());
        Rational::new(
            num_traits::pow(base.clone(), rank),
            num_traits::pow(base, self.levels.len()),
        )
    }

    pub fn profile(&self, rho: u32) -> Result<BenefitProfile, BenefitError> {
        if rho > self.k {
            return Err(BenefitError::RhoExceedsRounds { rho, k: self.k });
        }
        let delta = (1..=rho)
            .map(|l| self.xi(&ratio(l as i64 - 1, rho as i64)))
            .collect();
        Ok(BenefitProfile { delta })
    }
}

/// `{a/b : 1 <= a <= b <= k} ∪ {0}` as reduced fractions, ascending.
pub fn fraction_levels(k: u32) -> Vec<Rational> {
    let mut set = BTreeSet::new();
    set.insert(Rational::zero());
    for b in 1..=k as i64 {
        for a in 1..=b {
            set.insert(ratio(a, b));
        }
    }
    set.into_iter().collect()
}

pub fn rawlsian(n: u32, k: u32, rho: u32) -> Result<BenefitProfile, BenefitError> {
    RawlsianScale::new(n, k)?.profile(rho)
}

/// Named families of per-agent profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Welfare {
    Utilitarian,
    Rawlsian,
}

/// One profile per agent of `g`, in agent order. For Rawlsian profiles `n` is
/// the number of agents with positive demand and `k` the round count.
pub fn profiles_for(g: &CompatibilityGraph, welfare: Welfare) -> Vec<BenefitProfile> {
    match welfare {
        Welfare::Utilitarian => g.agents().iter().map(|a| utilitarian(a.rho)).collect(),
        Welfare::Rawlsian => {
            let n = g.agents().iter().filter(|a| a.rho >= 1).count() as u32;
            let Ok(scale) = RawlsianScale::new(n.max(1), g.k()) else {
                unreachable!("k >= 1 on every compatibility graph")
            };
            g.agents()
                .iter()
                .map(|a| scale.profile(a.rho).expect("rho <= |K_i| <= k"))
                .collect()
        }
    }
}

/// `mu_i(gamma_i)` summed over agents.
pub fn total_benefit(
    profiles: &[BenefitProfile],
    gamma: impl IntoIterator<Item = u32>,
) -> Rational {
    profiles
        .iter()
        .zip(gamma)
        .fold(Rational::zero(), |acc, (p, g)| acc + p.mu(g as usize))
}
