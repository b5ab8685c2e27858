//! Multi-round matching of agents to time-shared resources.
//!
//! Feasibility, total-benefit maximization (utilitarian and Rawlsian),
//! satisfied-agent maximization and budgeted advice generation over labeled
//! restrictions graphs, together with brute-force oracles and hardness-gadget
//! generators. All arithmetic on costs, budgets and benefits is exact.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod advice;
pub mod benefit;
pub mod fixtures;
pub mod gen;
pub mod instance;
pub mod matching;
pub mod maxsa;
pub mod maxtb;
pub mod mrm;
pub mod oracle;
pub mod rational;

pub use benefit::BenefitProfile;
pub use instance::{
    AgentId, AgentSpec, CompatibilityGraph, EdgeSpec, LabelId, MultiRoundSolution, ResourceId,
    ResourceSpec, RestrictionsGraph,
};
pub use rational::Rational;
