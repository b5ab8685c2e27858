//! Instance generators: random synthetic graphs, attribute scenarios, tiny
//! random instances for testing, and hardness gadgets.

use alloc::string::String;

use crate::instance::InstanceError;

pub mod attribute;
pub mod reductions;
pub mod synthetic;
pub mod tiny;

pub use attribute::{gen_attribute_instance, AttributeKind, AttributeValue, Preference, Scenario};
pub use reductions::{reduce_from_set_cover, reduce_from_vertex_cover, Gadget};
pub use synthetic::{gen_synthetic, GenParams};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: usize, degree: usize },
    #[error("edge ({0}, {1}) is invalid")]
    BadEdge(usize, usize),
    #[error("element {0} is in no subset")]
    UncoveredElement(usize),
    #[error("scenario: {0}")]
    Scenario(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Draws `true` with probability `num / den` exactly.
pub(crate) fn bernoulli(rng: &mut impl rand::Rng, num: u64, den: u64) -> bool {
    rng.random_range(0..den) < num
}
