//! Labeled-tree constructions: pendant-edge induction, the caterpillar
//! pipelines built on it, and the four-copies composition.

mod caterpillars;
mod copies;
mod fixtures;
mod pendants;

use thiserror::Error;

use crate::pairing::PairingError;
use crate::trees::TreeError;

pub use caterpillars::{
    label_large_caterpillar, label_small_diameter, label_small_diameter_with, small_diameter_base,
    SmallDiameterRun, MAX_SMALL_DIAMETER,
};
pub use copies::{
    build_w_sequence, four_copies, k_one_three, solve_w_prefixes, suffix_index, PrefixMap,
    WSequence,
};
pub use fixtures::Fixtures;
pub use pendants::{add_pendants, PendantPlan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("plan adds {found} pendants, expected {expected}")]
    PlanSizeMismatch { expected: usize, found: usize },
    #[error("anchor labels with their counts do not sum to zero")]
    TargetSumNonzero,
    #[error("anchor {0} is not a vertex of the base tree")]
    UnknownAnchor(usize),
    #[error("invalid plan: {0}")]
    BadPlan(String),
    #[error("base labeling is not set-sequential")]
    BaseInvalid,
    #[error("pairing failed: {0}")]
    Pairing(#[from] PairingError),
    #[error("diameter {0} is above the supported bound")]
    OutOfRange(usize),
    #[error("caterpillar has an even-degree vertex")]
    NotOddDegree,
    #[error("vertex count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("{vertices} vertices, at least {needed} required for this diameter")]
    TooFewVertices { vertices: usize, needed: usize },
    #[error("no base caterpillar fits {0}")]
    NoAlignment(String),
    #[error("center path span grew to dimension {dim} (base {bound}) at step {step}")]
    SpanExceeded {
        step: usize,
        dim: usize,
        bound: usize,
    },
    #[error("vertex {0} is not a leaf")]
    NotLeaf(usize),
    #[error("tree needs at least 3 vertices")]
    TooSmall,
    #[error("u and v must be distinct")]
    SameVertex,
    #[error("k must be odd and at least 5, got {0}")]
    BadK(usize),
    #[error("path labels break the chain relation at {0}")]
    InvalidPath(usize),
    #[error("bad prefixes: {0}")]
    BadPrefixes(String),
    #[error("no prefix assignment for k = {0}")]
    Unsolvable(usize),
    #[error("missing fixture {0}")]
    MissingFixture(String),
    #[error("bad fixture {spec}: {reason}")]
    BadFixture { spec: String, reason: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

impl ConstructError {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructError::PlanSizeMismatch { .. } => "PlanSizeMismatch",
            ConstructError::TargetSumNonzero => "TargetSumNonzero",
            ConstructError::UnknownAnchor(_) => "UnknownAnchor",
            ConstructError::BadPlan(_) => "BadPlan",
            ConstructError::BaseInvalid => "BaseInvalid",
            ConstructError::Pairing(PairingError::NotCovered(_)) => "PairingNotCovered",
            ConstructError::Pairing(e) => e.name(),
            ConstructError::OutOfRange(_) => "OutOfRange",
            ConstructError::NotOddDegree => "NotOddDegree",
            ConstructError::NotPowerOfTwo(_) => "NotPowerOfTwo",
            ConstructError::TooFewVertices { .. } => "TooFewVertices",
            ConstructError::NoAlignment(_) => "NoAlignment",
            ConstructError::SpanExceeded { .. } => "SpanExceeded",
            ConstructError::NotLeaf(_) => "NotLeaf",
            ConstructError::TooSmall => "TooSmall",
            ConstructError::SameVertex => "SameVertex",
            ConstructError::BadK(_) => "BadK",
            ConstructError::InvalidPath(_) => "InvalidPath",
            ConstructError::BadPrefixes(_) => "BadPrefixes",
            ConstructError::Unsolvable(_) => "Unsolvable",
            ConstructError::MissingFixture(_) => "MissingFixture",
            ConstructError::BadFixture { .. } => "BadFixture",
            ConstructError::Tree(e) => e.name(),
        }
    }
}
