//! Exact interval bounds for sequential topological complexity invariants
//! of maps, combining a mod-2 cohomology engine (nilpotence-of-kernel lower
//! bounds) with a fixpoint propagation engine over an inequality rule set.

pub mod catalog;
pub mod engine;
pub mod f2;
pub mod hom;
pub mod nil;
pub mod problem;
pub mod report;
pub mod reproduce;
pub mod ring;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("elements belong to different rings")]
    RingMismatch,

    #[error("invalid ring map: {0}")]
    InvalidMap(String),

    #[error("oracle guard exceeded: source dimension {dim} > {guard}")]
    OracleGuard { dim: usize, guard: usize },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("unknown quantity: {0}")]
    UnknownQuantity(String),

    #[error("contradiction: {0}")]
    Contradiction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("invalid quantity: {0}")]
    InvalidQuantity(String),
}
