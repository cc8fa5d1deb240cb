//! Benchmark response functions.

pub mod analytical;
pub mod truss;

use thiserror::Error;

use crate::Scalar;

pub use analytical::{analytical_suite, AnalyticalModel};
pub use truss::{ten_bar, twenty_five_bar, TrussModel, TrussResponse};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("expected {expected} inputs, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("input {index} must be positive, got {value}")]
    NonPositive { index: usize, value: f64 },
    #[error("constrained stiffness matrix is singular (mechanism)")]
    Mechanism,
    #[error("invalid model description: {0}")]
    Invalid(String),
}

/// A deterministic map from physical input values to one or more responses.
pub trait Model<T: Scalar>: Sync {
    fn id(&self) -> String;
    fn input_count(&self) -> usize;
    fn response_names(&self) -> Vec<String>;
    fn evaluate(&self, x: &[T]) -> Result<Vec<T>, ModelError>;
}
