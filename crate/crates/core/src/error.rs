use std::fmt;

use crate::map::parser::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Best candidate seen by a solve that ran out of refinements.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinementDiagnostics {
    pub epsilon: f64,
    pub best_residual: f64,
    pub best_resolution: u64,
    pub refinements: u32,
}

impl fmt::Display for RefinementDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "best residual {:.6e} at resolution {} after {} refinements (epsilon {:.6e})",
            self.best_residual, self.best_resolution, self.refinements, self.epsilon
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The map oracle produced a value outside the simplex.
    #[error("map range violation: {0}")]
    MapRange(String),

    #[error("division by zero in component f{component} at x = {input}")]
    DivisionByZero { component: usize, input: String },

    #[error("non-finite value in component f{component} at x = {input}")]
    NonFinite { component: usize, input: String },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown builtin map `{0}`")]
    UnknownBuiltin(String),

    #[error("resource cap exceeded: {what} needs {requested} but the cap is {cap}")]
    ResourceCap {
        what: &'static str,
        requested: u128,
        cap: u64,
    },

    #[error("refinement budget exhausted: {0}")]
    RefinementExhausted(Box<RefinementDiagnostics>),

    #[error("internal error: {0}")]
    Internal(String),
}
