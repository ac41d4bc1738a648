//! Map oracles: self-maps of the infinite-dimensional simplex given either by
//! a builtin name or by a map definition file.

mod builtin;
mod expr;
pub mod parser;
mod spec;

use std::fmt::Debug;
use std::sync::Arc;

pub use builtin::{builtin, builtin_names, Builtin, BUILTIN_SUITE};
pub use expr::{BinOp, EvalFault, Expr};
pub use parser::{parse_map, ParseError, ParseErrorKind};
pub use spec::{MapSpec, PostStep, TailRule};

use crate::error::Result;
use crate::geometry::{Point, TOL_MEMBERSHIP};

/// A map `f` from the simplex to itself, queried pointwise.
///
/// Implementations must be pure: the same input always produces the same
/// output.
pub trait MapOracle: Send + Sync + Debug {
    fn evaluate(&self, x: &Point) -> Result<Point>;

    /// Component `f_i(x)`, 1-based.
    fn component(&self, x: &Point, i: usize) -> Result<f64> {
        Ok(self.evaluate(x)?.get(i))
    }

    /// Largest index whose component may be nonzero; `None` if unbounded.
    fn support_bound(&self) -> Option<usize>;

    fn describe(&self) -> String;
}

pub type SharedMap = Arc<dyn MapOracle>;

/// Oracle backed by a parsed map definition.
#[derive(Clone, Debug)]
pub struct ParsedMap {
    spec: MapSpec,
    name: String,
}

impl ParsedMap {
    pub fn new(spec: MapSpec, name: impl Into<String>) -> Self {
        ParsedMap {
            spec,
            name: name.into(),
        }
    }

    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }
}

impl MapOracle for ParsedMap {
    fn evaluate(&self, x: &Point) -> Result<Point> {
        self.spec.evaluate(x)
    }

    fn support_bound(&self) -> Option<usize> {
        self.spec.support_bound()
    }

    fn describe(&self) -> String {
        self.name.clone()
    }
}

/// Parses a map definition into a shareable oracle.
pub fn map_from_source(source: &str, name: impl Into<String>) -> Result<SharedMap> {
    Ok(Arc::new(ParsedMap::new(parse_map(source)?, name)))
}

/// Clamps each entry to `[0, 1]`, then rescales by the sum if it exceeds 1.
///
/// Points already in the simplex come back unchanged. Non-finite entries are
/// treated as 0.
pub fn project_to_simplex(raw: &[f64]) -> Point {
    let clamped: Vec<f64> = raw
        .iter()
        .map(|&v| if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 })
        .collect();
    let sum: f64 = clamped.iter().sum();
    let scaled: Vec<f64> = if sum > 1.0 + TOL_MEMBERSHIP {
        clamped.iter().map(|v| v / sum).collect()
    } else {
        clamped
    };
    Point::from_dense(&scaled).expect("projected coordinates lie in the simplex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{is_member, Region};

    #[test]
    fn projection_examples() {
        assert_eq!(project_to_simplex(&[2.0, 0.0, 0.0]), Point::basis(1));
        let third = project_to_simplex(&[0.5, 0.5, 0.5]);
        for i in 1..=3 {
            assert!((third.get(i) - 1.0 / 3.0).abs() < 1e-15);
        }
        let x = Point::from_dense(&[0.2, 0.0, 0.7]).unwrap();
        assert_eq!(project_to_simplex(&x.to_dense(3)), x);
        assert_eq!(project_to_simplex(&[-1.0, f64::NAN]), Point::zero());
    }

    #[test]
    fn projection_is_member_and_idempotent() {
        let p = project_to_simplex(&[0.9, 0.8, -0.3, 1.7]);
        assert!(is_member(&p, Region::SimplexClosure));
        assert_eq!(project_to_simplex(&p.to_dense(4)), p);
    }
}
