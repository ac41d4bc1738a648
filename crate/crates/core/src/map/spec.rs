use std::fmt;

use super::expr::{EvalFault, Expr};
use super::project_to_simplex;
use crate::error::{Error, Result};
use crate::geometry::{Point, TOL_MEMBERSHIP};

/// Components past the explicit list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailRule {
    Zeros,
    /// `f_i = x_{i-j+1}` for every `i >= j` not given explicitly.
    ShiftFrom(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PostStep {
    None,
    ProjectToSimplex,
}

/// A parsed map definition.
#[derive(Clone, Debug, PartialEq)]
pub struct MapSpec {
    components: Vec<Expr>,
    tail: TailRule,
    post: PostStep,
}

impl MapSpec {
    pub fn new(components: Vec<Expr>, tail: TailRule, post: PostStep) -> Self {
        MapSpec { components, tail, post }
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    pub fn post(&self) -> PostStep {
        self.post
    }

    /// Largest index that can carry a nonzero output, `None` if unbounded.
    pub fn support_bound(&self) -> Option<usize> {
        match self.tail {
            TailRule::Zeros => Some(self.components.len()),
            TailRule::ShiftFrom(_) => None,
        }
    }

    /// Raw component values before range checks, as a dense vector.
    fn raw(&self, x: &Point) -> Result<Vec<f64>> {
        let m = self.components.len();
        let len = match self.tail {
            TailRule::Zeros => m,
            TailRule::ShiftFrom(j) => m.max(x.max_index() + j - 1),
        };
        let mut out = vec![0.0; len];
        let var = |i: usize| x.get(i);
        for (idx, e) in self.components.iter().enumerate() {
            out[idx] = e.eval(&var).map_err(|fault| {
                let (component, input) = (idx + 1, x.to_string());
                match fault {
                    EvalFault::DivisionByZero => Error::DivisionByZero { component, input },
                    EvalFault::NonFinite => Error::NonFinite { component, input },
                }
            })?;
        }
        if let TailRule::ShiftFrom(j) = self.tail {
            for i in j.max(m + 1)..=len {
                out[i - 1] = x.get(i + 1 - j);
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, x: &Point) -> Result<Point> {
        let raw = self.raw(x)?;
        match self.post {
            PostStep::ProjectToSimplex => Ok(project_to_simplex(&raw)),
            PostStep::None => checked_point(&raw, x),
        }
    }
}

/// Accepts raw output that lies in the simplex up to `TOL_MEMBERSHIP`.
pub(crate) fn checked_point(raw: &[f64], input: &Point) -> Result<Point> {
    let sum: f64 = raw.iter().sum();
    let bad = raw
        .iter()
        .position(|&v| !(-TOL_MEMBERSHIP..=1.0 + TOL_MEMBERSHIP).contains(&v));
    if let Some(i) = bad {
        return Err(Error::MapRange(format!(
            "f{} = {} outside [0, 1] at x = {input}",
            i + 1,
            raw[i]
        )));
    }
    if sum > 1.0 + TOL_MEMBERSHIP {
        return Err(Error::MapRange(format!("components sum to {sum} > 1 at x = {input}")));
    }
    Point::from_dense(raw)
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.components.iter().enumerate() {
            writeln!(f, "f{} = {e}", i + 1)?;
        }
        match self.tail {
            TailRule::Zeros => writeln!(f, "tail zeros")?,
            TailRule::ShiftFrom(j) => writeln!(f, "tail shift from {j}")?,
        }
        if self.post == PostStep::ProjectToSimplex {
            writeln!(f, "post project")?;
        }
        Ok(())
    }
}
