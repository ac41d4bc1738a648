//! Approximate fixed points of continuous self-maps of the
//! infinite-dimensional simplex, found by path-following Sperner labellings
//! of Kuhn triangulations of its finite faces.
//!
//! The pipeline: [`map`] supplies the oracle `f`, [`labeling`] truncates it
//! to a face `F^N` and labels grid vertices, [`triangulation`] walks the
//! grid, and [`solver`] refines until the certified residual is below the
//! requested `epsilon`.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod labeling;
pub mod map;
pub mod serial;
pub mod solver;
pub mod triangulation;

pub use error::{Error, RefinementDiagnostics, Result};
