//! Simplicial subdivisions of the face `F^N`.
//!
//! [`KuhnTriangulation`] is the workhorse: uniform sup-norm mesh `1/k` and
//! constant-time pivoting. [`ExplicitTriangulation`] materializes vertex and
//! cell tables and supports barycentric subdivision.

mod explicit;
mod kuhn;

use std::fmt::Debug;
use std::hash::Hash;

pub use explicit::{ExplicitTriangulation, Scheme};
pub(crate) use kuhn::lift;
pub use kuhn::{cumulative_from_lattice, lattice_from_cumulative, KuhnCell, KuhnTriangulation, LatticePoint};

use crate::error::Result;
use crate::geometry::{sup_distance, truncated_metric, Point};

/// Default cap on cells enumerated or visited by a single operation.
pub const DEFAULT_CELL_CAP: u64 = 50_000_000;

/// Upper bound on the number of cells an operation may enumerate or visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceCap {
    pub max_cells: u64,
}

impl Default for ResourceCap {
    fn default() -> Self {
        ResourceCap {
            max_cells: DEFAULT_CELL_CAP,
        }
    }
}

/// Result of crossing a facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Neighbor<C> {
    Cell(C),
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshMetric {
    SupNorm,
    /// `d_{N+1}` on the `N + 1` coordinates of `F^N`.
    TruncatedProductMetric,
}

/// Common surface of the triangulation schemes.
pub trait Subdivision {
    type Vertex: Clone + Eq + Hash + Ord + Debug;

    fn dim(&self) -> usize;

    /// Calls `f` with the `dim + 1` vertices of every cell.
    fn for_each_cell(&self, cap: &ResourceCap, f: &mut dyn FnMut(&[Self::Vertex]) -> Result<()>) -> Result<()>;

    fn vertices(&self, cap: &ResourceCap) -> Result<Vec<Self::Vertex>>;

    fn point(&self, v: &Self::Vertex) -> Point;

    /// 1-based indices of the minimal face containing `v`.
    fn carrier(&self, v: &Self::Vertex) -> Vec<usize>;

    fn distance(&self, a: &Self::Vertex, b: &Self::Vertex, metric: MeshMetric) -> f64 {
        let (p, q) = (self.point(a), self.point(b));
        match metric {
            MeshMetric::SupNorm => sup_distance(&p, &q),
            MeshMetric::TruncatedProductMetric => truncated_metric(&p, &q, self.dim() + 1),
        }
    }
}

/// Largest cell diameter. Simplex diameters are attained at vertex pairs.
pub fn mesh_size<T: Subdivision + ?Sized>(t: &T, metric: MeshMetric, cap: &ResourceCap) -> Result<f64> {
    let mut mesh: f64 = 0.0;
    t.for_each_cell(cap, &mut |vs| {
        for (i, a) in vs.iter().enumerate() {
            for b in &vs[i + 1..] {
                mesh = mesh.max(t.distance(a, b, metric));
            }
        }
        Ok(())
    })?;
    Ok(mesh)
}
