//! Freudenthal/Kuhn subdivision of the face `F^N` at grid resolution `k`.
//!
//! Vertices are lattice points `a` in `Z^{N+1}` with nonnegative entries
//! summing to `k`; the corresponding simplex point is `a / k`. Cells are kept
//! in permutation form over cumulative coordinates `y_j = a_1 + ... + a_j`
//! (`j = 1..=N`), where the face becomes the orthoscheme
//! `0 <= y_1 <= ... <= y_N <= k`. A cell is a base point `b` plus a
//! permutation `pi`; its vertices are `b, b + e_pi(1), b + e_pi(1) + e_pi(2), ...`.

use std::fmt;

use serde::Serialize;

use super::{MeshMetric, Neighbor, ResourceCap, Subdivision};
use crate::error::{Error, Result};
use crate::geometry::{metric_term, Point};

/// Integer barycentric coordinates of a grid vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<u64>);

impl LatticePoint {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    /// Appends zero coordinates up to length `len`.
    pub fn padded(&self, len: usize) -> LatticePoint {
        let mut c = self.0.clone();
        c.resize(len.max(c.len()), 0);
        LatticePoint(c)
    }

    /// 1-based indices of the nonzero coordinates.
    pub fn carrier(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn to_point(&self, resolution: u64) -> Point {
        let k = resolution as f64;
        Point::new(self.0.iter().enumerate().map(|(i, &a)| (i + 1, a as f64 / k)))
            .expect("lattice points lie on the simplex")
    }

    pub fn to_dense(&self, resolution: u64) -> Vec<f64> {
        let k = resolution as f64;
        self.0.iter().map(|&a| a as f64 / k).collect()
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A cell in permutation form. `base` holds cumulative coordinates and
/// `perm` the 0-based order in which they are incremented.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KuhnCell {
    pub base: Vec<i64>,
    pub perm: Vec<usize>,
}

impl KuhnCell {
    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Cumulative coordinates of vertex `pos` (0..=dim).
    pub fn cumulative_vertex(&self, pos: usize) -> Vec<i64> {
        let mut y = self.base.clone();
        for &j in &self.perm[..pos] {
            y[j] += 1;
        }
        y
    }

    /// All `dim + 1` vertices in cumulative coordinates.
    pub fn cumulative_vertices(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.dim() + 1);
        let mut y = self.base.clone();
        out.push(y.clone());
        for &j in &self.perm {
            y[j] += 1;
            out.push(y.clone());
        }
        out
    }
}

/// Converts cumulative coordinates to the lattice point `a` (length `dim + 1`).
pub fn lattice_from_cumulative(y: &[i64], resolution: u64) -> LatticePoint {
    let k = resolution as i64;
    let mut a = Vec::with_capacity(y.len() + 1);
    let mut prev = 0;
    for &yj in y {
        a.push((yj - prev) as u64);
        prev = yj;
    }
    a.push((k - prev) as u64);
    LatticePoint(a)
}

pub fn cumulative_from_lattice(a: &LatticePoint) -> Vec<i64> {
    let c = a.coords();
    let mut y = Vec::with_capacity(c.len().saturating_sub(1));
    let mut run = 0i64;
    for &ai in &c[..c.len() - 1] {
        run += ai as i64;
        y.push(run);
    }
    y
}

fn in_region(y: &[i64], resolution: u64) -> bool {
    let mut prev = 0i64;
    for &yj in y {
        if yj < prev {
            return false;
        }
        prev = yj;
    }
    prev <= resolution as i64
}

/// Kuhn triangulation of `F^dim`. Construction is lazy: nothing is
/// enumerated until asked for, so very fine resolutions are cheap to hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KuhnTriangulation {
    dim: usize,
    resolution: u64,
}

impl KuhnTriangulation {
    pub fn new(dim: usize, resolution: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("triangulation dimension must be >= 1".into()));
        }
        if resolution == 0 {
            return Err(Error::InvalidParameter("grid resolution must be >= 1".into()));
        }
        if resolution > (i64::MAX as u64) / 4 {
            return Err(Error::InvalidParameter(format!(
                "grid resolution {resolution} too large"
            )));
        }
        Ok(KuhnTriangulation { dim, resolution })
    }

    /// Same grid restricted to a lower- or equal-dimensional face. Used by
    /// the path follower, which climbs through `F^1, F^2, ...`.
    pub(crate) fn face(dim: usize, resolution: u64) -> Self {
        KuhnTriangulation { dim, resolution }
    }

    pub fn resolution(&self) -> u64 {
        self.resolution
    }

    /// `k^N`, or `None` on overflow.
    pub fn cell_count(&self) -> Option<u128> {
        (self.resolution as u128).checked_pow(self.dim as u32)
    }

    /// Number of lattice points of the dilated simplex, `C(k + N, N)`.
    pub fn vertex_count(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for i in 1..=self.dim as u128 {
            acc = acc.checked_mul(self.resolution as u128 + i)? / i;
        }
        Some(acc)
    }

    fn check_cap(&self, cap: &ResourceCap) -> Result<()> {
        let cells = self.cell_count().unwrap_or(u128::MAX);
        let verts = self.vertex_count().unwrap_or(u128::MAX);
        let need = cells.max(verts);
        if need > cap.max_cells as u128 {
            return Err(Error::ResourceCap {
                what: "triangulation enumeration",
                requested: need,
                cap: cap.max_cells,
            });
        }
        Ok(())
    }

    pub fn contains(&self, cell: &KuhnCell) -> bool {
        cell.dim() == self.dim
            && cell.base.len() == self.dim
            && cell.cumulative_vertices().iter().all(|y| in_region(y, self.resolution))
    }

    pub fn vertices_of(&self, cell: &KuhnCell) -> Vec<LatticePoint> {
        cell.cumulative_vertices()
            .iter()
            .map(|y| lattice_from_cumulative(y, self.resolution))
            .collect()
    }

    pub fn vertex_at(&self, cell: &KuhnCell, pos: usize) -> LatticePoint {
        lattice_from_cumulative(&cell.cumulative_vertex(pos), self.resolution)
    }

    /// The cell at the `e_1` corner: base `(k-1, ..., k-1)`, coordinates
    /// raised from last to first. Its vertex of largest position is `e_1`.
    pub fn corner_cell(&self) -> KuhnCell {
        let k = self.resolution as i64;
        KuhnCell {
            base: vec![k - 1; self.dim],
            perm: (0..self.dim).rev().collect(),
        }
    }

    /// Replaces the vertex at position `pos` by reflection; returns the
    /// neighbour across the opposite facet, and the position the new vertex
    /// occupies in it.
    pub fn pivot(&self, cell: &KuhnCell, pos: usize) -> Result<(Neighbor<KuhnCell>, usize)> {
        let m = cell.dim();
        if pos > m {
            return Err(Error::Precondition(format!(
                "vertex position {pos} outside cell of dimension {m}"
            )));
        }
        if m == 0 {
            return Ok((Neighbor::Boundary, 0));
        }
        let mut next = cell.clone();
        let new_pos = if pos == 0 {
            let j = next.perm[0];
            next.base[j] += 1;
            next.perm.rotate_left(1);
            m
        } else if pos == m {
            let j = next.perm[m - 1];
            next.base[j] -= 1;
            next.perm.rotate_right(1);
            0
        } else {
            next.perm.swap(pos - 1, pos);
            pos
        };
        if in_region(&next.cumulative_vertex(new_pos), self.resolution) {
            Ok((Neighbor::Cell(next), new_pos))
        } else {
            Ok((Neighbor::Boundary, new_pos))
        }
    }

    /// The cell sharing the facet of `cell` opposite `vertex`, or
    /// [`Neighbor::Boundary`].
    pub fn facet_neighbor(&self, cell: &KuhnCell, vertex: &LatticePoint) -> Result<Neighbor<KuhnCell>> {
        let pos = self
            .vertices_of(cell)
            .iter()
            .position(|v| v == vertex)
            .ok_or_else(|| Error::Precondition(format!("vertex {vertex} is not in the cell")))?;
        Ok(self.pivot(cell, pos)?.0)
    }

    /// Recovers the cell with the given vertex set, in any order. Returns
    /// `None` if the points do not span a cell of this triangulation.
    pub fn cell_from_vertices(&self, vertices: &[LatticePoint]) -> Option<KuhnCell> {
        if vertices.len() != self.dim + 1 || vertices.iter().any(|v| v.coords().len() != self.dim + 1) {
            return None;
        }
        let mut ys: Vec<Vec<i64>> = vertices.iter().map(cumulative_from_lattice).collect();
        ys.sort_by_key(|y| y.iter().sum::<i64>());
        let mut perm = Vec::with_capacity(self.dim);
        for w in ys.windows(2) {
            let diff: Vec<i64> = w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect();
            let j = diff.iter().position(|&d| d == 1)?;
            if diff.iter().enumerate().any(|(i, &d)| d != (i == j) as i64) {
                return None;
            }
            perm.push(j);
        }
        let cell = KuhnCell {
            base: ys[0].clone(),
            perm,
        };
        self.contains(&cell).then_some(cell)
    }

    /// Visits every cell in lexicographic (base, permutation) order.
    pub fn for_each_kuhn_cell(&self, cap: &ResourceCap, mut f: impl FnMut(&KuhnCell) -> Result<()>) -> Result<()> {
        self.check_cap(cap)?;
        let k = self.resolution as i64;
        let n = self.dim;
        let mut base = vec![0i64; n];
        loop {
            // `base` is nondecreasing with last entry <= k - 1.
            let mut perm = Vec::with_capacity(n);
            let mut used = vec![false; n];
            self.valid_perms(&base, &mut perm, &mut used, &mut f)?;

            // next nondecreasing sequence in lex order
            let mut j = n;
            loop {
                if j == 0 {
                    return Ok(());
                }
                j -= 1;
                if base[j] < k - 1 {
                    base[j] += 1;
                    let v = base[j];
                    for b in &mut base[j + 1..] {
                        *b = v;
                    }
                    break;
                }
            }
        }
    }

    // Backtracking over increment orders; when `b_j == b_{j+1}`, coordinate
    // `j + 1` must be incremented before `j` to keep the chain monotone.
    fn valid_perms(
        &self,
        base: &[i64],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        f: &mut impl FnMut(&KuhnCell) -> Result<()>,
    ) -> Result<()> {
        let n = base.len();
        if perm.len() == n {
            return f(&KuhnCell {
                base: base.to_vec(),
                perm: perm.clone(),
            });
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            if j + 1 < n && base[j] == base[j + 1] && !used[j + 1] {
                continue;
            }
            used[j] = true;
            perm.push(j);
            self.valid_perms(base, perm, used, f)?;
            perm.pop();
            used[j] = false;
        }
        Ok(())
    }

    pub fn cells(&self, cap: &ResourceCap) -> Result<Vec<KuhnCell>> {
        let mut out = Vec::new();
        self.for_each_kuhn_cell(cap, |c| {
            out.push(c.clone());
            Ok(())
        })?;
        Ok(out)
    }

    /// Exact product-metric mesh `max d_{N+1}` over all cells.
    ///
    /// Two vertices of a cell differ by `+-1/k` exactly on the boundary
    /// positions of an increment block, and for `k >= N` every block occurs,
    /// so the maximum has the closed form `c_N / (k + 1)` with
    /// `c_N = 1 - 2^-(N+1)` for odd `N` and `1 - 2^-N` for even `N`. Smaller
    /// grids are enumerated.
    pub fn product_mesh(&self, cap: &ResourceCap) -> Result<f64> {
        let n = self.dim;
        if self.resolution as usize >= n {
            let c = if n % 2 == 1 {
                1.0 - 0.5f64.powi(n as i32 + 1)
            } else {
                1.0 - 0.5f64.powi(n as i32)
            };
            Ok(c / (self.resolution as f64 + 1.0))
        } else {
            super::mesh_size(self, MeshMetric::TruncatedProductMetric, cap)
        }
    }
}

impl Subdivision for KuhnTriangulation {
    type Vertex = LatticePoint;

    fn dim(&self) -> usize {
        self.dim
    }

    fn for_each_cell(&self, cap: &ResourceCap, f: &mut dyn FnMut(&[LatticePoint]) -> Result<()>) -> Result<()> {
        self.for_each_kuhn_cell(cap, |c| f(&self.vertices_of(c)))
    }

    fn vertices(&self, cap: &ResourceCap) -> Result<Vec<LatticePoint>> {
        self.check_cap(cap)?;
        let mut out = Vec::new();
        let mut cur = vec![0u64; self.dim + 1];
        compositions(self.resolution, 0, &mut cur, &mut out);
        Ok(out)
    }

    fn point(&self, v: &LatticePoint) -> Point {
        v.to_point(self.resolution)
    }

    fn carrier(&self, v: &LatticePoint) -> Vec<usize> {
        v.carrier()
    }

    fn distance(&self, a: &LatticePoint, b: &LatticePoint, metric: MeshMetric) -> f64 {
        let k = self.resolution as f64;
        let diffs = a.coords().iter().zip(b.coords()).map(|(&u, &v)| u.abs_diff(v));
        match metric {
            MeshMetric::SupNorm => diffs.max().unwrap_or(0) as f64 / k,
            MeshMetric::TruncatedProductMetric => {
                diffs.enumerate().map(|(i, d)| metric_term(i + 1, d as f64 / k)).sum()
            }
        }
    }
}

// Lexicographic enumeration of nonnegative integer vectors summing to `rest`.
fn compositions(rest: u64, idx: usize, cur: &mut Vec<u64>, out: &mut Vec<LatticePoint>) {
    if idx + 1 == cur.len() {
        cur[idx] = rest;
        out.push(LatticePoint(cur.clone()));
        return;
    }
    for a in 0..=rest {
        cur[idx] = a;
        compositions(rest - a, idx + 1, cur, out);
    }
    cur[idx] = 0;
}

/// Embeds a cell of `F^m` as a facet-adjacent cell of `F^{m+1}`: the new
/// vertex sits at position 0 and the original cell is the facet opposite it.
pub(crate) fn lift(cell: &KuhnCell, resolution: u64) -> KuhnCell {
    let m = cell.dim();
    let mut base = cell.base.clone();
    base.push(resolution as i64 - 1);
    let mut perm = Vec::with_capacity(m + 1);
    perm.push(m);
    perm.extend_from_slice(&cell.perm);
    KuhnCell { base, perm }
}
