//! Door-to-door search for a full cell of a Kuhn triangulation.
//!
//! The walk climbs through the faces `F^1 ⊂ F^2 ⊂ ... ⊂ F^N`. At level `m`
//! it moves between cells of `F^m` carrying every label `1..=m`, crossing
//! facets labelled exactly `{1, ..., m}`. A full cell of `F^m` opens a door
//! upward into the unique cell of `F^{m+1}` having it as a facet; a door on
//! the face `a_{m+1} = 0` leads back down. The path starts at the vertex
//! `e_1` and ends at a full cell of `F^N`.

use std::collections::HashSet;

use super::{FiniteMap, LabelCache};
use crate::error::{Error, Result};
use crate::triangulation::{lift, KuhnCell, KuhnTriangulation, LatticePoint, Neighbor, ResourceCap, Subdivision};

/// Lazily evaluated labelling of the lattice points of `F^N`.
pub trait LabelOracle {
    /// Label of the vertex `v` (all `N + 1` lattice coordinates).
    fn label(&self, v: &LatticePoint) -> Result<usize>;
}

/// The labelling `ℓ` induced by a truncated map on a grid of resolution `k`.
#[derive(Debug)]
pub struct MapLabels<'a> {
    pub map: &'a FiniteMap,
    pub resolution: u64,
}

impl LabelOracle for MapLabels<'_> {
    fn label(&self, v: &LatticePoint) -> Result<usize> {
        self.map.label(&v.to_point(self.resolution))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct PathStats {
    /// Cells entered, over all levels.
    pub cells_visited: u64,
    /// Distinct vertices whose label was computed.
    pub label_evaluations: u64,
}

#[derive(Clone, Debug)]
pub struct PathResult {
    pub cell: KuhnCell,
    /// Vertices of `cell` in position order.
    pub vertices: Vec<LatticePoint>,
    /// Label of each vertex, same order.
    pub labels: Vec<usize>,
    pub stats: PathStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Port {
    Up,
    /// The facet opposite the vertex at this position.
    Facet(usize),
}

struct Walker<'a> {
    t: &'a KuhnTriangulation,
    lab: &'a dyn LabelOracle,
    memo: LabelCache,
    stats: PathStats,
}

impl Walker<'_> {
    fn vertex_label(&mut self, v: &LatticePoint) -> Result<usize> {
        let n = self.t.dim();
        let padded = v.padded(n + 1);
        let stats = &mut self.stats;
        let lab = self.lab;
        let l = self.memo.get_or_insert_with(&padded, || {
            stats.label_evaluations += 1;
            lab.label(&padded)
        })?;
        if !(1..=n + 1).contains(&l) || padded.coords()[l - 1] == 0 {
            return Err(Error::Precondition(format!(
                "label {l} at vertex {padded} is outside its carrier"
            )));
        }
        Ok(l)
    }

    /// Ports of a level-`m` cell through which the walk may pass.
    fn ports(
        &mut self,
        face: &KuhnTriangulation,
        cell: &KuhnCell,
    ) -> Result<(Vec<LatticePoint>, Vec<usize>, [Port; 2])> {
        let m = face.dim();
        let vertices = face.vertices_of(cell);
        let labels = vertices
            .iter()
            .map(|v| self.vertex_label(v))
            .collect::<Result<Vec<_>>>()?;
        let mut first_at = vec![None; m + 2];
        let mut dup = None;
        for (pos, &l) in labels.iter().enumerate() {
            match first_at[l] {
                None => first_at[l] = Some(pos),
                Some(prev) => dup = Some((prev, pos)),
            }
        }
        if (1..=m).any(|l| first_at[l].is_none()) {
            return Err(Error::Internal(format!(
                "cell {cell:?} on the path lacks a label in 1..={m}; labels changed between queries"
            )));
        }
        let ports = match (first_at[m + 1], dup) {
            (Some(top), None) => [Port::Up, Port::Facet(top)],
            (None, Some((p, q))) => [Port::Facet(p), Port::Facet(q)],
            _ => return Err(Error::Internal(format!("inconsistent labels {labels:?} at {cell:?}"))),
        };
        Ok((vertices, labels, ports))
    }
}

/// Follows the door path from `e_1` to a full cell of `t`.
///
/// Labels are evaluated at most once per vertex. Fails with
/// [`Error::ResourceCap`] if more than `cap.max_cells` cells are entered and
/// with [`Error::Internal`] if the walk returns to a cell already visited.
pub fn find_full_cell_pathfollow(
    t: &KuhnTriangulation,
    lab: &dyn LabelOracle,
    cap: &ResourceCap,
) -> Result<PathResult> {
    let k = t.resolution();
    let n = t.dim();
    let mut w = Walker {
        t,
        lab,
        memo: LabelCache::default(),
        stats: PathStats::default(),
    };
    let e1 = LatticePoint(vec![k, 0]);
    if w.vertex_label(&e1)? != 1 {
        return Err(Error::Internal("e_1 must carry label 1".into()));
    }
    let mut visited: HashSet<KuhnCell> = HashSet::new();
    let mut level = 1;
    let mut cell = lift(
        &KuhnCell {
            base: vec![],
            perm: vec![],
        },
        k,
    );
    let mut entry = Port::Facet(0);
    loop {
        if !visited.insert(cell.clone()) {
            return Err(Error::Internal(format!("path revisited cell {cell:?}")));
        }
        w.stats.cells_visited += 1;
        if w.stats.cells_visited > cap.max_cells {
            return Err(Error::ResourceCap {
                what: "path-following",
                requested: w.stats.cells_visited as u128,
                cap: cap.max_cells,
            });
        }
        let face = KuhnTriangulation::face(level, k);
        let (vertices, labels, ports) = w.ports(&face, &cell)?;
        let exit = match ports {
            [a, b] if a == entry => b,
            [a, b] if b == entry => a,
            _ => {
                return Err(Error::Internal(format!(
                    "entered {cell:?} through {entry:?}, which is not a door"
                )))
            }
        };
        match exit {
            Port::Up if level == n => {
                return Ok(PathResult {
                    cell,
                    vertices: vertices.iter().map(|v| v.padded(n + 1)).collect(),
                    labels,
                    stats: w.stats,
                });
            }
            Port::Up => {
                cell = lift(&cell, k);
                level += 1;
                entry = Port::Facet(0);
            }
            Port::Facet(pos) => match face.pivot(&cell, pos)? {
                (Neighbor::Cell(next), new_pos) => {
                    cell = next;
                    entry = Port::Facet(new_pos);
                }
                (Neighbor::Boundary, _) => {
                    if level == 1 {
                        return Err(Error::Internal("path returned to e_1".into()));
                    }
                    // A door on the boundary of F^m lies in a_{m+1} = 0.
                    let facet: Vec<LatticePoint> = vertices
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != pos)
                        .map(|(_, v)| LatticePoint(v.coords()[..level].to_vec()))
                        .collect();
                    let lower = KuhnTriangulation::face(level - 1, k);
                    cell = lower.cell_from_vertices(&facet).ok_or_else(|| {
                        Error::Internal(format!("boundary door {facet:?} is not a cell of F^{}", level - 1))
                    })?;
                    level -= 1;
                    entry = Port::Up;
                }
            },
        }
    }
}

/// Every full cell of `t` under `lab`, in lexicographic order.
pub fn full_kuhn_cells(t: &KuhnTriangulation, lab: &dyn LabelOracle, cap: &ResourceCap) -> Result<Vec<KuhnCell>> {
    let mut w = Walker {
        t,
        lab,
        memo: LabelCache::default(),
        stats: PathStats::default(),
    };
    let mut out = Vec::new();
    t.for_each_kuhn_cell(cap, |c| {
        let labels = t
            .vertices_of(c)
            .iter()
            .map(|v| w.vertex_label(v))
            .collect::<Result<Vec<_>>>()?;
        if super::is_full(&labels) {
            out.push(c.clone());
        }
        Ok(())
    })?;
    Ok(out)
}
