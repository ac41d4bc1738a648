//! The truncated map `g`, the Sperner labelling it induces, and full-cell
//! search.

mod pathfollow;

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use pathfollow::{find_full_cell_pathfollow, full_kuhn_cells, LabelOracle, MapLabels, PathResult, PathStats};

use crate::error::{Error, Result};
use crate::geometry::{Point, TOL_MEMBERSHIP};
use crate::map::SharedMap;
use crate::triangulation::{LatticePoint, ResourceCap, Subdivision};

/// `g(x) = (f_1(x), ..., f_N(x), 1 - (f_1(x) + ... + f_N(x)))` on `F^N`.
#[derive(Debug)]
pub struct FiniteMap {
    source: SharedMap,
    n: usize,
    evaluations: AtomicU64,
}

pub fn truncate_map(f: SharedMap, n: usize) -> Result<FiniteMap> {
    if n == 0 {
        return Err(Error::InvalidParameter("truncation dimension must be >= 1".into()));
    }
    Ok(FiniteMap {
        source: f,
        n,
        evaluations: AtomicU64::new(0),
    })
}

impl FiniteMap {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> &SharedMap {
        &self.source
    }

    /// Number of calls made to the source oracle so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// The `N + 1` coordinates of `g(x)`.
    pub fn evaluate(&self, x: &Point) -> Result<Vec<f64>> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        let fx = self.source.evaluate(x)?;
        let mut out = fx.to_dense(self.n);
        let sum: f64 = out.iter().sum();
        if sum > 1.0 + TOL_MEMBERSHIP {
            return Err(Error::MapRange(format!(
                "f1 + ... + f{} = {sum} > 1 at x = {x}",
                self.n
            )));
        }
        if sum > 1.0 {
            out.iter_mut().for_each(|v| *v /= sum);
            out.push(0.0);
        } else {
            out.push(1.0 - sum);
        }
        Ok(out)
    }

    /// `ℓ(v)` for a point `v` of `F^N`.
    pub fn label(&self, v: &Point) -> Result<usize> {
        let g = self.evaluate(v)?;
        Ok(argmax_label(&v.to_dense(self.n + 1), &g))
    }
}

/// Argmax of `v_i - g_i` over the carrier `{i : v_i > 0}`, least index on
/// ties. Returns a 1-based label. `v` must have a nonzero entry.
pub fn argmax_label(v: &[f64], g: &[f64]) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for (i, (&vi, &gi)) in v.iter().zip(g).enumerate() {
        if vi <= 0.0 {
            continue;
        }
        let d = vi - gi;
        if best.map_or(true, |(_, b)| d > b) {
            best = Some((i + 1, d));
        }
    }
    best.expect("points of F^N have nonempty carrier").0
}

/// `ℓ(v)` for the labelling induced by `g`.
pub fn sperner_label(v: &Point, g: &FiniteMap) -> Result<usize> {
    g.label(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Induced by the truncation of the named map at dimension `n`.
    MapInduced {
        map: String,
        n: usize,
    },
    Explicit,
}

/// A label for every vertex of a triangulation.
#[derive(Clone, Debug)]
pub struct Labeling<V: Ord> {
    pub assignment: BTreeMap<V, usize>,
    pub provenance: Provenance,
}

impl<V: Ord> Labeling<V> {
    pub fn explicit(assignment: BTreeMap<V, usize>) -> Self {
        Labeling {
            assignment,
            provenance: Provenance::Explicit,
        }
    }

    pub fn get(&self, v: &V) -> Option<usize> {
        self.assignment.get(v).copied()
    }
}

/// Labels every vertex of `t` with `ℓ` induced by `g`.
pub fn label_by_map<T: Subdivision>(t: &T, g: &FiniteMap, cap: &ResourceCap) -> Result<Labeling<T::Vertex>> {
    if t.dim() != g.dim() {
        return Err(Error::Precondition(format!(
            "triangulation of F^{} labelled by a map truncated at N = {}",
            t.dim(),
            g.dim()
        )));
    }
    let mut assignment = BTreeMap::new();
    for v in t.vertices(cap)? {
        let l = g.label(&t.point(&v))?;
        assignment.insert(v, l);
    }
    Ok(Labeling {
        assignment,
        provenance: Provenance::MapInduced {
            map: g.source().describe(),
            n: g.dim(),
        },
    })
}

/// A uniformly random carrier-respecting labelling, reproducible from `seed`.
/// Vertices are visited in the order returned by `t.vertices`.
pub fn random_labeling<T: Subdivision>(t: &T, seed: u64, cap: &ResourceCap) -> Result<Labeling<T::Vertex>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = BTreeMap::new();
    for v in t.vertices(cap)? {
        let carrier = t.carrier(&v);
        let l = carrier[rng.random_range(0..carrier.len())];
        assignment.insert(v, l);
    }
    Ok(Labeling::explicit(assignment))
}

/// First vertex whose label breaks the Sperner property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation<V> {
    pub vertex: V,
    /// `None` if the vertex has no label.
    pub label: Option<usize>,
    pub carrier: Vec<usize>,
}

/// Checks that every vertex is labelled from its carrier. Vertices are
/// checked in the order returned by `t.vertices`.
pub fn validate_sperner<T: Subdivision>(
    t: &T,
    lab: &Labeling<T::Vertex>,
    cap: &ResourceCap,
) -> Result<Option<Violation<T::Vertex>>> {
    for v in t.vertices(cap)? {
        let carrier = t.carrier(&v);
        let label = lab.get(&v);
        if !label.is_some_and(|l| carrier.contains(&l)) {
            return Ok(Some(Violation {
                vertex: v,
                label,
                carrier,
            }));
        }
    }
    Ok(None)
}

/// True if the labels are exactly `1..=labels.len()` in some order.
pub fn is_full(labels: &[usize]) -> bool {
    let mut seen = vec![false; labels.len()];
    labels
        .iter()
        .all(|&l| (1..=labels.len()).contains(&l) && !std::mem::replace(&mut seen[l - 1], true))
}

/// Cells whose labels are a permutation of `1..=N+1`, in enumeration order.
pub fn full_cells<T: Subdivision>(t: &T, lab: &Labeling<T::Vertex>, cap: &ResourceCap) -> Result<Vec<Vec<T::Vertex>>> {
    let mut out = Vec::new();
    let mut labels = Vec::with_capacity(t.dim() + 1);
    t.for_each_cell(cap, &mut |vs| {
        labels.clear();
        for v in vs {
            labels.push(
                lab.get(v)
                    .ok_or_else(|| Error::Precondition(format!("vertex {v:?} has no label")))?,
            );
        }
        if is_full(&labels) {
            out.push(vs.to_vec());
        }
        Ok(())
    })?;
    Ok(out)
}

pub fn count_full_cells<T: Subdivision>(t: &T, lab: &Labeling<T::Vertex>, cap: &ResourceCap) -> Result<u64> {
    Ok(full_cells(t, lab, cap)?.len() as u64)
}

/// A labelling held as a lookup table keyed by lattice point.
impl LabelOracle for Labeling<LatticePoint> {
    fn label(&self, v: &LatticePoint) -> Result<usize> {
        self.get(v)
            .ok_or_else(|| Error::Precondition(format!("vertex {v} has no label")))
    }
}

/// Memoizing wrapper usable from several threads.
#[derive(Debug, Default)]
pub struct LabelCache {
    inner: std::sync::RwLock<HashMap<LatticePoint, usize>>,
}

impl LabelCache {
    /// Returns the cached label or computes and inserts it. If two threads
    /// race, the first insert wins and both see the same value.
    pub fn get_or_insert_with(&self, v: &LatticePoint, f: impl FnOnce() -> Result<usize>) -> Result<usize> {
        if let Some(&l) = self.inner.read().expect("label cache poisoned").get(v) {
            return Ok(l);
        }
        let l = f()?;
        Ok(*self
            .inner
            .write()
            .expect("label cache poisoned")
            .entry(v.clone())
            .or_insert(l))
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("label cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
