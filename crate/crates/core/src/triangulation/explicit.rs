use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{KuhnTriangulation, ResourceCap, Subdivision};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// How an explicit triangulation was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Kuhn grid at the given resolution (resolution 1 is the single simplex).
    Kuhn { resolution: u64 },
    /// `depth` barycentric subdivisions applied to a Kuhn grid.
    Barycentric { resolution: u64, depth: u32 },
}

/// A triangulation of `F^N` with materialized vertex and cell tables.
/// Vertex coordinates are exact rationals so deduplication never compares
/// floats.
#[derive(Clone, Debug)]
pub struct ExplicitTriangulation {
    dim: usize,
    scheme: Scheme,
    vertices: Vec<Vec<BigRational>>,
    cells: Vec<Vec<usize>>,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl ExplicitTriangulation {
    /// The face `F^dim` as a single cell.
    pub fn trivial(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("triangulation dimension must be >= 1".into()));
        }
        let vertices = (0..=dim)
            .map(|i| {
                (0..=dim)
                    .map(|j| BigRational::from_integer(BigInt::from((i == j) as u8)))
                    .collect()
            })
            .collect();
        Ok(ExplicitTriangulation {
            dim,
            scheme: Scheme::Kuhn { resolution: 1 },
            vertices,
            cells: vec![(0..=dim).collect()],
        })
    }

    /// Materializes a Kuhn grid. Vertex ids follow lexicographic lattice order.
    pub fn from_kuhn(t: &KuhnTriangulation, cap: &ResourceCap) -> Result<Self> {
        let k = BigInt::from(t.resolution());
        let lattice = t.vertices(cap)?;
        let index: HashMap<_, _> = lattice.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let vertices = lattice
            .iter()
            .map(|v| {
                v.coords()
                    .iter()
                    .map(|&a| BigRational::new(BigInt::from(a), k.clone()))
                    .collect()
            })
            .collect();
        let mut cells = Vec::new();
        t.for_each_cell(cap, &mut |vs| {
            cells.push(vs.iter().map(|v| index[v]).collect());
            Ok(())
        })?;
        Ok(ExplicitTriangulation {
            dim: t.dim(),
            scheme: Scheme::Kuhn {
                resolution: t.resolution(),
            },
            vertices,
            cells,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn exact_vertex(&self, id: usize) -> &[BigRational] {
        &self.vertices[id]
    }

    /// Replaces every cell by the `(N+1)!` cells of its barycentric
    /// subdivision: one per ordering of its vertices, spanned by the
    /// barycenters of the growing prefixes.
    pub fn barycentric_subdivide(&self, cap: &ResourceCap) -> Result<Self> {
        let n = self.dim;
        let new_count = (self.cells.len() as u128).saturating_mul(factorial(n + 1));
        if new_count > cap.max_cells as u128 {
            return Err(Error::ResourceCap {
                what: "barycentric subdivision",
                requested: new_count,
                cap: cap.max_cells,
            });
        }
        let mut vertices: Vec<Vec<BigRational>> = Vec::new();
        let mut index: HashMap<Vec<BigRational>, usize> = HashMap::new();
        let mut intern = |coords: Vec<BigRational>| -> usize {
            *index.entry(coords.clone()).or_insert_with(|| {
                vertices.push(coords);
                vertices.len() - 1
            })
        };
        let mut cells = Vec::with_capacity(new_count as usize);
        let mut order: Vec<usize> = (0..=n).collect();
        for cell in &self.cells {
            order.iter_mut().enumerate().for_each(|(i, o)| *o = i);
            loop {
                let mut sum = vec![BigRational::zero(); n + 1];
                let mut new_cell = Vec::with_capacity(n + 1);
                for (count, &o) in order.iter().enumerate() {
                    for (s, c) in sum.iter_mut().zip(&self.vertices[cell[o]]) {
                        *s += c;
                    }
                    let denom = BigRational::from_integer(BigInt::from(count + 1));
                    new_cell.push(intern(sum.iter().map(|s| s / &denom).collect()));
                }
                cells.push(new_cell);
                if !next_permutation(&mut order) {
                    break;
                }
            }
        }
        let scheme = match self.scheme {
            Scheme::Kuhn { resolution } => Scheme::Barycentric { resolution, depth: 1 },
            Scheme::Barycentric { resolution, depth } => Scheme::Barycentric {
                resolution,
                depth: depth + 1,
            },
        };
        Ok(ExplicitTriangulation {
            dim: n,
            scheme,
            vertices,
            cells,
        })
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

impl Subdivision for ExplicitTriangulation {
    type Vertex = usize;

    fn dim(&self) -> usize {
        self.dim
    }

    fn for_each_cell(&self, cap: &ResourceCap, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
        if self.cells.len() as u64 > cap.max_cells {
            return Err(Error::ResourceCap {
                what: "cell enumeration",
                requested: self.cells.len() as u128,
                cap: cap.max_cells,
            });
        }
        self.cells.iter().try_for_each(|c| f(c))
    }

    fn vertices(&self, _cap: &ResourceCap) -> Result<Vec<usize>> {
        Ok((0..self.vertices.len()).collect())
    }

    fn point(&self, v: &usize) -> Point {
        Point::new(
            self.vertices[*v]
                .iter()
                .enumerate()
                .map(|(i, c)| (i + 1, c.to_f64().unwrap_or(0.0))),
        )
        .expect("vertices lie on the simplex")
    }

    fn carrier(&self, v: &usize) -> Vec<usize> {
        self.vertices[*v]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }
}
