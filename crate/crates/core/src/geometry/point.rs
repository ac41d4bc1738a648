use std::fmt;

use serde::de::{Deserialize, Deserializer};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::serial::Sig17;

/// Absolute tolerance for sum and range checks on simplex points.
pub const TOL_MEMBERSHIP: f64 = 1e-9;

/// Magnitudes below this are treated as exact zeros and dropped.
pub const ZERO_CUTOFF: f64 = 1e-15;

/// A finitely supported point of the closed infinite-dimensional simplex.
///
/// Stored sparsely: `(index, value)` pairs with 1-based, strictly increasing
/// indices and strictly positive values. Every value lies in `[0, 1]` and the
/// values sum to at most `1 + TOL_MEMBERSHIP`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Point {
    entries: Vec<(usize, f64)>,
}

impl Point {
    /// Builds a point from `(index, value)` pairs in any order.
    ///
    /// Values within `TOL_MEMBERSHIP` of the unit interval are clamped into it;
    /// values below `ZERO_CUTOFF` in magnitude are dropped.
    pub fn new(entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut entries: Vec<(usize, f64)> = entries.into_iter().collect();
        entries.sort_by_key(|&(i, _)| i);
        let mut out = Vec::with_capacity(entries.len());
        let mut sum = 0.0;
        for (pos, &(index, value)) in entries.iter().enumerate() {
            if index == 0 {
                return Err(Error::InvalidPoint("coordinate indices start at 1".into()));
            }
            if pos > 0 && entries[pos - 1].0 == index {
                return Err(Error::InvalidPoint(format!("duplicate index {index}")));
            }
            if !value.is_finite() {
                return Err(Error::InvalidPoint(format!("x{index} is not finite")));
            }
            if !(-TOL_MEMBERSHIP..=1.0 + TOL_MEMBERSHIP).contains(&value) {
                return Err(Error::InvalidPoint(format!("x{index} = {value} outside [0, 1]")));
            }
            let value = value.clamp(0.0, 1.0);
            if value.abs() < ZERO_CUTOFF {
                continue;
            }
            sum += value;
            out.push((index, value));
        }
        if sum > 1.0 + TOL_MEMBERSHIP {
            return Err(Error::InvalidPoint(format!("coordinates sum to {sum} > 1")));
        }
        Ok(Point { entries: out })
    }

    /// Builds a point from dense coordinates `x1, x2, ...`.
    pub fn from_dense(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().enumerate().map(|(i, &v)| (i + 1, v)))
    }

    /// The origin `0`, which lies in the closure but not on any face.
    pub fn zero() -> Self {
        Point::default()
    }

    /// The standard basis vector `e_i` (1-based).
    pub fn basis(i: usize) -> Self {
        assert!(i >= 1, "basis vectors are 1-indexed");
        Point {
            entries: vec![(i, 1.0)],
        }
    }

    pub fn get(&self, i: usize) -> f64 {
        match self.entries.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    /// Largest index carrying a nonzero value, or 0 for the origin.
    pub fn max_index(&self) -> usize {
        self.entries.last().map_or(0, |&(i, _)| i)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v).sum()
    }

    /// Indices with nonzero value.
    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().map(|&(i, _)| i).collect()
    }

    /// Dense coordinates `x1..=xn`.
    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for &(i, v) in &self.entries {
            if i <= n {
                out[i - 1] = v;
            }
        }
        out
    }

    /// Keeps coordinates `1..=n` and zeroes the rest.
    pub fn truncate(&self, n: usize) -> Point {
        Point {
            entries: self.entries.iter().copied().filter(|&(i, _)| i <= n).collect(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, (i, v)) in self.iter().enumerate() {
            if pos > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{i}: {v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for &(i, v) in &self.entries {
            seq.serialize_element(&(i, Sig17(v)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(usize, f64)> = Vec::deserialize(deserializer)?;
        Point::new(pairs).map_err(serde::de::Error::custom)
    }
}
