//! The product metric on sequence space, its truncations, the sup-norm, and
//! the two-sided comparison between a truncated metric and the sup-norm on
//! bounded sets.

use super::point::{Point, TOL_MEMBERSHIP};
use crate::error::{Error, Result};

/// `2^-i`, flushed to zero past the exponent range.
#[inline]
pub fn weight(i: usize) -> f64 {
    if i > 1100 {
        0.0
    } else {
        0.5f64.powi(i as i32)
    }
}

/// One series term `|d| / (2^i (1 + |d|))`.
#[inline]
pub fn metric_term(i: usize, diff: f64) -> f64 {
    let d = diff.abs();
    weight(i) * d / (1.0 + d)
}

/// Walks the union of both supports in index order, calling `visit(i, x_i, y_i)`.
fn merge_supports(x: &Point, y: &Point, mut visit: impl FnMut(usize, f64, f64)) {
    let (a, b) = (x.entries(), y.entries());
    let (mut p, mut q) = (0, 0);
    while p < a.len() || q < b.len() {
        match (a.get(p), b.get(q)) {
            (Some(&(i, u)), Some(&(j, v))) if i == j => {
                visit(i, u, v);
                p += 1;
                q += 1;
            }
            (Some(&(i, u)), Some(&(j, _))) if i < j => {
                visit(i, u, 0.0);
                p += 1;
            }
            (Some(&(i, u)), None) => {
                visit(i, u, 0.0);
                p += 1;
            }
            (_, Some(&(j, v))) => {
                visit(j, 0.0, v);
                q += 1;
            }
            (None, None) => unreachable!(),
        }
    }
}

/// The product metric `sum_i |x_i - y_i| / (2^i (1 + |x_i - y_i|))`.
///
/// Both points are finitely supported, so the series is a finite sum.
pub fn product_metric(x: &Point, y: &Point) -> f64 {
    let mut total = 0.0;
    merge_supports(x, y, |i, u, v| total += metric_term(i, u - v));
    total
}

/// The product metric restricted to coordinates `1..=n`.
pub fn truncated_metric(x: &Point, y: &Point, n: usize) -> f64 {
    let mut total = 0.0;
    merge_supports(x, y, |i, u, v| {
        if i <= n {
            total += metric_term(i, u - v);
        }
    });
    total
}

/// Truncated metric on dense coordinate vectors of equal length.
pub fn truncated_metric_dense(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .enumerate()
        .map(|(i, (u, v))| metric_term(i + 1, u - v))
        .sum()
}

/// `max_i |x_i - y_i|`, zero when both points are the origin.
pub fn sup_distance(x: &Point, y: &Point) -> f64 {
    let mut best: f64 = 0.0;
    merge_supports(x, y, |_, u, v| best = best.max((u - v).abs()));
    best
}

pub fn sup_distance_dense(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0, |m, (u, v)| m.max((u - v).abs()))
}

/// Which truncation of the product metric to measure with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    Finite(usize),
    Unbounded,
}

/// A metric choice plus the diameter bound `M` used by the norm comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricParams {
    pub truncation: Truncation,
    pub bound_m: f64,
}

impl MetricParams {
    pub fn new(truncation: Truncation, bound_m: f64) -> Result<Self> {
        if !(bound_m >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "diameter bound M = {bound_m} must be >= 0"
            )));
        }
        if truncation == Truncation::Finite(0) {
            return Err(Error::InvalidParameter("truncation dimension must be >= 1".into()));
        }
        Ok(MetricParams { truncation, bound_m })
    }

    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        match self.truncation {
            Truncation::Finite(n) => truncated_metric(x, y, n),
            Truncation::Unbounded => product_metric(x, y),
        }
    }
}

/// Outcome of the two-sided comparison between `d_n` and the sup-norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceCheck {
    /// `d_n(x, y) <= n * ||x - y||_inf`
    pub lhs_ok: bool,
    /// `||x - y||_inf <= 2^n (1 + M) d_n(x, y)`
    pub rhs_ok: bool,
}

/// Evaluates both comparison inequalities for a pair supported in `1..=n`
/// whose sup-distance is at most `bound_m`.
pub fn check_equivalence_bounds(x: &Point, y: &Point, n: usize, bound_m: f64) -> Result<EquivalenceCheck> {
    if n == 0 {
        return Err(Error::Precondition("n must be >= 1".into()));
    }
    if x.max_index() > n || y.max_index() > n {
        return Err(Error::Precondition(format!("support exceeds 1..={n}")));
    }
    let sup = sup_distance(x, y);
    if !(bound_m >= 0.0) || sup > bound_m {
        return Err(Error::Precondition(format!(
            "sup-distance {sup} exceeds bound M = {bound_m}"
        )));
    }
    let dn = truncated_metric(x, y, n);
    let scale = 2f64.powi(n as i32) * (1.0 + bound_m);
    Ok(EquivalenceCheck {
        lhs_ok: dn <= n as f64 * sup,
        rhs_ok: sup <= scale * dn,
    })
}

/// Regions tested by [`is_member`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// The closed simplex: coordinates in `[0, 1]`, sum at most 1.
    SimplexClosure,
    /// The face `conv{e_1, ..., e_{n+1}}`.
    Face(usize),
    /// Finitely supported points with coordinate sum exactly 1.
    OpenHull,
}

pub fn is_member(x: &Point, region: Region) -> bool {
    let sum_is_one = (x.sum() - 1.0).abs() <= TOL_MEMBERSHIP;
    match region {
        // `Point` enforces the closure invariants at construction.
        Region::SimplexClosure => x.sum() <= 1.0 + TOL_MEMBERSHIP,
        Region::Face(n) => sum_is_one && x.max_index() <= n + 1,
        Region::OpenHull => sum_is_one,
    }
}

/// Embeds barycentric coordinates of the standard `n`-simplex as a point of
/// the face `F^n`, i.e. `(c_1, ..., c_{n+1}, 0, 0, ...)`.
pub fn embed_face(coords: &[f64]) -> Result<Point> {
    if coords.is_empty() {
        return Err(Error::InvalidPoint("empty coordinate list".into()));
    }
    if let Some((i, c)) = coords.iter().enumerate().find(|(_, &c)| c < 0.0 || !c.is_finite()) {
        return Err(Error::InvalidPoint(format!("coordinate {} = {c} is negative", i + 1)));
    }
    let sum: f64 = coords.iter().sum();
    if (sum - 1.0).abs() > TOL_MEMBERSHIP {
        return Err(Error::InvalidPoint(format!("coordinates sum to {sum}, expected 1")));
    }
    Point::from_dense(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Point {
        Point::basis(i)
    }

    #[test]
    fn product_metric_examples() {
        assert_eq!(product_metric(&Point::zero(), &Point::zero()), 0.0);
        assert_eq!(product_metric(&e(1), &e(2)), 0.375);
        assert_eq!(product_metric(&Point::zero(), &e(1)), 0.25);
    }

    #[test]
    fn truncated_metric_examples() {
        assert_eq!(truncated_metric(&e(1), &e(2), 1), 0.25);
        assert_eq!(truncated_metric(&e(1), &e(2), 2), 0.375);
        let x = Point::new([(1, 0.2), (4, 0.3)]).unwrap();
        for n in 1..6 {
            assert_eq!(truncated_metric(&x, &x, n), 0.0);
        }
    }

    #[test]
    fn sup_distance_examples() {
        assert_eq!(sup_distance(&e(1), &e(2)), 1.0);
        let x = Point::new([(2, 0.7)]).unwrap();
        assert_eq!(sup_distance(&x, &x), 0.0);
        assert_eq!(sup_distance(&Point::zero(), &Point::new([(3, 0.5)]).unwrap()), 0.5);
        assert_eq!(sup_distance(&Point::zero(), &Point::zero()), 0.0);
    }

    #[test]
    fn basis_vectors_converge_to_origin() {
        let mut prev = f64::INFINITY;
        for k in 1..40 {
            let d = product_metric(&e(k), &Point::zero());
            assert_eq!(d, 0.5f64.powi(k as i32 + 1));
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn equivalence_bounds_examples() {
        let c = check_equivalence_bounds(&e(1), &e(2), 2, 1.0).unwrap();
        assert_eq!(
            c,
            EquivalenceCheck {
                lhs_ok: true,
                rhs_ok: true
            }
        );
        let x = Point::new([(1, 0.3), (2, 0.1)]).unwrap();
        for n in 2..5 {
            let c = check_equivalence_bounds(&x, &x, n, 0.0).unwrap();
            assert!(c.lhs_ok && c.rhs_ok);
        }
    }

    #[test]
    fn equivalence_bounds_preconditions() {
        assert!(matches!(
            check_equivalence_bounds(&e(1), &e(3), 2, 1.0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_equivalence_bounds(&e(1), &e(2), 2, 0.5),
            Err(Error::Precondition(_))
        ));
        assert!(check_equivalence_bounds(&e(1), &e(1), 0, 1.0).is_err());
    }

    #[test]
    fn membership_examples() {
        assert!(is_member(&e(5), Region::SimplexClosure));
        assert!(!is_member(&Point::zero(), Region::Face(2)));
        assert!(is_member(&Point::zero(), Region::SimplexClosure));
        let half = Point::from_dense(&[0.5, 0.5]).unwrap();
        assert!(is_member(&half, Region::Face(1)));
        assert!(!is_member(&e(3), Region::Face(1)));
        assert!(is_member(&e(3), Region::OpenHull));
    }

    #[test]
    fn embed_face_examples() {
        assert_eq!(embed_face(&[1.0, 0.0, 0.0]).unwrap(), e(1));
        let third = 1.0 / 3.0;
        let b = embed_face(&[third, third, third]).unwrap();
        assert!(is_member(&b, Region::Face(2)));
        assert_eq!(b.get(2), third);
        assert!(embed_face(&[-0.1, 1.1]).is_err());
        assert!(embed_face(&[0.5, 0.4]).is_err());
        assert!(embed_face(&[]).is_err());
    }

    #[test]
    fn metric_params_dispatch() {
        let m = MetricParams::new(Truncation::Finite(1), 1.0).unwrap();
        assert_eq!(m.distance(&e(1), &e(2)), 0.25);
        let m = MetricParams::new(Truncation::Unbounded, 1.0).unwrap();
        assert_eq!(m.distance(&e(1), &e(2)), 0.375);
        assert!(MetricParams::new(Truncation::Finite(0), 1.0).is_err());
        assert!(MetricParams::new(Truncation::Unbounded, -1.0).is_err());
    }
}
