//! Fixtures shared by the benchmarks in `benches/`.

use sperner_core::geometry::Point;

/// A deterministic spread of points of the simplex supported in `1..=len`.
pub fn sample_points(len: usize, count: usize) -> Vec<Point> {
    (0..count)
        .map(|j| {
            let raw: Vec<f64> = (0..len).map(|i| ((j * 7 + i * 13) % 17) as f64 + 1.0).collect();
            let total = raw.iter().sum::<f64>() * 1.25;
            Point::from_dense(&raw.iter().map(|v| v / total).collect::<Vec<_>>()).expect("scaled into the simplex")
        })
        .collect()
}

/// A map file exercising every construct of the definition language.
pub const MAP_SOURCE: &str = "\
# damped rotation with a clipped correction term
f1 = 0.5*x3 + 0.25*(1 - x1 - x2 - x3)
f2 = min(x1, 0.5) + abs(x2 - x3)/8
f3 = max(pow(x2, 2), x1*x2) / (1 + x4)
f4 = -x4 + 2*x4
tail shift from 5
post project
";
