//! Points of the infinite-dimensional simplex and the metrics on them.

mod metric;
mod point;

pub use metric::{
    check_equivalence_bounds, embed_face, is_member, metric_term, product_metric, sup_distance, sup_distance_dense,
    truncated_metric, truncated_metric_dense, weight, EquivalenceCheck, MetricParams, Region, Truncation,
};
pub use point::{Point, TOL_MEMBERSHIP, ZERO_CUTOFF};
