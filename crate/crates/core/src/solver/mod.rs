//! ε-fixed points of self-maps of the infinite-dimensional simplex.
//!
//! For a target `ε` the map is truncated to `g` on `F^N`, `F^N` is
//! triangulated with a Kuhn grid, a full cell is located by path-following
//! and `y` is read off the vertex labelled 1. The grid is refined until the
//! measured residual `d(y, f(y))` drops below `ε`.

mod params;

use serde::Serialize;

pub use params::{min_dimension, plan_parameters, Modulus, ParamOverrides, SolverParams, DEFAULT_MAX_REFINEMENTS};

use crate::error::{Error, RefinementDiagnostics, Result};
use crate::geometry::{truncated_metric, Point, TOL_MEMBERSHIP};
use crate::labeling::{find_full_cell_pathfollow, is_full, truncate_map, MapLabels, PathResult, PathStats};
use crate::map::{MapOracle, SharedMap};
use crate::serial::sig17;
use crate::triangulation::{KuhnCell, KuhnTriangulation, LatticePoint, ResourceCap};

pub const SCHEMA_VERSION: u32 = 1;
pub const SOLVER_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Minimum number of metric terms summed by [`residual`].
pub const RESIDUAL_MIN_TERMS: usize = 60;

const MAX_RESOLUTION: u64 = 1 << 52;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveConfig {
    pub overrides: ParamOverrides,
    /// First grid resolution tried when no modulus is given. Defaults to
    /// `ceil(1 / eps0)`.
    pub initial_resolution: Option<u64>,
    pub cap: ResourceCap,
}

/// `d(y, f(y))` summed over the first `terms` coordinates; the remaining
/// terms add at most `tail_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    #[serde(serialize_with = "sig17")]
    pub value: f64,
    #[serde(serialize_with = "sig17")]
    pub tail_bound: f64,
    pub terms: usize,
}

impl Residual {
    pub fn upper_bound(&self) -> f64 {
        self.value + self.tail_bound
    }
}

pub fn residual(f: &dyn MapOracle, y: &Point) -> Result<Residual> {
    residual_with_terms(f, y, RESIDUAL_MIN_TERMS)
}

/// As [`residual`], summing at least `min_terms` terms.
pub fn residual_with_terms(f: &dyn MapOracle, y: &Point, min_terms: usize) -> Result<Residual> {
    let fy = f.evaluate(y)?;
    let terms = y.max_index().max(min_terms).max(RESIDUAL_MIN_TERMS);
    Ok(Residual {
        value: truncated_metric(y, &fy, terms),
        tail_bound: 0.5f64.powi(terms.min(1000) as i32),
        terms,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessCell {
    pub resolution: u64,
    pub cell: KuhnCell,
    /// Lattice coordinates; the simplex point is `vertex / resolution`.
    pub vertices: Vec<LatticePoint>,
    pub labels: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeshUsed {
    #[serde(serialize_with = "sig17")]
    pub sup_norm: f64,
    #[serde(serialize_with = "sig17")]
    pub product_metric: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub max_cells: u64,
    pub initial_resolution: Option<u64>,
    #[serde(rename = "N_override")]
    pub n_override: Option<usize>,
    pub max_refinements: u32,
    pub modulus: Option<Modulus>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    EpsilonFixedPoint,
    FixedPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub solver_version: String,
    pub mode: SolveMode,
    pub map: String,
    pub point_y: Point,
    #[serde(serialize_with = "sig17")]
    pub epsilon_requested: f64,
    #[serde(serialize_with = "sig17")]
    pub residual: f64,
    #[serde(serialize_with = "sig17")]
    pub residual_tail_bound: f64,
    pub residual_terms: usize,
    pub params: SolverParams,
    pub witness_cell: WitnessCell,
    pub mesh_used: MeshUsed,
    pub resolution: u64,
    pub refinement_count: u32,
    /// Stages of the ε schedule run by [`fixed_point`]; 1 otherwise.
    pub stages: u32,
    pub map_evaluations: u64,
    pub path: PathStats,
    pub config: ConfigEcho,
}

/// Outcome of re-checking a certificate's witness cell against the map.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessCheck {
    /// Labels recomputed from the map match the recorded ones and are full.
    pub labels_ok: bool,
    /// `min_i (x^i_i - g_i(x^i))` over the vertices `x^i` labelled `i`.
    #[serde(serialize_with = "sig17")]
    pub min_slack: f64,
    pub slack_ok: bool,
    /// `max_{i,j} |x^1_j - x^i_j|`.
    #[serde(serialize_with = "sig17")]
    pub max_spread: f64,
    /// `2^{N+2}` times the product-metric mesh of the grid used.
    #[serde(serialize_with = "sig17")]
    pub spread_bound: f64,
    pub spread_ok: bool,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.labels_ok && self.slack_ok && self.spread_ok
    }
}

/// Recomputes the labels of the witness cell and checks
/// `x^i_i - g_i(x^i) >= 0` (up to `TOL_MEMBERSHIP`) for every `i`, and
/// `|x^1_j - x^i_j| < 2^{N+2} delta` with `delta` the mesh actually used.
pub fn verify_witness(f: &SharedMap, cert: &Certificate) -> Result<WitnessCheck> {
    let n = cert.params.n;
    let k = cert.witness_cell.resolution;
    let g = truncate_map(f.clone(), n)?;
    let points: Vec<Vec<f64>> = cert.witness_cell.vertices.iter().map(|v| v.to_dense(k)).collect();
    let mut labels = Vec::with_capacity(points.len());
    let mut min_slack = f64::INFINITY;
    for (v, x) in cert.witness_cell.vertices.iter().zip(&points) {
        let gx = g.evaluate(&v.to_point(k))?;
        let l = crate::labeling::argmax_label(x, &gx);
        min_slack = min_slack.min(x[l - 1] - gx[l - 1]);
        labels.push(l);
    }
    let labels_ok = labels == cert.witness_cell.labels && is_full(&labels);
    let x1 = labels.iter().position(|&l| l == 1).map(|p| &points[p]);
    let max_spread = x1.map_or(f64::INFINITY, |x1| {
        points
            .iter()
            .flat_map(|x| x.iter().zip(x1).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    });
    let spread_bound = 2f64.powi(n as i32 + 2) * cert.mesh_used.product_metric;
    Ok(WitnessCheck {
        labels_ok,
        min_slack,
        slack_ok: min_slack >= -TOL_MEMBERSHIP,
        max_spread,
        spread_bound,
        spread_ok: max_spread < spread_bound,
    })
}

fn checked_resolution(k: f64) -> Result<u64> {
    if !(1.0..=MAX_RESOLUTION as f64).contains(&k) {
        return Err(Error::InvalidParameter(format!("grid resolution {k} out of range")));
    }
    Ok(k as u64)
}

/// Resolutions to try, coarse to fine. With a modulus or an explicit
/// initial resolution the ladder starts there. Otherwise it starts at the
/// larger of `N + 1` and the warm resolution and doubles up to
/// `ceil(1 / eps0)`. Either way it then continues for `max_refinements`
/// further doublings.
fn resolution_ladder(params: &SolverParams, config: &SolveConfig, warm: Option<u64>) -> Result<Vec<u64>> {
    let (first, guaranteed) = match (params.modulus, config.initial_resolution) {
        (Some(_), _) => {
            // sup mesh 1/k makes the product mesh at most (N + 1)/k <= mesh_target
            let k = checked_resolution(((params.n + 1) as f64 / params.mesh_target).ceil())?;
            (k, k)
        }
        (None, Some(k)) => {
            let k = checked_resolution(k as f64)?;
            (k, k)
        }
        (None, None) => {
            let guaranteed = checked_resolution((1.0 / params.eps0).ceil())?;
            (warm.unwrap_or(0).max(params.n as u64 + 1).min(guaranteed), guaranteed)
        }
    };
    let mut ladder = Vec::new();
    let mut k = first;
    while k < guaranteed {
        ladder.push(k);
        k *= 2;
    }
    let mut k = guaranteed.max(k.min(guaranteed));
    for r in 0..=params.max_refinements {
        if r > 0 {
            k = k
                .checked_mul(2)
                .filter(|&k| k <= MAX_RESOLUTION)
                .ok_or_else(|| Error::InvalidParameter(format!("grid resolution {k} * 2 overflows")))?;
        }
        ladder.push(k);
    }
    Ok(ladder)
}

struct Attempt {
    path: PathResult,
    y: Point,
    residual: Residual,
    resolution: u64,
}

fn attempt(f: &SharedMap, params: &SolverParams, k: u64, cap: &ResourceCap, evals: &mut u64) -> Result<Attempt> {
    let n = params.n;
    let t = KuhnTriangulation::new(n, k)?;
    let g = truncate_map(f.clone(), n)?;
    let found = find_full_cell_pathfollow(&t, &MapLabels { map: &g, resolution: k }, cap);
    *evals += g.evaluations();
    let path = found?;
    let x1 = path
        .labels
        .iter()
        .position(|&l| l == 1)
        .expect("full cells carry label 1");
    let y = path.vertices[x1].to_point(k).truncate(n);
    let residual = residual_with_terms(f.as_ref(), &y, n)?;
    *evals += 1;
    Ok(Attempt {
        path,
        y,
        residual,
        resolution: k,
    })
}

fn solve_stage(
    f: &SharedMap,
    epsilon: f64,
    params: &SolverParams,
    config: &SolveConfig,
    warm_resolution: Option<u64>,
) -> Result<Certificate> {
    let ladder = resolution_ladder(params, config, warm_resolution)?;
    let mut evals = 0u64;
    let mut best: Option<(f64, u64)> = None;
    for (r, &k) in ladder.iter().enumerate() {
        let r = r as u32;
        let a = attempt(f, params, k, &config.cap, &mut evals)?;
        if best.map_or(true, |(b, _)| a.residual.upper_bound() < b) {
            best = Some((a.residual.upper_bound(), k));
        }
        if a.residual.upper_bound() >= epsilon {
            continue;
        }
        let t = KuhnTriangulation::new(params.n, k)?;
        let cert = Certificate {
            schema_version: SCHEMA_VERSION,
            solver_version: SOLVER_VERSION.to_string(),
            mode: SolveMode::EpsilonFixedPoint,
            map: f.describe(),
            point_y: a.y,
            epsilon_requested: epsilon,
            residual: a.residual.value,
            residual_tail_bound: a.residual.tail_bound,
            residual_terms: a.residual.terms,
            params: params.clone(),
            witness_cell: WitnessCell {
                resolution: k,
                cell: a.path.cell,
                vertices: a.path.vertices,
                labels: a.path.labels,
            },
            mesh_used: MeshUsed {
                sup_norm: 1.0 / k as f64,
                product_metric: t.product_mesh(&config.cap)?,
            },
            resolution: a.resolution,
            refinement_count: r,
            stages: 1,
            map_evaluations: evals,
            path: a.path.stats,
            config: ConfigEcho {
                max_cells: config.cap.max_cells,
                initial_resolution: config.initial_resolution,
                n_override: config.overrides.n,
                max_refinements: params.max_refinements,
                modulus: params.modulus,
            },
        };
        let check = verify_witness(f, &cert)?;
        if !check.passed() {
            return Err(Error::Internal(format!(
                "witness cell failed re-verification: {check:?}"
            )));
        }
        return Ok(cert);
    }
    let (best_residual, best_resolution) = best.expect("at least one attempt runs");
    Err(Error::RefinementExhausted(Box::new(RefinementDiagnostics {
        epsilon,
        best_residual,
        best_resolution,
        refinements: params.max_refinements,
    })))
}

/// Finds `y` with `d(y, f(y)) < epsilon`.
///
/// The grid doubles until the measured residual, plus the bound on the
/// unsummed tail, is below `epsilon`. Without a modulus it starts coarse;
/// success is expected by resolution `ceil(1 / eps0)` and `max_refinements`
/// counts doublings past that point. A modulus fixes the start at the
/// resolution whose mesh meets `mesh_target`. `refinement_count` is the
/// number of doublings past the first grid tried.
pub fn epsilon_fixed_point(f: &SharedMap, epsilon: f64, config: &SolveConfig) -> Result<Certificate> {
    let params = plan_parameters(epsilon, &config.overrides)?;
    solve_stage(f, params.epsilon.min(epsilon), &params, config, None)
}

/// Drives the residual below `tol` through the schedule
/// `tol * 2^m, tol * 2^{m-1}, ..., tol` with `m = max(0, floor(log2(0.5 / tol)))`,
/// starting each stage at the previous stage's resolution.
pub fn fixed_point(f: &SharedMap, tol: f64, config: &SolveConfig) -> Result<Certificate> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let m = (0.5 / tol).log2().floor().max(0.0) as i32;
    let mut warm = None;
    let mut total_refinements = 0;
    let mut total_evals = 0;
    let mut last = None;
    for j in 0..=m {
        let eps = tol * 2f64.powi(m - j);
        let params = plan_parameters(eps, &config.overrides)?;
        let cert = solve_stage(f, params.epsilon.min(eps), &params, config, warm)?;
        warm = Some(cert.resolution);
        total_refinements += cert.refinement_count;
        total_evals += cert.map_evaluations;
        last = Some(cert);
    }
    let mut cert = last.expect("schedule has at least one stage");
    cert.mode = SolveMode::FixedPoint;
    cert.refinement_count = total_refinements;
    cert.map_evaluations = total_evals;
    cert.stages = m as u32 + 1;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{product_metric, sup_distance};
    use crate::map::builtin;

    fn cfg() -> SolveConfig {
        SolveConfig::default()
    }

    #[test]
    fn residual_examples() {
        let id = builtin("identity").unwrap();
        let y = Point::from_dense(&[0.2, 0.3]).unwrap();
        assert_eq!(residual(id.as_ref(), &y).unwrap().value, 0.0);
        let c = builtin("constant-1").unwrap();
        assert_eq!(residual(c.as_ref(), &Point::basis(2)).unwrap().value, 0.375);
        let s = builtin("shift").unwrap();
        let r = residual(s.as_ref(), &Point::zero()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.tail_bound, 0.5f64.powi(60));
    }

    #[test]
    fn identity_solves_on_first_attempt() {
        let cert = epsilon_fixed_point(&builtin("identity").unwrap(), 0.1, &cfg()).unwrap();
        assert_eq!(cert.residual, 0.0);
        assert_eq!(cert.refinement_count, 0);
    }

    #[test]
    fn rotation_certificate() {
        let f = builtin("rotation-3").unwrap();
        let cert = epsilon_fixed_point(&f, 0.01, &cfg()).unwrap();
        let r = residual(f.as_ref(), &cert.point_y).unwrap();
        assert!(r.upper_bound() < 0.01);
        let bary = Point::from_dense(&[1.0 / 3.0; 3]).unwrap();
        assert!(sup_distance(&cert.point_y, &bary) < 0.1);
        assert!(verify_witness(&f, &cert).unwrap().passed());
    }

    #[test]
    fn constant_fixed_point() {
        let f = builtin("constant-1").unwrap();
        let cert = fixed_point(&f, 1e-4, &cfg()).unwrap();
        assert!(product_metric(&cert.point_y, &Point::basis(1)) < 1e-4);
        assert_eq!(cert.mode, SolveMode::FixedPoint);
    }

    #[test]
    fn modulus_path_meets_mesh_target() {
        let f = builtin("constant-2").unwrap();
        let config = SolveConfig {
            overrides: ParamOverrides {
                modulus: Some(Modulus::Lipschitz { constant: 1.0 }),
                ..Default::default()
            },
            ..Default::default()
        };
        let cert = epsilon_fixed_point(&f, 0.5, &config).unwrap();
        assert!(cert.mesh_used.product_metric <= cert.params.mesh_target);
    }

    #[test]
    fn exhausted_budget_reports_best() {
        let f = builtin("rotation-3").unwrap();
        let config = SolveConfig {
            overrides: ParamOverrides {
                max_refinements: Some(1),
                ..Default::default()
            },
            initial_resolution: Some(1),
            ..Default::default()
        };
        match epsilon_fixed_point(&f, 1e-3, &config) {
            Err(Error::RefinementExhausted(d)) => {
                assert_eq!(d.refinements, 1);
                assert!(d.best_residual >= 1e-3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificates_are_deterministic() {
        let f = builtin("convex-combo(rotation-3,shift,0.5)").unwrap();
        let a = serde_json::to_string(&epsilon_fixed_point(&f, 0.05, &cfg()).unwrap()).unwrap();
        let b = serde_json::to_string(&epsilon_fixed_point(&f, 0.05, &cfg()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
