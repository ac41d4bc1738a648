//! Structured triangulation and label dumps.

use serde::{Deserialize, Serialize};
use sperner_core::labeling::{is_full, Labeling};
use sperner_core::serial::Sig17;
use sperner_core::triangulation::{ExplicitTriangulation, Scheme, Subdivision};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    /// Exact coordinates as `p/q` strings.
    pub exact: Vec<String>,
    #[serde(default, skip_deserializing)]
    pub coords: Vec<Sig17>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LabelSource {
    Map { map: String },
    Random { seed: u64 },
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TriangulationDump {
    pub schema_version: u32,
    pub dim: usize,
    pub scheme: String,
    pub resolution: u64,
    pub depth: u32,
    pub vertices: Vec<VertexRecord>,
    pub cells: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labelling: Option<LabelSource>,
    /// Label of each vertex, indexed by vertex id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
}

impl TriangulationDump {
    pub fn new(t: &ExplicitTriangulation, labels: Option<(&Labeling<usize>, LabelSource)>) -> Self {
        let (scheme, resolution, depth) = match t.scheme() {
            Scheme::Kuhn { resolution } => ("kuhn", resolution, 0),
            Scheme::Barycentric { resolution, depth } => ("barycentric", resolution, depth),
        };
        let vertices = (0..t.vertex_count())
            .map(|id| VertexRecord {
                id,
                exact: t.exact_vertex(id).iter().map(|c| c.to_string()).collect(),
                coords: t.point(&id).to_dense(t.dim() + 1).into_iter().map(Sig17).collect(),
            })
            .collect();
        let (labelling, labels) = match labels {
            Some((lab, source)) => (
                Some(source),
                Some((0..t.vertex_count()).map(|v| lab.get(&v).unwrap_or(0)).collect()),
            ),
            None => (None, None),
        };
        TriangulationDump {
            schema_version: SCHEMA_VERSION,
            dim: t.dim(),
            scheme: scheme.to_string(),
            resolution,
            depth,
            vertices,
            cells: t.cells().to_vec(),
            labelling,
            labels,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ViolationRecord {
    pub vertex: usize,
    pub exact: Vec<String>,
    pub label: Option<usize>,
    pub carrier: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct LabelReport {
    pub schema_version: u32,
    pub valid: bool,
    pub vertices_checked: usize,
    pub first_violation: Option<ViolationRecord>,
    /// Only computed for valid labellings.
    pub full_cells: Option<u64>,
}

fn is_zero(exact: &str) -> bool {
    exact.trim() == "0" || exact.trim().starts_with("0/")
}

/// Checks a label dump: every vertex labelled from its carrier (read off
/// the exact coordinates), then counts full cells.
pub fn verify_dump(dump: &TriangulationDump) -> Result<LabelReport, String> {
    let labels = dump.labels.as_ref().ok_or("dump has no `labels` array")?;
    if labels.len() != dump.vertices.len() {
        return Err(format!("{} labels for {} vertices", labels.len(), dump.vertices.len()));
    }
    let mut first_violation = None;
    for (pos, v) in dump.vertices.iter().enumerate() {
        if v.id != pos {
            return Err(format!(
                "vertex ids must be 0..n in order; found {} at position {pos}",
                v.id
            ));
        }
        if v.exact.len() != dump.dim + 1 {
            return Err(format!(
                "vertex {} has {} coordinates, expected {}",
                v.id,
                v.exact.len(),
                dump.dim + 1
            ));
        }
        let carrier: Vec<usize> = v
            .exact
            .iter()
            .enumerate()
            .filter(|(_, c)| !is_zero(c))
            .map(|(i, _)| i + 1)
            .collect();
        let label = labels[pos];
        if !carrier.contains(&label) {
            first_violation = Some(ViolationRecord {
                vertex: v.id,
                exact: v.exact.clone(),
                label: (label != 0).then_some(label),
                carrier,
            });
            break;
        }
    }
    let mut full_cells = None;
    if first_violation.is_none() {
        let mut count = 0;
        for c in &dump.cells {
            if c.len() != dump.dim + 1 || c.iter().any(|&v| v >= labels.len()) {
                return Err(format!("malformed cell {c:?}"));
            }
            let ls: Vec<usize> = c.iter().map(|&v| labels[v]).collect();
            count += is_full(&ls) as u64;
        }
        full_cells = Some(count);
    }
    Ok(LabelReport {
        schema_version: SCHEMA_VERSION,
        valid: first_violation.is_none(),
        vertices_checked: dump.vertices.len(),
        first_violation,
        full_cells,
    })
}
