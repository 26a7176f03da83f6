//! Graph and covering file formats (JSON), plus the float-exact JSON emitter
//! used by the CLI.
//!
//! Graph files:
//! `{"vertices":[{"id":"v0","mu":1.0}],"edges":[{"u":"v0","v":"v1","b":1.0,"theta":0.0}],"potential":{"v0":-1.0}}`
//! θ, per-edge `sigma` overrides, and the potential are optional (default 0).
//! Unknown keys are rejected. A `family` key embeds the generating family so
//! that loaded truncations keep their certificates; with explicit vertex and
//! edge lists the lists are authoritative and the family is carried as
//! metadata.
//!
//! Covering files: `{"m":2,"cells":[{"vertices":["x2,1",...],"edges":[["x2,1","x2,2"],...]}]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::covering::{CoveringCell, GoodCovering};
use crate::families::{FamilyKind, LayeredFamilySpec};
use crate::graph::{GraphBuilder, GraphBundle, GraphError, PotentialAssignment, VertexId};
use crate::metrics::EdgeLengthAssignment;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Family(#[from] crate::families::FamilyError),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: VertexId,
    mu: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeEntry {
    u: VertexId,
    v: VertexId,
    b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyEntry {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<crate::families::RowPowerLaw>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<crate::families::RowPowerLaw>,
    rows: u32,
}

impl FamilyEntry {
    fn to_kind(&self) -> Result<FamilyKind, IoError> {
        match self.kind.as_str() {
            "ex51" => {
                let (Some(alpha), Some(beta)) = (self.alpha, self.beta) else {
                    return Err(IoError::Invalid("ex51 needs alpha and beta".into()));
                };
                Ok(FamilyKind::Triangular { alpha, beta })
            }
            "ex52" => Ok(FamilyKind::Bipartite),
            "path" => Ok(FamilyKind::Path),
            "custom" => {
                let (Some(b), Some(mu)) = (self.b, self.mu) else {
                    return Err(IoError::Invalid("custom needs b and mu power laws".into()));
                };
                Ok(FamilyKind::Custom { b, mu })
            }
            other => Err(IoError::Invalid(format!("unknown family kind {other}"))),
        }
    }

    fn from_kind(kind: &FamilyKind, rows: u32) -> Self {
        let mut entry = FamilyEntry {
            kind: String::new(),
            alpha: None,
            beta: None,
            b: None,
            mu: None,
            rows,
        };
        match kind {
            FamilyKind::Triangular { alpha, beta } => {
                entry.kind = "ex51".into();
                entry.alpha = Some(*alpha);
                entry.beta = Some(*beta);
            }
            FamilyKind::Bipartite => entry.kind = "ex52".into(),
            FamilyKind::Path => entry.kind = "path".into(),
            FamilyKind::Custom { b, mu } => {
                entry.kind = "custom".into();
                entry.b = Some(*b);
                entry.mu = Some(*mu);
            }
        }
        entry
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    vertices: Vec<VertexEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    potential: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<FamilyEntry>,
}

/// A parsed graph input: the bundle, any explicit edge lengths, and the
/// generating family when the file declares one.
pub struct LoadedGraph {
    pub bundle: GraphBundle<f64>,
    pub sigma_override: Option<EdgeLengthAssignment<f64>>,
    pub family: Option<(LayeredFamilySpec, u32)>,
}

/// Parses a graph file. With only a `family` key the truncation is generated;
/// with explicit lists those are built (and the family, if also present, is
/// attached for certificates and frontier annotation).
pub fn load_graph(json: &str) -> Result<LoadedGraph, IoError> {
    let file: GraphFile = serde_json::from_str(json)?;
    let family = match file.family.as_ref() {
        Some(f) => {
            let spec = LayeredFamilySpec { kind: f.to_kind()? };
            spec.validate_params()?;
            Some((spec, f.rows))
        }
        None => None,
    };

    if file.vertices.is_empty() {
        let Some((spec, rows)) = &family else {
            return Err(IoError::Invalid(
                "file has neither vertices nor a family".into(),
            ));
        };
        if file.potential.is_some() || !file.edges.is_empty() {
            return Err(IoError::Invalid(
                "family-only files cannot carry edges or potentials".into(),
            ));
        }
        let bundle = spec.generate(*rows)?;
        return Ok(LoadedGraph {
            bundle,
            sigma_override: None,
            family,
        });
    }

    let mut builder = GraphBuilder::<f64>::new();
    for v in &file.vertices {
        builder.vertex(v.id.clone(), v.mu);
    }
    for e in &file.edges {
        builder.edge_full(e.u.clone(), e.v.clone(), e.b, e.theta.unwrap_or(0.0), e.sigma);
    }
    let built = builder.build()?;
    let potential = match &file.potential {
        None => PotentialAssignment::zero(&built.graph),
        Some(map) => {
            let mut values = vec![0.0; built.graph.vertex_count()];
            for (key, &w) in map {
                let id: VertexId = key.parse().expect("infallible");
                let i = built
                    .graph
                    .idx(&id)
                    .ok_or_else(|| IoError::Invalid(format!("potential at unknown vertex {key}")))?;
                values[i] = w;
            }
            PotentialAssignment::from_values(&built.graph, values)?
        }
    };
    let sigma_override = if built.sigma_override.iter().any(Option::is_some) {
        let defaults = crate::metrics::sigma1_default(&built.graph)
            .map_err(|e| IoError::Invalid(format!("sigma defaults unavailable: {e}")))?;
        let values = built
            .sigma_override
            .iter()
            .enumerate()
            .map(|(e, s)| s.unwrap_or_else(|| defaults.len(e)))
            .collect();
        Some(
            EdgeLengthAssignment::from_values(&built.graph, values)
                .map_err(|e| IoError::Invalid(e.to_string()))?,
        )
    } else {
        None
    };
    let mut bundle = GraphBundle::new(built.graph, built.theta, potential);
    if let Some((spec, rows)) = &family {
        bundle.truncation_rows = Some(*rows);
        for id in spec.frontier_labels(*rows) {
            let i = bundle.graph.idx(&id).ok_or_else(|| {
                IoError::Invalid(format!("family frontier vertex {id} missing from lists"))
            })?;
            bundle.frontier.push(i);
        }
    }
    Ok(LoadedGraph {
        bundle,
        sigma_override,
        family,
    })
}

/// Serializes a bundle (with optional explicit lengths and family metadata)
/// into the graph file schema.
pub fn save_graph(
    bundle: &GraphBundle<f64>,
    sigma: Option<&EdgeLengthAssignment<f64>>,
    family: Option<(&LayeredFamilySpec, u32)>,
) -> Result<String, IoError> {
    let g = &bundle.graph;
    let vertices = (0..g.vertex_count())
        .map(|i| VertexEntry {
            id: g.label(i).clone(),
            mu: g.mu(i),
        })
        .collect();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| EdgeEntry {
            u: g.label(edge.u).clone(),
            v: g.label(edge.v).clone(),
            b: edge.b,
            theta: Some(bundle.theta.canonical(e)).filter(|t| *t != 0.0),
            sigma: sigma.map(|s| s.len(e)),
        })
        .collect();
    let potential = if bundle.potential.values().iter().any(|&w| w != 0.0) {
        Some(
            (0..g.vertex_count())
                .map(|i| (g.label(i).to_string(), bundle.potential.get(i)))
                .collect(),
        )
    } else {
        None
    };
    let file = GraphFile {
        vertices,
        edges,
        potential,
        family: family.map(|(spec, rows)| FamilyEntry::from_kind(&spec.kind, rows)),
    };
    to_json_string(&file)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringCellEntry {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringFile {
    m: u32,
    cells: Vec<CoveringCellEntry>,
}

/// Parses a covering file against a host graph; coverings are validated by
/// the caller, never repaired.
pub fn load_covering(
    graph: &crate::graph::WeightedGraph<f64>,
    json: &str,
) -> Result<GoodCovering, IoError> {
    let file: CoveringFile = serde_json::from_str(json)?;
    let mut cells = Vec::with_capacity(file.cells.len());
    for cell in &file.cells {
        let mut vertices = Vec::with_capacity(cell.vertices.len());
        for id in &cell.vertices {
            vertices.push(
                graph
                    .idx(id)
                    .ok_or_else(|| IoError::Invalid(format!("unknown cell vertex {id}")))?,
            );
        }
        let mut edges = Vec::with_capacity(cell.edges.len());
        for (u, v) in &cell.edges {
            let ui = graph
                .idx(u)
                .ok_or_else(|| IoError::Invalid(format!("unknown cell vertex {u}")))?;
            let vi = graph
                .idx(v)
                .ok_or_else(|| IoError::Invalid(format!("unknown cell vertex {v}")))?;
            edges.push(graph.edge_between(ui, vi).ok_or_else(|| {
                IoError::Invalid(format!("cell edge {u} ~ {v} is not a graph edge"))
            })?);
        }
        cells.push(CoveringCell { vertices, edges });
    }
    Ok(GoodCovering { cells, m: file.m })
}

/// Serializes with every float written at 17 significant digits, which
/// round-trips `f64` exactly.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

#[derive(Clone, Copy)]
struct Float17;

impl serde_json::ser::Formatter for Float17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{:.16e}", value as f64)
    }
}
