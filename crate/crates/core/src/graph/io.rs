//! Graph file format and DOT export.
//!
//! The JSON document is written compactly on a single line followed by a
//! newline, with fields in this order:
//!
//! ```text
//! {"version":1,"vertices":[{"id":0,"label":"e","meta":{..}},..],"edges":[[0,1],..],"metadata":{..}}
//! ```
//!
//! `label` and `meta` are omitted when absent. Vertices appear in id order,
//! edges as `[u, v]` with `u < v` in lexicographic order, and object keys are
//! sorted. Equal graphs therefore serialize to identical bytes.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{Graph, GraphBuilder, VertexId};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: u32,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[VertexId; 2]>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Map<String, Value>>,
}

/// Per-vertex metadata callback used by constructions that annotate their
/// carrier (e.g. horoball levels).
pub type VertexMeta<'a> = &'a dyn Fn(VertexId) -> Map<String, Value>;

impl GraphDocument {
    pub fn from_graph(g: &Graph, meta: Option<VertexMeta<'_>>) -> Self {
        GraphDocument {
            version: FORMAT_VERSION,
            vertices: g
                .vertices()
                .map(|v| VertexRecord {
                    id: v,
                    label: g.label(v).map(str::to_owned),
                    meta: meta.map(|f| f(v)),
                })
                .collect(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
            metadata: g.metadata.clone().into_iter().collect(),
        }
    }

    pub fn into_graph(self) -> Result<Graph> {
        if self.version != FORMAT_VERSION {
            return Err(Error::input(format!(
                "unsupported graph format version {} (expected {FORMAT_VERSION})",
                self.version
            )));
        }
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut b = GraphBuilder::new(n);
        for rec in &self.vertices {
            let id = rec.id as usize;
            if id >= n || seen[id] {
                return Err(Error::input(format!(
                    "vertex ids must be exactly 0..{n} without repeats (bad id {})",
                    rec.id
                )));
            }
            seen[id] = true;
            if let Some(l) = &rec.label {
                b.set_label(rec.id, l.clone());
            }
        }
        let mut edges = self.edges;
        for &[u, v] in &edges {
            if u >= v {
                return Err(Error::input(format!("edge [{u}, {v}] must satisfy u < v")));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!("duplicate edge [{}, {}]", w[0][0], w[0][1])));
        }
        for [u, v] in edges {
            b.add_edge(u, v)?;
        }
        for (k, v) in self.metadata {
            b.set_metadata(k, v);
        }
        Ok(b.build())
    }
}

pub fn to_json_string(g: &Graph, meta: Option<VertexMeta<'_>>) -> String {
    let mut s = serde_json::to_string(&GraphDocument::from_graph(g, meta))
        .expect("graph documents always serialize");
    s.push('\n');
    s
}

pub fn from_json_str(s: &str) -> Result<Graph> {
    let doc: GraphDocument = serde_json::from_str(s)?;
    doc.into_graph()
}

pub fn read_json(path: &FsPath) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_json_str(&text)
}

pub fn write_json(g: &Graph, meta: Option<VertexMeta<'_>>, path: &FsPath) -> Result<()> {
    std::fs::write(path, to_json_string(g, meta)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

const LEVEL_COLORS: [&str; 8] = [
    "black", "blue", "darkgreen", "orange", "red", "purple", "brown", "deeppink",
];

/// Undirected DOT rendering. When `level` is given each node carries a
/// `level` attribute and a color keyed by it.
pub fn to_dot(g: &Graph, name: &str, level: Option<&dyn Fn(VertexId) -> u32>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", escape(name));
    for v in g.vertices() {
        let label = g.label(v).map(str::to_owned).unwrap_or_else(|| v.to_string());
        let _ = write!(out, "  {v} [label=\"{}\"", escape(&label));
        if let Some(f) = level {
            let l = f(v);
            let _ = write!(out, ", level={l}, color=\"{}\"", LEVEL_COLORS[l as usize % LEVEL_COLORS.len()]);
        }
        out.push_str("];\n");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
