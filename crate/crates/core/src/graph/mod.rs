//! Finite simple undirected graphs with an exact hop-count metric.
//!
//! Every construction in the crate (Cayley balls, horoballs, augmented spaces,
//! Rips graphs) produces a [`Graph`]. Graphs are immutable once built; use
//! [`GraphBuilder`] to assemble one.

mod geodesics;
pub mod generators;
pub mod io;
mod metric;
mod rips;

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};

pub use geodesics::{enumerate_geodesics, enumerate_geodesics_with_row, GeodesicSet};
pub use metric::{
    bfs_distances, hausdorff_distance, BfsWorkspace, DistanceMatrix, INFINITY,
};
pub use rips::rips_graph;

/// Dense vertex identifier, `0..vertex_count`.
pub type VertexId = u32;

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    labels: Vec<Option<String>>,
    edge_count: usize,
    pub metadata: BTreeMap<String, Value>,
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Neighbors of `v`, sorted by id.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        (v as usize) < self.adj.len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains(u) && self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels[v as usize].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.adj.len() as VertexId
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| {
            let u = u as VertexId;
            ns.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::input(format!(
                "unknown vertex id {v} (graph has {} vertices)",
                self.vertex_count()
            )))
        }
    }

    /// Connected-component index of every vertex, numbered in order of first
    /// appearance.
    pub fn components(&self) -> Vec<u32> {
        let n = self.vertex_count();
        let mut comp = vec![u32::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s as VertexId);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Fails with an input error unless the graph is nonempty and connected.
    pub fn require_connected(&self, what: &str) -> Result<()> {
        if self.is_empty() {
            return Err(Error::input(format!("{what}: graph is empty")));
        }
        if !self.is_connected() {
            return Err(Error::input(format!(
                "{what}: graph is disconnected, metric undefined across components"
            )));
        }
        Ok(())
    }

    /// Induced subgraph on `vertices` (renumbered in the given order) plus
    /// the map from new ids back to ids of `self`.
    pub fn induced(&self, vertices: &[VertexId]) -> Result<(Graph, Vec<VertexId>)> {
        let mut local = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if local[v as usize] != u32::MAX {
                return Err(Error::input(format!("vertex {v} listed twice")));
            }
            local[v as usize] = i as u32;
        }
        let mut b = GraphBuilder::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = local[w as usize];
                if j != u32::MAX && (i as u32) < j {
                    b.add_edge(i as VertexId, j)?;
                }
            }
            if let Some(l) = self.label(v) {
                b.set_label(i as VertexId, l);
            }
        }
        Ok((b.build(), vertices.to_vec()))
    }
}

/// Collects edges, then sorts and deduplicates adjacency lists on
/// [`build`](GraphBuilder::build).
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    adj: Vec<Vec<VertexId>>,
    labels: Vec<Option<String>>,
    metadata: BTreeMap<String, Value>,
}

impl GraphBuilder {
    pub fn new(vertex_count: usize) -> Self {
        GraphBuilder {
            adj: vec![Vec::new(); vertex_count],
            labels: vec![None; vertex_count],
            metadata: BTreeMap::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self, label: Option<String>) -> VertexId {
        self.adj.push(Vec::new());
        self.labels.push(label);
        (self.adj.len() - 1) as VertexId
    }

    /// Adds the undirected edge `{u, v}`. Repeated edges collapse.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        let n = self.adj.len();
        if u as usize >= n || v as usize >= n {
            return Err(Error::input(format!(
                "edge ({u}, {v}) references a vertex outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::input(format!("self-loop at vertex {u}")));
        }
        self.adj[u as usize].push(v);
        self.adj[v as usize].push(u);
        Ok(())
    }

    pub fn set_label(&mut self, v: VertexId, label: impl Into<String>) {
        self.labels[v as usize] = Some(label.into());
    }

    pub fn set_metadata(&mut self, key: impl Into<String>, value: Value) {
        self.metadata.insert(key.into(), value);
    }

    pub fn build(mut self) -> Graph {
        let mut twice = 0;
        for ns in &mut self.adj {
            ns.sort_unstable();
            ns.dedup();
            twice += ns.len();
        }
        Graph {
            adj: self.adj,
            labels: self.labels,
            edge_count: twice / 2,
            metadata: self.metadata,
        }
    }
}

/// A walk along edges of some carrier graph. Length counts edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Path {
    vertices: Vec<VertexId>,
}

impl Path {
    /// Validates that consecutive vertices are adjacent in `g`.
    pub fn new(g: &Graph, vertices: Vec<VertexId>) -> Result<Path> {
        let path = Path { vertices };
        path.validate(g)?;
        Ok(path)
    }

    pub fn single(v: VertexId) -> Path {
        Path { vertices: vec![v] }
    }

    pub(crate) fn from_trusted(vertices: Vec<VertexId>) -> Path {
        debug_assert!(!vertices.is_empty());
        Path { vertices }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::input("a path needs at least one vertex"));
        }
        for &v in &self.vertices {
            g.check_vertex(v)?;
        }
        for (i, w) in self.vertices.windows(2).enumerate() {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::input(format!(
                    "path step {i}: {} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    /// Subpath between vertex positions `from..=to`.
    pub fn subpath(&self, from: usize, to: usize) -> Path {
        Path {
            vertices: self.vertices[from..=to].to_vec(),
        }
    }

    /// Appends `other`, whose first vertex must equal this path's last.
    pub fn concat(&mut self, other: &Path) -> Result<()> {
        if other.start() != self.end() {
            return Err(Error::input(format!(
                "cannot join path ending at {} with one starting at {}",
                self.end(),
                other.start()
            )));
        }
        self.vertices.extend_from_slice(&other.vertices[1..]);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_rejects_self_loops_and_dedups() {
        let mut b = GraphBuilder::new(3);
        assert!(b.add_edge(1, 1).is_err());
        assert!(b.add_edge(0, 3).is_err());
        b.add_edge(0, 1).unwrap();
        b.add_edge(1, 0).unwrap();
        b.add_edge(1, 2).unwrap();
        let g = b.build();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = generators::random_connected(30, 0.15, 7);
        for u in g.vertices() {
            for &v in g.neighbors(u) {
                assert!(g.neighbors(v).contains(&u));
                assert_ne!(u, v);
            }
        }
    }

    #[test]
    fn components_detect_disconnection() {
        let mut b = GraphBuilder::new(4);
        b.add_edge(0, 1).unwrap();
        b.add_edge(2, 3).unwrap();
        let g = b.build();
        assert_eq!(g.components(), vec![0, 0, 1, 1]);
        assert!(g.require_connected("test").is_err());
    }

    #[test]
    fn path_validation() {
        let g = generators::cycle(5);
        assert!(Path::new(&g, vec![0, 1, 2]).is_ok());
        assert!(Path::new(&g, vec![0, 2]).is_err());
        assert!(Path::new(&g, vec![]).is_err());
        let mut p = Path::new(&g, vec![0, 1]).unwrap();
        p.concat(&Path::new(&g, vec![1, 2, 3]).unwrap()).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);
        assert_eq!(p.len(), 3);
        assert!(p.concat(&Path::single(0)).is_err());
    }

    #[test]
    fn induced_subgraph_renumbers() {
        let g = generators::cycle(6);
        let (h, map) = g.induced(&[4, 5, 0]).unwrap();
        assert_eq!(map, vec![4, 5, 0]);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(0, 1) && h.has_edge(1, 2));
    }
}
