use std::collections::VecDeque;

use rayon::prelude::*;

use super::{Graph, VertexId};
use crate::error::{Error, Result};

/// Distance sentinel for unreachable vertices.
pub const INFINITY: u32 = u32::MAX;

/// Exact hop-count distances from `source`; unreachable vertices get
/// [`INFINITY`].
pub fn bfs_distances(g: &Graph, source: VertexId) -> Result<Vec<u32>> {
    g.check_vertex(source)?;
    let mut dist = vec![INFINITY; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &w in g.neighbors(u) {
            if dist[w as usize] == INFINITY {
                dist[w as usize] = du + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// Reusable BFS state for large graphs: only the touched entries are reset
/// between runs, so bounded searches cost time proportional to the explored
/// region rather than the whole graph.
#[derive(Clone, Debug)]
pub struct BfsWorkspace {
    dist: Vec<u32>,
    order: Vec<VertexId>,
}

impl BfsWorkspace {
    pub fn new(vertex_count: usize) -> Self {
        BfsWorkspace {
            dist: vec![INFINITY; vertex_count],
            order: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.dist[v as usize] = INFINITY;
        }
        self.order.clear();
    }

    /// Runs BFS from `sources` up to distance `radius` (inclusive). When
    /// `targets` is given, the search stops after the layer in which the last
    /// target is settled.
    pub fn run(
        &mut self,
        g: &Graph,
        sources: &[VertexId],
        radius: u32,
        targets: Option<&[VertexId]>,
    ) {
        self.reset();
        for &s in sources {
            if self.dist[s as usize] == INFINITY {
                self.dist[s as usize] = 0;
                self.order.push(s);
            }
        }
        let unsettled = |ws: &Self| match targets {
            Some(ts) => ts.iter().filter(|&&t| ws.dist[t as usize] == INFINITY).count(),
            None => usize::MAX,
        };
        let mut remaining = unsettled(self);
        let mut head = 0;
        let mut depth = 0;
        while head < self.order.len() && remaining > 0 && depth < radius {
            let layer_end = self.order.len();
            while head < layer_end {
                let u = self.order[head];
                head += 1;
                for &w in g.neighbors(u) {
                    if self.dist[w as usize] == INFINITY {
                        self.dist[w as usize] = depth + 1;
                        self.order.push(w);
                    }
                }
            }
            depth += 1;
            if targets.is_some() {
                remaining = unsettled(self);
            }
        }
    }

    pub fn dist(&self, v: VertexId) -> u32 {
        self.dist[v as usize]
    }

    pub fn distances(&self) -> &[u32] {
        &self.dist
    }

    /// Vertices reached by the last run, in BFS order.
    pub fn reached(&self) -> &[VertexId] {
        &self.order
    }
}

/// Eager all-pairs distance table, one BFS row per source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    /// All-pairs distances; disconnected pairs hold [`INFINITY`].
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let rows: Vec<Vec<u32>> = (0..n as VertexId)
            .into_par_iter()
            .map(|s| bfs_distances(g, s).expect("source in range"))
            .collect();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            data.extend_from_slice(&row);
        }
        DistanceMatrix { n, data }
    }

    /// All-pairs distances of a graph that must be connected.
    pub fn connected(g: &Graph) -> Result<Self> {
        g.require_connected("distance matrix")?;
        Ok(Self::new(g))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, u: VertexId, v: VertexId) -> u32 {
        self.data[u as usize * self.n + v as usize]
    }

    pub fn row(&self, u: VertexId) -> &[u32] {
        &self.data[u as usize * self.n..(u as usize + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }
}

/// Hausdorff distance between vertex sets `a` and `b` of one component.
pub fn hausdorff_distance(g: &Graph, a: &[VertexId], b: &[VertexId]) -> Result<u32> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("hausdorff distance of an empty vertex set"));
    }
    for &v in a.iter().chain(b) {
        g.check_vertex(v)?;
    }
    let mut ws = BfsWorkspace::new(g.vertex_count());
    ws.run(g, a, INFINITY, Some(b));
    let b_to_a = b.iter().map(|&v| ws.dist(v)).max().unwrap();
    ws.run(g, b, INFINITY, Some(a));
    let a_to_b = a.iter().map(|&v| ws.dist(v)).max().unwrap();
    let h = a_to_b.max(b_to_a);
    if h == INFINITY {
        return Err(Error::input("vertex sets lie in different components"));
    }
    Ok(h)
}
