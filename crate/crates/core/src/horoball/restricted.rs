use serde_json::{Map, Value};

use super::segments::{classify_by_level, shape_report, SegmentClassification, ShapeReport};
use crate::cayley::DEFAULT_MAX_VERTICES;
use crate::error::{Error, Result};
use crate::graph::{
    enumerate_geodesics_with_row, DistanceMatrix, Graph, GraphBuilder, Path, VertexId,
};

/// Largest supported depth; keeps `2^depth` within `u32`.
pub const MAX_DEPTH: u32 = 30;

/// `ceil(d / 2^level)`: length of the shortest horizontal path at `level`
/// between points at base distance `d`.
pub fn level_distance(d: u32, level: u32) -> u32 {
    if level >= 32 {
        return u32::from(d > 0);
    }
    ((d as u64 + (1u64 << level) - 1) >> level) as u32
}

pub(crate) fn check_depth(depth: u32) -> Result<()> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::input(format!("depth must be in 1..={MAX_DEPTH}, got {depth}")));
    }
    Ok(())
}

/// Horizontal edges of every level `1..=depth` over a base with the given
/// distance table, as `(level, u, v)` with `u < v` local ids.
pub(crate) fn horizontal_pairs(dist: &DistanceMatrix, depth: u32) -> Vec<(u32, VertexId, VertexId)> {
    let n = dist.len() as VertexId;
    let mut out = Vec::new();
    for u in 0..n {
        let row = dist.row(u);
        for v in u + 1..n {
            let d = row[v as usize];
            // first level whose reach 2^k covers d
            let first = (1..=depth).find(|&k| d <= 1 << k);
            if let Some(first) = first {
                for k in first..=depth {
                    out.push((k, u, v));
                }
            }
        }
    }
    out
}

/// The depth-`n` horoball over a connected base graph, levels `0..=n`.
///
/// Vertex `(v, k)` has carrier id `k * |base| + v`.
#[derive(Clone, Debug)]
pub struct RestrictedHoroball {
    base: Graph,
    base_dist: DistanceMatrix,
    depth: u32,
    carrier: Graph,
}

impl RestrictedHoroball {
    pub fn new(base: Graph, depth: u32) -> Result<Self> {
        check_depth(depth)?;
        base.require_connected("horoball base")?;
        let b = base.vertex_count();
        let total = b as u128 * (depth as u128 + 1);
        if total > DEFAULT_MAX_VERTICES as u128 {
            return Err(Error::resource(format!(
                "horoball of depth {depth} over {b} vertices has {total} vertices, over the budget of {DEFAULT_MAX_VERTICES}"
            )));
        }
        let base_dist = DistanceMatrix::new(&base);
        let id = |v: VertexId, k: u32| k * b as u32 + v;
        let mut gb = GraphBuilder::new(b * (depth as usize + 1));
        for k in 0..=depth {
            for v in base.vertices() {
                if let Some(l) = base.label(v) {
                    gb.set_label(id(v, k), format!("({l},{k})"));
                } else {
                    gb.set_label(id(v, k), format!("({v},{k})"));
                }
                if k < depth {
                    gb.add_edge(id(v, k), id(v, k + 1))?;
                }
            }
        }
        for (u, v) in base.edges() {
            gb.add_edge(id(u, 0), id(v, 0))?;
        }
        for (k, u, v) in horizontal_pairs(&base_dist, depth) {
            gb.add_edge(id(u, k), id(v, k))?;
        }
        gb.set_metadata("depth", Value::from(depth));
        Ok(RestrictedHoroball {
            base,
            base_dist,
            depth,
            carrier: gb.build(),
        })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn carrier(&self) -> &Graph {
        &self.carrier
    }

    pub fn base_distance(&self, x: VertexId, y: VertexId) -> u32 {
        self.base_dist.get(x, y)
    }

    pub fn base_distances(&self) -> &DistanceMatrix {
        &self.base_dist
    }

    pub fn vertex(&self, base: VertexId, level: u32) -> VertexId {
        debug_assert!(level <= self.depth && self.base.contains(base));
        level * self.base.vertex_count() as u32 + base
    }

    pub fn base_of(&self, v: VertexId) -> VertexId {
        v % self.base.vertex_count() as u32
    }

    pub fn level_of(&self, v: VertexId) -> u32 {
        v / self.base.vertex_count() as u32
    }

    /// Carrier ids of every vertex at `level`.
    pub fn level_vertices(&self, level: u32) -> Vec<VertexId> {
        self.base.vertices().map(|v| self.vertex(v, level)).collect()
    }

    /// Per-vertex JSON annotation used by the graph file format.
    pub fn vertex_meta(&self, v: VertexId) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("kind".into(), Value::from("horo"));
        m.insert("alpha".into(), Value::from(0));
        m.insert("base".into(), Value::from(self.base_of(v)));
        m.insert("level".into(), Value::from(self.level_of(v)));
        m
    }

    /// Best crossing level and the resulting distance between `(x, k)` and
    /// `(y, l)`: the smallest optimal level whose crossing has length at most
    /// 3, or the deepest level.
    fn crossing(&self, x: VertexId, k: u32, y: VertexId, l: u32) -> (u32, u32) {
        let d = self.base_distance(x, y);
        let cost = |m: u32| (m - k) + (m - l) + level_distance(d, m);
        let best = (k.max(l)..=self.depth).map(cost).min().unwrap();
        let m = (k.max(l)..=self.depth)
            .find(|&m| cost(m) == best && (level_distance(d, m) <= 3 || m == self.depth))
            .unwrap();
        (m, best)
    }

    /// Closed-form distance between two carrier vertices.
    pub fn distance(&self, a: VertexId, b: VertexId) -> u32 {
        let (x, k) = (self.base_of(a), self.level_of(a));
        let (y, l) = (self.base_of(b), self.level_of(b));
        self.crossing(x, k, y, l).1
    }

    /// A geodesic from `a` to `b` that climbs to a single crossing level,
    /// crosses horizontally and descends.
    pub fn normal_form_geodesic(&self, a: VertexId, b: VertexId) -> Result<GeodesicNormalForm> {
        self.carrier.check_vertex(a)?;
        self.carrier.check_vertex(b)?;
        let (x, k) = (self.base_of(a), self.level_of(a));
        let (y, l) = (self.base_of(b), self.level_of(b));
        let (m, _) = self.crossing(x, k, y, l);
        let ascent = Path::from_trusted((k..=m).map(|j| self.vertex(x, j)).collect());
        let descent = Path::from_trusted((l..=m).rev().map(|j| self.vertex(y, j)).collect());
        let base_path = enumerate_geodesics_with_row(&self.base, x, y, self.base_dist.row(y), 1)?
            .paths
            .swap_remove(0);
        let step = 1usize << m;
        let bv = base_path.vertices();
        let mut waypoints: Vec<VertexId> = bv.iter().step_by(step).copied().collect();
        if (bv.len() - 1) % step != 0 {
            waypoints.push(*bv.last().unwrap());
        }
        let crossing = Path::from_trusted(waypoints.into_iter().map(|v| self.vertex(v, m)).collect());
        Ok(GeodesicNormalForm {
            ascent,
            crossing,
            descent,
            top_level: m,
        })
    }

    pub fn classify_segments(&self, p: &Path) -> Result<SegmentClassification> {
        p.validate(&self.carrier)?;
        Ok(classify_by_level(p, |v| self.level_of(v)))
    }

    /// Checks the shape law of geodesics on `p`, which must be a geodesic.
    pub fn verify_geodesic_shape(&self, p: &Path) -> Result<ShapeReport> {
        p.validate(&self.carrier)?;
        let d = self.distance(p.start(), p.end());
        if p.len() != d as usize {
            return Err(Error::precondition(format!(
                "path of length {} is not a geodesic (endpoints are {d} apart)",
                p.len()
            )));
        }
        Ok(shape_report(p, |v| self.level_of(v), self.depth))
    }
}

/// Ascent, single horizontal crossing at `top_level`, descent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicNormalForm {
    pub ascent: Path,
    pub crossing: Path,
    pub descent: Path,
    pub top_level: u32,
}

impl GeodesicNormalForm {
    pub fn path(&self) -> Path {
        let mut p = self.ascent.clone();
        p.concat(&self.crossing).expect("segments share endpoints");
        p.concat(&self.descent).expect("segments share endpoints");
        p
    }

    pub fn len(&self) -> usize {
        self.ascent.len() + self.crossing.len() + self.descent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
