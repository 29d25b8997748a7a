use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use super::restricted::{check_depth, horizontal_pairs};
use super::segments::{classify_by_level, SegmentClassification};
use crate::cayley::CosetSubgraph;
use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Graph, GraphBuilder, Path, VertexId};

/// A connected subgraph of the base: `graph` has local vertex `i` standing
/// for base vertex `members[i]`, and its own metric defines the horoball.
#[derive(Clone, Debug)]
pub struct Parabolic {
    pub members: Vec<VertexId>,
    pub graph: Graph,
}

impl Parabolic {
    /// The subgraph of `base` induced on `members`.
    pub fn induced(base: &Graph, members: Vec<VertexId>) -> Result<Parabolic> {
        let (graph, members) = base.induced(&members)?;
        Ok(Parabolic { members, graph })
    }
}

impl From<&CosetSubgraph> for Parabolic {
    fn from(c: &CosetSubgraph) -> Self {
        Parabolic {
            members: c.members.clone(),
            graph: c.graph.clone(),
        }
    }
}

/// Where an augmented-space vertex comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// A vertex of the base graph; also level 0 of every horoball through it.
    Gamma { base: VertexId },
    /// Level `level >= 1` above the `local`-th member of parabolic `alpha`.
    Horo {
        alpha: u32,
        local: VertexId,
        base: VertexId,
        level: u32,
    },
}

/// A base graph with a depth-`n` horoball glued along each parabolic.
///
/// Base vertices keep their ids. Parabolic `alpha` then contributes a block
/// of `|members| * n` vertices, level by level.
#[derive(Clone, Debug)]
pub struct AugmentedSpace {
    base_count: usize,
    depth: u32,
    family: Vec<Parabolic>,
    offsets: Vec<usize>,
    carrier: Graph,
}

/// Builds the depth-`n` augmentation of `base` over `family`.
pub fn build_augmented(
    base: &Graph,
    family: Vec<Parabolic>,
    depth: u32,
    max_vertices: usize,
) -> Result<AugmentedSpace> {
    check_depth(depth)?;
    for (alpha, p) in family.iter().enumerate() {
        validate_parabolic(base, p).map_err(|e| Error::input(format!("parabolic {alpha}: {e}")))?;
    }
    let total: u128 = base.vertex_count() as u128
        + family.iter().map(|p| p.members.len() as u128).sum::<u128>() * depth as u128;
    if total > max_vertices as u128 {
        return Err(Error::resource(format!(
            "augmented space of depth {depth} has {total} vertices, over the budget of {max_vertices}"
        )));
    }

    let mut offsets = Vec::with_capacity(family.len());
    let mut next = base.vertex_count();
    for p in &family {
        offsets.push(next);
        next += p.members.len() * depth as usize;
    }

    let mut gb = GraphBuilder::new(next);
    for v in base.vertices() {
        if let Some(l) = base.label(v) {
            gb.set_label(v, l);
        }
    }
    for (u, v) in base.edges() {
        gb.add_edge(u, v)?;
    }
    let blocks: Vec<Vec<(VertexId, VertexId)>> = family
        .par_iter()
        .zip(offsets.par_iter())
        .map(|(p, &offset)| {
            let size = p.members.len();
            let id = |local: VertexId, level: u32| {
                if level == 0 {
                    p.members[local as usize]
                } else {
                    (offset + (level as usize - 1) * size + local as usize) as VertexId
                }
            };
            let mut edges = Vec::new();
            for local in 0..size as VertexId {
                for k in 0..depth {
                    edges.push((id(local, k), id(local, k + 1)));
                }
            }
            let dist = DistanceMatrix::new(&p.graph);
            for (k, u, v) in horizontal_pairs(&dist, depth) {
                edges.push((id(u, k), id(v, k)));
            }
            edges
        })
        .collect();
    for edges in blocks {
        for (u, v) in edges {
            gb.add_edge(u, v)?;
        }
    }
    for (alpha, p) in family.iter().enumerate() {
        for k in 1..=depth {
            for (local, &b) in p.members.iter().enumerate() {
                let v = offsets[alpha] + (k as usize - 1) * p.members.len() + local;
                let name = base.label(b).map_or_else(|| b.to_string(), str::to_owned);
                gb.set_label(v as VertexId, format!("({name},{k})@{alpha}"));
            }
        }
    }
    gb.set_metadata("depth", Value::from(depth));
    gb.set_metadata("parabolics", Value::from(family.len()));
    Ok(AugmentedSpace {
        base_count: base.vertex_count(),
        depth,
        family,
        offsets,
        carrier: gb.build(),
    })
}

fn validate_parabolic(base: &Graph, p: &Parabolic) -> Result<()> {
    if p.members.len() != p.graph.vertex_count() {
        return Err(Error::input("member list and local graph differ in size"));
    }
    let mut seen = vec![false; base.vertex_count()];
    for &m in &p.members {
        base.check_vertex(m)?;
        if std::mem::replace(&mut seen[m as usize], true) {
            return Err(Error::input(format!("base vertex {m} listed twice")));
        }
    }
    for (i, j) in p.graph.edges() {
        let (u, v) = (p.members[i as usize], p.members[j as usize]);
        if !base.has_edge(u, v) {
            return Err(Error::input(format!("edge {u}-{v} is not an edge of the base graph")));
        }
    }
    p.graph.require_connected("parabolic subgraph")
}

impl AugmentedSpace {
    pub fn carrier(&self) -> &Graph {
        &self.carrier
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn base_count(&self) -> usize {
        self.base_count
    }

    pub fn family(&self) -> &[Parabolic] {
        &self.family
    }

    pub fn parabolic(&self, alpha: usize) -> &Parabolic {
        &self.family[alpha]
    }

    /// Carrier id of level `level` above local member `local` of `alpha`.
    pub fn vertex(&self, alpha: usize, local: VertexId, level: u32) -> VertexId {
        let p = &self.family[alpha];
        if level == 0 {
            p.members[local as usize]
        } else {
            (self.offsets[alpha] + (level as usize - 1) * p.members.len() + local as usize)
                as VertexId
        }
    }

    /// Carrier ids of the whole level `level` of parabolic `alpha`.
    pub fn level_vertices(&self, alpha: usize, level: u32) -> Vec<VertexId> {
        (0..self.family[alpha].members.len() as VertexId)
            .map(|i| self.vertex(alpha, i, level))
            .collect()
    }

    pub fn provenance(&self, v: VertexId) -> Provenance {
        let v = v as usize;
        if v < self.base_count {
            return Provenance::Gamma { base: v as VertexId };
        }
        let alpha = self.offsets.partition_point(|&o| o <= v) - 1;
        let size = self.family[alpha].members.len();
        let rel = v - self.offsets[alpha];
        let local = (rel % size) as VertexId;
        Provenance::Horo {
            alpha: alpha as u32,
            local,
            base: self.family[alpha].members[local as usize],
            level: (rel / size) as u32 + 1,
        }
    }

    pub fn level(&self, v: VertexId) -> u32 {
        match self.provenance(v) {
            Provenance::Gamma { .. } => 0,
            Provenance::Horo { level, .. } => level,
        }
    }

    pub fn classify_segments(&self, p: &Path) -> Result<SegmentClassification> {
        p.validate(&self.carrier)?;
        Ok(classify_by_level(p, |v| self.level(v)))
    }

    /// Per-vertex JSON annotation used by the graph file format.
    pub fn vertex_meta(&self, v: VertexId) -> Map<String, Value> {
        let mut m = Map::new();
        match self.provenance(v) {
            Provenance::Gamma { base } => {
                m.insert("kind".into(), Value::from("gamma"));
                m.insert("base".into(), Value::from(base));
                m.insert("level".into(), Value::from(0));
            }
            Provenance::Horo { alpha, base, level, .. } => {
                m.insert("kind".into(), Value::from("horo"));
                m.insert("alpha".into(), Value::from(alpha));
                m.insert("base".into(), Value::from(base));
                m.insert("level".into(), Value::from(level));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{cayley_ball, coset_family, GroupSpec, DEFAULT_MAX_VERTICES};
    use crate::graph::generators;
    use crate::horoball::RestrictedHoroball;

    #[test]
    fn empty_family_leaves_the_base() {
        let g = generators::petersen();
        let aug = build_augmented(&g, vec![], 3, DEFAULT_MAX_VERTICES).unwrap();
        assert_eq!(aug.carrier().vertex_count(), 10);
        assert_eq!(aug.carrier().edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn whole_base_family_is_the_horoball() {
        let g = generators::grid(4, 3);
        let whole = Parabolic::induced(&g, g.vertices().collect()).unwrap();
        let aug = build_augmented(&g, vec![whole], 3, DEFAULT_MAX_VERTICES).unwrap();
        assert_eq!(aug.carrier().vertex_count(), 12 * 4);
        let h = RestrictedHoroball::new(g, 3).unwrap();
        // same numbering scheme: id = level * |base| + v
        assert_eq!(aug.carrier().edges().collect::<Vec<_>>(), h.carrier().edges().collect::<Vec<_>>());
    }

    #[test]
    fn restrictions_match_base_and_horoballs() {
        let g = generators::cycle(12);
        let arc = Parabolic::induced(&g, (2..9).collect()).unwrap();
        let other = Parabolic::induced(&g, vec![9, 10, 11, 0]).unwrap();
        let aug = build_augmented(&g, vec![arc.clone(), other], 2, DEFAULT_MAX_VERTICES).unwrap();
        let (gamma, _) = aug.carrier().induced(&(0..12).collect::<Vec<_>>()).unwrap();
        assert_eq!(gamma.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        // horoball part of alpha 0, ordered like a standalone horoball
        let ids: Vec<VertexId> = (0..=2).flat_map(|k| aug.level_vertices(0, k)).collect();
        let (part, _) = aug.carrier().induced(&ids).unwrap();
        let h = RestrictedHoroball::new(arc.graph, 2).unwrap();
        assert_eq!(part.edges().collect::<Vec<_>>(), h.carrier().edges().collect::<Vec<_>>());
    }

    #[test]
    fn provenance_inverts_numbering_on_a_free_product_ball() {
        let spec = GroupSpec::FreeProduct(vec![GroupSpec::FreeAbelian(2), GroupSpec::FreeAbelian(2)]);
        let ball = cayley_ball(&spec, 3, DEFAULT_MAX_VERTICES).unwrap();
        let family: Vec<Parabolic> = coset_family(&ball, 0).unwrap().iter().map(Parabolic::from).collect();
        let sizes: usize = family.iter().map(|p| p.members.len()).sum();
        let n = 3;
        let aug = build_augmented(ball.graph(), family, n, DEFAULT_MAX_VERTICES).unwrap();
        let total = ball.graph().vertex_count() + sizes * n as usize;
        assert_eq!(aug.carrier().vertex_count(), total);
        // recount: every vertex maps to a distinct declared slot and back
        let mut seen = std::collections::HashSet::new();
        for v in aug.carrier().vertices() {
            let prov = aug.provenance(v);
            assert!(seen.insert(prov));
            let back = match prov {
                Provenance::Gamma { base } => base,
                Provenance::Horo { alpha, local, base, level } => {
                    assert_eq!(aug.parabolic(alpha as usize).members[local as usize], base);
                    assert!((1..=n).contains(&level));
                    aug.vertex(alpha as usize, local, level)
                }
            };
            assert_eq!(back, v);
        }
        assert_eq!(seen.len(), total);
        let meta = aug.vertex_meta(total as VertexId - 1);
        assert_eq!(meta["kind"], "horo");
        assert_eq!(meta["level"], 3);
    }

    #[test]
    fn rejects_foreign_subgraphs() {
        let g = generators::path(5);
        let mut b = GraphBuilder::new(2);
        b.add_edge(0, 1).unwrap();
        let bad = Parabolic { members: vec![0, 2], graph: b.build() };
        assert!(build_augmented(&g, vec![bad], 1, DEFAULT_MAX_VERTICES).is_err());
        let split = Parabolic::induced(&g, vec![0, 2]).unwrap();
        assert!(build_augmented(&g, vec![split], 1, DEFAULT_MAX_VERTICES).is_err());
        let ok = Parabolic::induced(&g, vec![0, 1]).unwrap();
        let err = build_augmented(&g, vec![ok], 3, 6).unwrap_err();
        assert_eq!(err.kind(), crate::error::ErrorKind::Resource);
    }
}
