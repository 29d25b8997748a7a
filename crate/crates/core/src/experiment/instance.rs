use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{BuiltinGraph, InstanceSpec, ParabolicChoice};
use crate::cayley::{all_coset_families, cayley_ball, whole_group_family, CayleyBall, CosetSubgraph};
use crate::error::{Error, Result};
use crate::graph::{generators, io, BfsWorkspace, Graph, VertexId};
use crate::horoball::Parabolic;

/// A materialized instance: the base graph, its parabolic family, and the
/// Cayley ball when it came from a group.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    pub ball: Option<CayleyBall>,
    pub family: Vec<Parabolic>,
    /// Free factor of each parabolic, `None` for the whole group or for
    /// families given by hand.
    pub factors: Vec<Option<usize>>,
    pub hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub hash: String,
    pub vertices: usize,
    pub edges: usize,
    pub parabolics: usize,
    /// Generating set of a group instance, inverses included.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

impl Instance {
    pub fn build(spec: &InstanceSpec, max_vertices: usize) -> Result<Instance> {
        match spec {
            InstanceSpec::Group { group, radius, parabolics } => {
                let ball = cayley_ball(group, *radius, max_vertices)?;
                let cosets: Vec<CosetSubgraph> = match ParabolicChoice::resolve(group, *parabolics) {
                    ParabolicChoice::Factors => all_coset_families(&ball)?,
                    ParabolicChoice::Whole => whole_group_family(&ball),
                    ParabolicChoice::None => Vec::new(),
                };
                Ok(Instance::from_ball(ball, &cosets))
            }
            InstanceSpec::GraphFile { path, family } => {
                let g = io::read_json(path)?;
                Instance::from_graph(g, family)
            }
            InstanceSpec::Builtin { graph, family } => Instance::from_graph(builtin(graph)?, family),
        }
    }

    pub fn from_ball(ball: CayleyBall, cosets: &[CosetSubgraph]) -> Instance {
        let family: Vec<Parabolic> = cosets.iter().map(Parabolic::from).collect();
        let factors = cosets.iter().map(|c| c.factor).collect();
        let graph = ball.graph().clone();
        let hash = instance_hash(&graph, &family);
        Instance {
            graph,
            ball: Some(ball),
            family,
            factors,
            hash,
        }
    }

    pub fn from_graph(graph: Graph, family: &[Vec<VertexId>]) -> Result<Instance> {
        let family = family
            .iter()
            .enumerate()
            .map(|(i, m)| {
                Parabolic::induced(&graph, m.clone())
                    .map_err(|e| Error::input(format!("instance.family[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let hash = instance_hash(&graph, &family);
        Ok(Instance {
            factors: vec![None; family.len()],
            graph,
            ball: None,
            family,
            hash,
        })
    }

    pub fn summary(&self) -> InstanceSummary {
        InstanceSummary {
            hash: self.hash.clone(),
            vertices: self.graph.vertex_count(),
            edges: self.graph.edge_count(),
            parabolics: self.family.len(),
            generators: self
                .ball
                .as_ref()
                .map(|b| b.group().generators().iter().map(|g| g.name.clone()).collect()),
        }
    }

    pub fn require_ball(&self) -> Result<&CayleyBall> {
        self.ball
            .as_ref()
            .ok_or_else(|| Error::input("this experiment needs a group instance"))
    }
}

fn builtin(b: &BuiltinGraph) -> Result<Graph> {
    let g = match *b {
        BuiltinGraph::Path { edges } => generators::path(edges + 1),
        BuiltinGraph::Cycle { vertices } => {
            if vertices < 3 {
                return Err(Error::input("a cycle needs at least 3 vertices"));
            }
            generators::cycle(vertices)
        }
        BuiltinGraph::Complete { vertices } => generators::complete(vertices),
        BuiltinGraph::Grid { width, height } => generators::grid(width, height),
        BuiltinGraph::Tree { arity, depth } => generators::tree(arity, depth),
        BuiltinGraph::Petersen => generators::petersen(),
        BuiltinGraph::Random { vertices, extra_edge_p, seed } => {
            if !(0.0..=1.0).contains(&extra_edge_p) {
                return Err(Error::input("extra_edge_p must lie in [0, 1]"));
            }
            generators::random_connected(vertices, extra_edge_p, seed)
        }
    };
    if g.is_empty() {
        return Err(Error::input("builtin graph is empty"));
    }
    Ok(g)
}

/// SHA-256 over the canonical graph document followed by one line per
/// parabolic listing its members.
pub fn instance_hash(g: &Graph, family: &[Parabolic]) -> String {
    let mut h = Sha256::new();
    h.update(io::to_json_string(g, None).as_bytes());
    for p in family {
        let line: Vec<String> = p.members.iter().map(u32::to_string).collect();
        h.update(line.join(",").as_bytes());
        h.update(b"\n");
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

/// Pairs `(x, y)` of one parabolic, as base ids, whose geodesics stay in the
/// ball: `|x| + d(x, y) <= R` where `x` is the endpoint closer to the
/// identity (ties broken by id). Distances are those of the ball graph.
pub fn interior_pairs(ball: &CayleyBall, members: &[VertexId], ws: &mut BfsWorkspace) -> Vec<(VertexId, VertexId, u32)> {
    let g = ball.graph();
    let radius = ball.radius();
    let mut keyed: Vec<(u32, VertexId)> = members.iter().map(|&v| (ball.word_length(v), v)).collect();
    keyed.sort_unstable();
    let mut out = Vec::new();
    for (i, &(len, x)) in keyed.iter().enumerate() {
        if len >= radius || i + 1 == keyed.len() {
            continue;
        }
        let partners: Vec<VertexId> = keyed[i + 1..].iter().map(|k| k.1).collect();
        ws.run(g, &[x], radius - len, Some(&partners));
        for &y in &partners {
            let d = ws.dist(y);
            if d <= radius - len {
                out.push((x, y, d));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{GroupSpec, DEFAULT_MAX_VERTICES};

    #[test]
    fn hashes_are_stable_and_sensitive() {
        let a = Instance::from_graph(generators::cycle(6), &[vec![0, 1]]).unwrap();
        let b = Instance::from_graph(generators::cycle(6), &[vec![0, 1]]).unwrap();
        let c = Instance::from_graph(generators::cycle(6), &[vec![1, 2]]).unwrap();
        assert_eq!(a.hash, b.hash);
        assert_ne!(a.hash, c.hash);
        assert!(a.hash.starts_with("sha256:") && a.hash.len() == 7 + 64);
    }

    #[test]
    fn interior_pairs_match_the_definition() {
        let spec = GroupSpec::FreeAbelian(2);
        let ball = cayley_ball(&spec, 4, DEFAULT_MAX_VERTICES).unwrap();
        let members: Vec<VertexId> = ball.graph().vertices().collect();
        let mut ws = BfsWorkspace::new(ball.graph().vertex_count());
        let pairs = interior_pairs(&ball, &members, &mut ws);
        let coords = |v: VertexId| match ball.element(v).syllables().first() {
            None => (0, 0),
            Some((_, crate::cayley::FactorElement::Abelian(c))) => (c[0], c[1]),
            other => panic!("unexpected syllable {other:?}"),
        };
        let mut expected = 0;
        for x in ball.graph().vertices() {
            for y in ball.graph().vertices() {
                let (a, b) = (coords(x), coords(y));
                let (lx, ly) = (a.0.abs() + a.1.abs(), b.0.abs() + b.1.abs());
                let d = (a.0 - b.0).abs() + (a.1 - b.1).abs();
                if (lx, x) < (ly, y) && lx + d <= 4 {
                    expected += 1;
                }
            }
        }
        assert_eq!(pairs.len(), expected);
        assert!(pairs.iter().all(|&(x, y, d)| ball.word_length(x) + d <= 4 && x != y));
    }
}
