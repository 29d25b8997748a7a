use std::collections::HashMap;

use serde_json::Value;

use super::group::{FactorKind, Group, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexId};

/// Default cap on the number of vertices any construction may allocate.
pub const DEFAULT_MAX_VERTICES: usize = 5_000_000;

/// A finite ball `{g : |g|_S <= radius}` of a Cayley graph.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    group: Group,
    radius: u32,
    graph: Graph,
    elements: Vec<GroupElement>,
    lengths: Vec<u32>,
    index: HashMap<GroupElement, VertexId>,
}

impl CayleyBall {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn spec(&self) -> &GroupSpec {
        self.group.spec()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    /// The identity is always vertex 0.
    pub fn basepoint(&self) -> VertexId {
        0
    }

    pub fn element(&self, v: VertexId) -> &GroupElement {
        &self.elements[v as usize]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Word length of the element at `v`, as found by the ball's BFS.
    pub fn word_length(&self, v: VertexId) -> u32 {
        self.lengths[v as usize]
    }

    pub fn vertex_of(&self, x: &GroupElement) -> Option<VertexId> {
        self.index.get(x).copied()
    }
}

/// Builds the ball of the given radius. Vertices are numbered by word length,
/// ties broken by the lexicographic order of normal-form strings.
pub fn cayley_ball(spec: &GroupSpec, radius: u32, max_vertices: usize) -> Result<CayleyBall> {
    if radius == 0 {
        return Err(Error::input("ball radius must be at least 1"));
    }
    let group = Group::new(spec)?;
    if let Some(size) = projected_ball_size(&group, radius) {
        if size > max_vertices as u128 {
            return Err(Error::resource(format!(
                "ball of radius {radius} in {spec} has {size} vertices, over the budget of {max_vertices}"
            )));
        }
    }

    let gens = group.generators();
    let mut lengths_by_elem: HashMap<GroupElement, u32> = HashMap::new();
    lengths_by_elem.insert(GroupElement::identity(), 0);
    let mut frontier = vec![GroupElement::identity()];
    for len in 1..=radius {
        let mut next = Vec::new();
        for x in &frontier {
            for s in gens {
                let y = group.mul(x, &s.element);
                if !lengths_by_elem.contains_key(&y) {
                    lengths_by_elem.insert(y.clone(), len);
                    next.push(y);
                }
            }
        }
        if lengths_by_elem.len() > max_vertices {
            return Err(Error::resource(format!(
                "ball of radius {radius} in {spec} exceeds the budget of {max_vertices} vertices \
                 (at least {} within radius {len})",
                lengths_by_elem.len()
            )));
        }
        frontier = next;
    }

    let mut entries: Vec<(u32, String, GroupElement)> = lengths_by_elem
        .into_iter()
        .map(|(x, l)| (l, group.format(&x), x))
        .collect();
    entries.sort_unstable_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let n = entries.len();
    let mut b = GraphBuilder::new(n);
    let mut elements = Vec::with_capacity(n);
    let mut lengths = Vec::with_capacity(n);
    let mut index = HashMap::with_capacity(n);
    for (v, (l, label, x)) in entries.into_iter().enumerate() {
        b.set_label(v as VertexId, label);
        index.insert(x.clone(), v as VertexId);
        elements.push(x);
        lengths.push(l);
    }
    for (v, x) in elements.iter().enumerate() {
        for s in gens {
            if let Some(&w) = index.get(&group.mul(x, &s.element)) {
                if (v as VertexId) < w {
                    b.add_edge(v as VertexId, w)?;
                }
            }
        }
    }
    b.set_metadata("group", Value::from(spec.to_string()));
    b.set_metadata("radius", Value::from(radius));
    Ok(CayleyBall {
        group,
        radius,
        graph: b.build(),
        elements,
        lengths,
        index,
    })
}

/// Number of elements of each length `0..=radius` in a factor, when it has a
/// closed form.
fn factor_sphere_sizes(kind: FactorKind, radius: u32) -> Option<Vec<u128>> {
    let r = radius as usize;
    match kind {
        FactorKind::Free { rank } => {
            let k = rank as u128;
            let mut out = vec![1u128];
            for j in 1..=r {
                out.push(if j == 1 {
                    2 * k
                } else {
                    out[j - 1].saturating_mul(2 * k - 1)
                });
            }
            Some(out)
        }
        FactorKind::Abelian { rank } => {
            // ways[j] = vectors over the coordinates so far with l1 norm j
            let mut ways = vec![0u128; r + 1];
            ways[0] = 1;
            for _ in 0..rank {
                let mut next = vec![0u128; r + 1];
                for (j, slot) in next.iter_mut().enumerate() {
                    let mut total = ways[j];
                    for m in 1..=j {
                        total = total.saturating_add(ways[j - m].saturating_mul(2));
                    }
                    *slot = total;
                }
                ways = next;
            }
            Some(ways)
        }
        FactorKind::Heisenberg { .. } => None,
    }
}

/// Exact ball size when every factor has closed-form sphere sizes.
pub fn projected_ball_size(group: &Group, radius: u32) -> Option<u128> {
    let r = radius as usize;
    let spheres: Vec<Vec<u128>> = group
        .factors()
        .iter()
        .map(|f| factor_sphere_sizes(f.kind, radius))
        .collect::<Option<_>>()?;
    if spheres.len() == 1 {
        return Some(spheres[0].iter().fold(0u128, |a, &b| a.saturating_add(b)));
    }
    // ending[i][j]: elements of length j whose last syllable lies in factor i
    let f = spheres.len();
    let mut ending = vec![vec![0u128; r + 1]; f];
    for j in 1..=r {
        for i in 0..f {
            let mut total = spheres[i][j];
            for m in 1..j {
                let others: u128 = (0..f)
                    .filter(|&o| o != i)
                    .fold(0u128, |a, o| a.saturating_add(ending[o][j - m]));
                total = total.saturating_add(spheres[i][m].saturating_mul(others));
            }
            ending[i][j] = total;
        }
    }
    Some(
        ending
            .iter()
            .flat_map(|row| row.iter())
            .fold(1u128, |a, &b| a.saturating_add(b)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::group::HeisenbergOptions;
    use crate::graph::bfs_distances;

    fn z(d: u32) -> GroupSpec {
        GroupSpec::FreeAbelian(d)
    }

    #[test]
    fn small_ball_counts() {
        assert_eq!(cayley_ball(&z(2), 2, DEFAULT_MAX_VERTICES).unwrap().graph().vertex_count(), 13);
        assert_eq!(
            cayley_ball(&GroupSpec::Free(2), 2, DEFAULT_MAX_VERTICES).unwrap().graph().vertex_count(),
            17
        );
    }

    #[test]
    fn numbering_is_by_length_then_normal_form() {
        let ball = cayley_ball(&z(2), 1, DEFAULT_MAX_VERTICES).unwrap();
        let labels: Vec<&str> = ball.graph().vertices().map(|v| ball.graph().label(v).unwrap()).collect();
        assert_eq!(labels, ["e", "a", "a^-1", "b", "b^-1"]);
        assert_eq!(ball.graph().edge_count(), 4);
    }

    /// Breadth-first enumeration of all words of length <= r as integer
    /// matrices, deduplicated by value.
    fn heisenberg_words_oracle(r: u32, central: bool) -> Vec<usize> {
        use std::collections::HashSet;
        type M = [[i64; 3]; 3];
        let mul = |x: &M, y: &M| {
            let mut o = [[0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    o[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
                }
            }
            o
        };
        let unit = |x: i64, y: i64, zz: i64| [[1, x, zz], [0, 1, y], [0, 0, 1]];
        let mut gens = vec![unit(1, 0, 0), unit(-1, 0, 0), unit(0, 1, 0), unit(0, -1, 0)];
        if central {
            gens.extend([unit(0, 0, 1), unit(0, 0, -1)]);
        }
        let id = unit(0, 0, 0);
        let mut seen: HashSet<M> = HashSet::from([id]);
        let mut frontier = vec![id];
        let mut spheres = vec![1];
        for _ in 0..r {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &gens {
                    let y = mul(x, s);
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            spheres.push(next.len());
            frontier = next;
        }
        spheres
    }

    fn sphere_counts(ball: &CayleyBall) -> Vec<usize> {
        let mut out = vec![0; ball.radius() as usize + 1];
        for v in ball.graph().vertices() {
            out[ball.word_length(v) as usize] += 1;
        }
        out
    }

    #[test]
    fn heisenberg_ball_matches_word_enumeration() {
        let ball = cayley_ball(&GroupSpec::heisenberg(), 3, DEFAULT_MAX_VERTICES).unwrap();
        assert_eq!(sphere_counts(&ball), heisenberg_words_oracle(3, false));
        let spec = GroupSpec::Heisenberg(HeisenbergOptions { central_generator: true });
        let ball = cayley_ball(&spec, 3, DEFAULT_MAX_VERTICES).unwrap();
        assert_eq!(sphere_counts(&ball), heisenberg_words_oracle(3, true));
        let d = bfs_distances(ball.graph(), 0).unwrap();
        assert!(ball.graph().vertices().all(|v| d[v as usize] == ball.word_length(v)));
    }

    #[test]
    fn distances_from_identity_equal_word_length() {
        let specs = [
            GroupSpec::Free(2),
            z(3),
            GroupSpec::FreeProduct(vec![z(2), z(2)]),
            GroupSpec::FreeProduct(vec![z(2), GroupSpec::Free(1), z(1)]),
        ];
        for spec in specs {
            let ball = cayley_ball(&spec, 4, DEFAULT_MAX_VERTICES).unwrap();
            let d = bfs_distances(ball.graph(), ball.basepoint()).unwrap();
            for v in ball.graph().vertices() {
                let x = ball.element(v);
                assert_eq!(Some(d[v as usize] as u64), ball.group().word_length(x));
                assert_eq!(ball.vertex_of(x), Some(v));
            }
            let projected = projected_ball_size(ball.group(), 4).unwrap();
            assert_eq!(projected, ball.graph().vertex_count() as u128);
        }
    }

    #[test]
    fn edges_are_generator_steps() {
        let ball = cayley_ball(&GroupSpec::FreeProduct(vec![z(2), z(1)]), 3, DEFAULT_MAX_VERTICES).unwrap();
        let g = ball.group();
        for (u, v) in ball.graph().edges() {
            let step = g.mul(&g.inverse(ball.element(u)), ball.element(v));
            assert!(g.generators().iter().any(|s| s.element == step));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = cayley_ball(&GroupSpec::Free(3), 12, 1000).unwrap_err();
        assert_eq!(err.kind(), crate::error::ErrorKind::Resource);
        assert!(err.to_string().contains("over the budget"));
        let err = cayley_ball(&GroupSpec::heisenberg(), 10, 100).unwrap_err();
        assert_eq!(err.kind(), crate::error::ErrorKind::Resource);
        assert!(cayley_ball(&z(2), 0, 10).is_err());
    }
}
