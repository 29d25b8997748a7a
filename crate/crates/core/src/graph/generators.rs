//! Standard test graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphBuilder, VertexId};

/// Path on `vertex_count` vertices `0 - 1 - ... - (vertex_count-1)`.
pub fn path(vertex_count: usize) -> Graph {
    let mut b = GraphBuilder::new(vertex_count);
    for v in 1..vertex_count {
        b.add_edge(v as VertexId - 1, v as VertexId).unwrap();
    }
    b.build()
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    let mut b = GraphBuilder::new(n);
    for v in 0..n {
        b.add_edge(v as VertexId, ((v + 1) % n) as VertexId).unwrap();
    }
    b.build()
}

pub fn complete(n: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            b.add_edge(u as VertexId, v as VertexId).unwrap();
        }
    }
    b.build()
}

/// `width x height` grid; vertex `(x, y)` has id `y * width + x`.
pub fn grid(width: usize, height: usize) -> Graph {
    let mut b = GraphBuilder::new(width * height);
    let id = |x: usize, y: usize| (y * width + x) as VertexId;
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                b.add_edge(id(x, y), id(x + 1, y)).unwrap();
            }
            if y + 1 < height {
                b.add_edge(id(x, y), id(x, y + 1)).unwrap();
            }
            b.set_label(id(x, y), format!("({x},{y})"));
        }
    }
    b.build()
}

/// Complete `arity`-ary tree of the given depth (root has depth 0), numbered
/// breadth-first.
pub fn tree(arity: usize, depth: usize) -> Graph {
    let mut count = 1;
    let mut level = 1;
    for _ in 0..depth {
        level *= arity;
        count += level;
    }
    let mut b = GraphBuilder::new(count);
    for child in 1..count {
        let parent = (child - 1) / arity;
        b.add_edge(parent as VertexId, child as VertexId).unwrap();
    }
    b.build()
}

/// Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let mut b = GraphBuilder::new(10);
    for i in 0..5u32 {
        b.add_edge(i, (i + 1) % 5).unwrap();
        b.add_edge(i, i + 5).unwrap();
        b.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
    }
    b.build()
}

/// Random connected graph: a uniformly shuffled random spanning tree plus each
/// remaining pair independently with probability `extra_edge_p`.
pub fn random_connected(n: usize, extra_edge_p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.shuffle(&mut rng);
    let mut b = GraphBuilder::new(n);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        b.add_edge(order[i], parent).unwrap();
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra_edge_p) {
                b.add_edge(u as VertexId, v as VertexId).unwrap();
            }
        }
    }
    b.build()
}
