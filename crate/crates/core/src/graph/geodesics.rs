use super::{BfsWorkspace, Graph, Path, VertexId, INFINITY};
use crate::error::{Error, Result};

/// Geodesics between two vertices, in DFS order over id-sorted neighbor
/// lists. `truncated` is set when more geodesics exist than were returned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicSet {
    pub paths: Vec<Path>,
    pub truncated: bool,
}

pub fn enumerate_geodesics(g: &Graph, u: VertexId, v: VertexId, cap: usize) -> Result<GeodesicSet> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let mut ws = BfsWorkspace::new(g.vertex_count());
    ws.run(g, &[v], INFINITY, Some(&[u]));
    enumerate_geodesics_with_row(g, u, v, ws.distances(), cap)
}

/// Same as [`enumerate_geodesics`] given a BFS row of distances *to* `v`
/// (only entries up to `d(u, v)` are consulted).
pub fn enumerate_geodesics_with_row(
    g: &Graph,
    u: VertexId,
    v: VertexId,
    dist_to_v: &[u32],
    cap: usize,
) -> Result<GeodesicSet> {
    if cap == 0 {
        return Err(Error::input("geodesic cap must be positive"));
    }
    let total = dist_to_v[u as usize];
    if total == INFINITY {
        return Err(Error::input(format!("vertices {u} and {v} lie in different components")));
    }
    let mut paths = Vec::new();
    let mut current = vec![u];
    // stack of (vertex, next neighbor index)
    let mut stack: Vec<(VertexId, usize)> = vec![(u, 0)];
    while let Some(&(w, idx)) = stack.last() {
        let dw = dist_to_v[w as usize];
        if dw == 0 {
            if paths.len() == cap {
                return Ok(GeodesicSet { paths, truncated: true });
            }
            paths.push(Path::from_trusted(current.clone()));
            stack.pop();
            current.pop();
            continue;
        }
        let ns = g.neighbors(w);
        match (idx..ns.len()).find(|&i| dist_to_v[ns[i] as usize] == dw - 1) {
            Some(i) => {
                stack.last_mut().unwrap().1 = i + 1;
                stack.push((ns[i], 0));
                current.push(ns[i]);
            }
            None => {
                stack.pop();
                current.pop();
            }
        }
    }
    Ok(GeodesicSet { paths, truncated: false })
}
