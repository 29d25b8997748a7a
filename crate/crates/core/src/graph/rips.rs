use super::{BfsWorkspace, Graph, GraphBuilder};
use crate::error::{Error, Result};

/// Rips graph `Rips_t(g)`: same vertices, `u ~ v` iff `0 < d_g(u, v) <= t`.
pub fn rips_graph(g: &Graph, t: u32) -> Result<Graph> {
    if t == 0 {
        return Err(Error::input("rips scale must be at least 1"));
    }
    g.require_connected("rips graph")?;
    let mut b = GraphBuilder::new(g.vertex_count());
    let mut ws = BfsWorkspace::new(g.vertex_count());
    for u in g.vertices() {
        ws.run(g, &[u], t, None);
        for &v in ws.reached() {
            if u < v {
                b.add_edge(u, v)?;
            }
        }
        if let Some(l) = g.label(u) {
            b.set_label(u, l);
        }
    }
    let mut out = b.build();
    out.metadata = g.metadata.clone();
    out.metadata.insert("rips_scale".into(), t.into());
    Ok(out)
}
