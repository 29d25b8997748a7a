use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_geodesics_with_row, BfsWorkspace, Graph, VertexId, INFINITY};

/// Which pairs of the subset are examined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairFilter {
    /// Every unordered pair.
    All,
    /// Pairs whose geodesics stay within `radius` of `center`:
    /// `min(d(o,u), d(o,v)) + d(u,v) <= radius`.
    Interior { center: VertexId, radius: u32 },
    /// An explicit list of pairs, both endpoints in the subset.
    Explicit(Vec<(VertexId, VertexId)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvexityOptions {
    /// Enumerate up to this many geodesics per pair to measure the
    /// quasiconvexity constant. `None` takes it from the betweenness
    /// intervals, which is exact.
    pub geodesic_cap: Option<usize>,
    /// Number of witnesses kept in the report (all are counted).
    pub witness_limit: usize,
}

impl Default for ConvexityOptions {
    fn default() -> Self {
        ConvexityOptions {
            geodesic_cap: None,
            witness_limit: 16,
        }
    }
}

/// A vertex `w` outside the subset lying on a geodesic from `u` to `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
    /// `d(w, S)`.
    pub distance: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    /// Largest distance to the subset of a witness; 0 iff convex.
    pub defect: u32,
    pub witness_count: u64,
    pub witnesses: Vec<Witness>,
    pub quasiconvexity_constant: u32,
    pub geodesics_truncated: bool,
    pub pairs_checked: u64,
}

impl ConvexityReport {
    pub fn is_convex(&self) -> bool {
        self.defect == 0
    }
}

/// Reusable scratch space for repeated convexity scans on one graph.
/// Memory is proportional to the graph; each scan costs time proportional
/// to the explored region.
pub struct ConvexityScanner<'g> {
    g: &'g Graph,
    bfs: BfsWorkspace,
    aux: BfsWorkspace,
    member: Vec<u32>,
    seen: Vec<u32>,
    witness_mark: Vec<u32>,
    member_stamp: u32,
    seen_stamp: u32,
    witness_stamp: u32,
}

fn bump(stamp: &mut u32, marks: &mut [u32]) -> u32 {
    if *stamp == u32::MAX {
        marks.fill(0);
        *stamp = 0;
    }
    *stamp += 1;
    *stamp
}

impl<'g> ConvexityScanner<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        ConvexityScanner {
            g,
            bfs: BfsWorkspace::new(n),
            aux: BfsWorkspace::new(n),
            member: vec![0; n],
            seen: vec![0; n],
            witness_mark: vec![0; n],
            member_stamp: 0,
            seen_stamp: 0,
            witness_stamp: 0,
        }
    }

    /// Pairs grouped by the endpoint the BFS starts from, with the radius
    /// bound for that source.
    fn plan(&mut self, set: &[VertexId], filter: &PairFilter) -> Result<Vec<(VertexId, u32, Vec<VertexId>)>> {
        let g = self.g;
        match filter {
            PairFilter::All => Ok(set
                .iter()
                .enumerate()
                .filter(|(i, _)| i + 1 < set.len())
                .map(|(i, &u)| (u, INFINITY, set[i + 1..].to_vec()))
                .collect()),
            PairFilter::Explicit(pairs) => {
                let mut grouped: Vec<(VertexId, u32, Vec<VertexId>)> = Vec::new();
                for &(u, v) in pairs {
                    for x in [u, v] {
                        g.check_vertex(x)?;
                        if self.member[x as usize] != self.member_stamp {
                            return Err(Error::input(format!("pair endpoint {x} is not in the subset")));
                        }
                    }
                    if u == v {
                        continue;
                    }
                    match grouped.last_mut() {
                        Some(last) if last.0 == u => last.2.push(v),
                        _ => grouped.push((u, INFINITY, vec![v])),
                    }
                }
                Ok(grouped)
            }
            &PairFilter::Interior { center, radius } => {
                g.check_vertex(center)?;
                self.aux.run(g, &[center], radius, Some(set));
                let mut keyed: Vec<(u32, VertexId)> = set
                    .iter()
                    .map(|&v| (self.aux.dist(v), v))
                    .filter(|&(d, _)| d <= radius)
                    .collect();
                keyed.sort_unstable();
                Ok(keyed
                    .iter()
                    .enumerate()
                    .map(|(i, &(d, u))| (u, radius - d, keyed[i + 1..].iter().map(|k| k.1).collect()))
                    .filter(|(_, _, partners): &(VertexId, u32, Vec<VertexId>)| !partners.is_empty())
                    .collect())
            }
        }
    }

    pub fn scan(
        &mut self,
        set: &[VertexId],
        filter: &PairFilter,
        opts: &ConvexityOptions,
    ) -> Result<ConvexityReport> {
        let g = self.g;
        if set.is_empty() {
            return Err(Error::input("convexity of an empty vertex set"));
        }
        let ms = bump(&mut self.member_stamp, &mut self.member);
        for &v in set {
            g.check_vertex(v)?;
            self.member[v as usize] = ms;
        }
        let bounded = matches!(filter, PairFilter::Interior { .. });
        let plan = self.plan(set, filter)?;
        let ws = bump(&mut self.witness_stamp, &mut self.witness_mark);

        // Distance to the subset is needed for every geodesic vertex when
        // enumerating; otherwise only for the witnesses, found later.
        let to_set: Option<Vec<u32>> = opts.geodesic_cap.map(|_| {
            self.aux.run(g, set, INFINITY, None);
            self.aux.distances().to_vec()
        });

        let mut pairs_checked = 0u64;
        let mut witness_count = 0u64;
        let mut found: Vec<Witness> = Vec::new();
        let mut witness_vertices: Vec<VertexId> = Vec::new();
        let mut qc_enumerated = 0u32;
        let mut truncated = false;
        let mut stack = Vec::new();
        let mut pair_witnesses = Vec::new();

        for (u, radius, partners) in plan {
            self.bfs.run(g, &[u], radius, Some(&partners));
            for &v in &partners {
                let duv = self.bfs.dist(v);
                if duv == INFINITY {
                    if bounded {
                        continue;
                    }
                    return Err(Error::input(format!(
                        "subset vertices {u} and {v} lie in different components"
                    )));
                }
                pairs_checked += 1;
                let ss = bump(&mut self.seen_stamp, &mut self.seen);
                self.seen[v as usize] = ss;
                stack.clear();
                stack.push(v);
                pair_witnesses.clear();
                while let Some(x) = stack.pop() {
                    if self.member[x as usize] != ms {
                        pair_witnesses.push(x);
                    }
                    let dx = self.bfs.dist(x);
                    if dx == 0 {
                        continue;
                    }
                    for &y in g.neighbors(x) {
                        if self.bfs.dist(y) == dx - 1 && self.seen[y as usize] != ss {
                            self.seen[y as usize] = ss;
                            stack.push(y);
                        }
                    }
                }
                pair_witnesses.sort_unstable();
                witness_count += pair_witnesses.len() as u64;
                for &w in &pair_witnesses {
                    if self.witness_mark[w as usize] != ws {
                        self.witness_mark[w as usize] = ws;
                        witness_vertices.push(w);
                    }
                    if found.len() < opts.witness_limit {
                        found.push(Witness { u, v, w, distance: 0 });
                    }
                }
                if let (Some(cap), Some(to_set)) = (opts.geodesic_cap, &to_set) {
                    let geos = enumerate_geodesics_with_row(g, v, u, self.bfs.distances(), cap)?;
                    truncated |= geos.truncated;
                    for p in &geos.paths {
                        for &x in p.vertices() {
                            qc_enumerated = qc_enumerated.max(to_set[x as usize]);
                        }
                    }
                }
            }
        }

        let mut defect = 0;
        if !witness_vertices.is_empty() {
            self.aux.run(g, set, INFINITY, Some(&witness_vertices));
            defect = witness_vertices.iter().map(|&w| self.aux.dist(w)).max().unwrap();
            for wit in &mut found {
                wit.distance = self.aux.dist(wit.w);
            }
        }
        Ok(ConvexityReport {
            defect,
            witness_count,
            witnesses: found,
            quasiconvexity_constant: if opts.geodesic_cap.is_some() { qc_enumerated } else { defect },
            geodesics_truncated: truncated,
            pairs_checked,
        })
    }
}

/// Convexity defect of `set` in `g` via betweenness: `w` outside the set is a
/// witness for `(u, v)` when `d(u,w) + d(w,v) = d(u,v)`.
pub fn convexity_defect(
    g: &Graph,
    set: &[VertexId],
    filter: &PairFilter,
    opts: &ConvexityOptions,
) -> Result<ConvexityReport> {
    ConvexityScanner::new(g).scan(set, filter, opts)
}
