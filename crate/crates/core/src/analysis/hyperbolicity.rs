use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BfsWorkspace, DistanceMatrix, Graph, VertexId, INFINITY};
use crate::rational::Rational;

/// Graphs up to this size get a full distance table; larger ones are
/// sampled with per-quadruple searches.
const TABLE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadrupleSample {
    /// Every unordered quadruple.
    All,
    Random { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperbolicityEstimate {
    /// A half-integer.
    pub delta: Rational,
    pub quadruples_checked: u64,
    pub exhaustive: bool,
}

/// Twice the four-point defect: the two largest of the three pair sums
/// differ by this much.
#[inline]
pub fn twice_four_point(d: [u32; 6]) -> u32 {
    // d = [wx, wy, wz, xy, xz, yz]
    let mut s = [d[0] + d[5], d[1] + d[4], d[2] + d[3]];
    s.sort_unstable();
    s[2] - s[1]
}

/// Four-point hyperbolicity constant of a connected graph.
pub fn four_point_delta(g: &Graph, sample: QuadrupleSample) -> Result<HyperbolicityEstimate> {
    four_point_delta_with_limit(g, sample, TABLE_LIMIT)
}

fn four_point_delta_with_limit(
    g: &Graph,
    sample: QuadrupleSample,
    table_limit: usize,
) -> Result<HyperbolicityEstimate> {
    g.require_connected("four-point delta")?;
    let n = g.vertex_count();
    match sample {
        QuadrupleSample::All => {
            if n > table_limit {
                return Err(Error::resource(format!(
                    "exhaustive four-point scan needs at most {table_limit} vertices, got {n}; use sampling"
                )));
            }
            let dm = DistanceMatrix::new(g);
            let n = n as VertexId;
            let twice = (0..n)
                .into_par_iter()
                .map(|w| {
                    let mut best = 0;
                    for x in w + 1..n {
                        for y in x + 1..n {
                            for z in y + 1..n {
                                let d = [
                                    dm.get(w, x),
                                    dm.get(w, y),
                                    dm.get(w, z),
                                    dm.get(x, y),
                                    dm.get(x, z),
                                    dm.get(y, z),
                                ];
                                best = best.max(twice_four_point(d));
                            }
                        }
                    }
                    best
                })
                .max()
                .unwrap_or(0);
            let n = n as u64;
            let quads = if n < 4 { 0 } else { n * (n - 1) * (n - 2) * (n - 3) / 24 };
            Ok(HyperbolicityEstimate {
                delta: Rational::new(twice as i64, 2),
                quadruples_checked: quads,
                exhaustive: true,
            })
        }
        QuadrupleSample::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let quads: Vec<[VertexId; 4]> = (0..count)
                .map(|_| std::array::from_fn(|_| rng.gen_range(0..n as VertexId)))
                .collect();
            let twice = if n <= table_limit {
                let dm = DistanceMatrix::new(g);
                quads
                    .iter()
                    .map(|&[w, x, y, z]| {
                        twice_four_point([
                            dm.get(w, x),
                            dm.get(w, y),
                            dm.get(w, z),
                            dm.get(x, y),
                            dm.get(x, z),
                            dm.get(y, z),
                        ])
                    })
                    .max()
                    .unwrap_or(0)
            } else {
                quads
                    .par_iter()
                    .map_init(
                        || BfsWorkspace::new(n),
                        |ws, &[w, x, y, z]| {
                            let mut d = [0u32; 6];
                            ws.run(g, &[w], INFINITY, Some(&[x, y, z]));
                            d[0] = ws.dist(x);
                            d[1] = ws.dist(y);
                            d[2] = ws.dist(z);
                            ws.run(g, &[x], INFINITY, Some(&[y, z]));
                            d[3] = ws.dist(y);
                            d[4] = ws.dist(z);
                            ws.run(g, &[y], INFINITY, Some(&[z]));
                            d[5] = ws.dist(z);
                            twice_four_point(d)
                        },
                    )
                    .max()
                    .unwrap_or(0)
            };
            Ok(HyperbolicityEstimate {
                delta: Rational::new(twice as i64, 2),
                quadruples_checked: count,
                exhaustive: false,
            })
        }
    }
}
