//! Search for bilipschitz embeddings of scaled cycles into graphs.
//!
//! For a cycle length `n`, scale `λ` and constant `K`, an embedding is a map
//! `f` from the cycle's vertices `0..n` into the target with
//! `(λ/K)·d_C(i,j) <= d(f(i), f(j)) <= K·λ·d_C(i,j)` for all `i, j`, where
//! `d_C(i,j) = min(|i-j|, n-|i-j|)`.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Graph, VertexId};
use crate::rational::Rational;

/// Targets above this size would need an oversized distance table.
pub const MAX_TARGET_VERTICES: usize = 16_384;

/// Inclusive grid `start, start + step, ...` up to `end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaRange {
    pub start: Rational,
    pub end: Rational,
    #[serde(default = "LambdaRange::default_step")]
    pub step: Rational,
}

impl LambdaRange {
    pub fn default_step() -> Rational {
        Rational::new(1, 4)
    }

    pub fn single(lambda: Rational) -> Self {
        LambdaRange {
            start: lambda,
            end: lambda,
            step: Self::default_step(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.step.is_positive() {
            return Err(Error::input("lambda step must be positive"));
        }
        if !self.start.is_positive() {
            return Err(Error::input("lambda must be positive"));
        }
        Ok(())
    }

    /// Grid points in increasing order; empty when `start > end`.
    pub fn values(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut x = self.start.0;
        while x <= self.end.0 {
            out.push(Rational(x));
            x += self.step.0;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortcutQuery {
    pub n: usize,
    /// Bilipschitz constant, at least 1.
    pub k: Rational,
    pub lambdas: LambdaRange,
    /// Images are drawn from these vertices only (default: all).
    pub restriction: Option<Vec<VertexId>>,
    /// Candidates for `f(0)`, e.g. one vertex per automorphism orbit
    /// (default: every allowed vertex).
    pub anchors: Option<Vec<VertexId>>,
    /// Maximum number of partial assignments expanded per `(n, λ)` cell.
    pub node_cap: Option<u64>,
}

impl ShortcutQuery {
    pub fn new(n: usize, k: Rational, lambdas: LambdaRange) -> Self {
        ShortcutQuery {
            n,
            k,
            lambdas,
            restriction: None,
            anchors: None,
            node_cap: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::input(format!("cycle length must be at least 3, got {}", self.n)));
        }
        if self.k.0 < Ratio::from_integer(1) {
            return Err(Error::input(format!("bilipschitz constant must be at least 1, got {}", self.k)));
        }
        self.lambdas.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    None,
    /// The node cap was hit before the search finished.
    Unknown,
    NotSearched,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::None => "none",
            SearchStatus::Unknown => "unknown",
            SearchStatus::NotSearched => "not_searched",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleEmbedding {
    pub images: Vec<VertexId>,
    pub lambda: Rational,
    /// Largest ratio between `d(f(i), f(j))` and `λ·d_C(i,j)` either way.
    pub k_achieved: Rational,
}

pub fn cycle_distance(n: usize, i: usize, j: usize) -> usize {
    let d = i.abs_diff(j);
    d.min(n - d)
}

impl CycleEmbedding {
    /// Rechecks the bilipschitz inequality for all pairs.
    pub fn verify(&self, dist: &DistanceMatrix, k: Rational) -> bool {
        let b = Bounds::new(self.images.len(), k, self.lambda);
        let n = self.images.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let d = dist.get(self.images[i], self.images[j]);
                i == j || b.admits(cycle_distance(n, i, j), d)
            })
        })
    }
}

fn distortion(images: &[VertexId], lambda: Rational, dist: &DistanceMatrix) -> Rational {
    let n = images.len();
    let mut worst = Ratio::from_integer(1i64);
    for i in 0..n {
        for j in i + 1..n {
            let target = lambda.0 * Ratio::from_integer(cycle_distance(n, i, j) as i64);
            let d = Ratio::from_integer(dist.get(images[i], images[j]) as i64);
            worst = worst.max(d / target).max(target / d);
        }
    }
    Rational(worst)
}

/// Integer distance window `[lo[c], hi[c]]` allowed at cycle distance `c`.
struct Bounds {
    lo: Vec<u32>,
    hi: Vec<u32>,
}

impl Bounds {
    fn new(n: usize, k: Rational, lambda: Rational) -> Self {
        let (p, q) = (lambda.numer() as i128, lambda.denom() as i128);
        let (a, b) = (k.numer() as i128, k.denom() as i128);
        let mut lo = vec![0];
        let mut hi = vec![0];
        for c in 1..=n / 2 {
            let c = c as i128;
            // ceil(p b c / (q a)) and floor(a p c / (b q))
            let num = p * b * c;
            let den = q * a;
            lo.push(((num + den - 1) / den).min(u32::MAX as i128) as u32);
            hi.push(((a * p * c) / (b * q)).min(u32::MAX as i128) as u32);
        }
        Bounds { lo, hi }
    }

    #[inline]
    fn admits(&self, c: usize, d: u32) -> bool {
        self.lo[c] <= d && d <= self.hi[c]
    }

    fn feasible(&self) -> bool {
        self.lo.iter().zip(&self.hi).all(|(l, h)| l <= h)
    }
}

enum Cell {
    Found(Vec<VertexId>),
    None,
    Unknown,
}

struct Search<'a> {
    dist: &'a DistanceMatrix,
    allowed: &'a [VertexId],
    n: usize,
    bounds: Bounds,
    cap: u64,
    nodes: u64,
    images: Vec<VertexId>,
    /// allowed vertices sorted by distance from the current f(0)
    by_distance: Vec<(u32, VertexId)>,
}

impl Search<'_> {
    fn run(&mut self, anchors: &[VertexId]) -> Cell {
        if !self.bounds.feasible() {
            return Cell::None;
        }
        for &f0 in anchors {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Cell::Unknown;
            }
            let row = self.dist.row(f0);
            self.by_distance = self.allowed.iter().map(|&v| (row[v as usize], v)).collect();
            self.by_distance.sort_unstable();
            self.images.clear();
            self.images.push(f0);
            match self.extend() {
                Some(true) => return Cell::Found(self.images.clone()),
                Some(false) => {}
                None => return Cell::Unknown,
            }
        }
        Cell::None
    }

    /// `Some(true)` when the assignment completes, `None` on cap.
    fn extend(&mut self) -> Option<bool> {
        let i = self.images.len();
        if i == self.n {
            return Some(true);
        }
        let c0 = cycle_distance(self.n, 0, i);
        let (lo, hi) = (self.bounds.lo[c0], self.bounds.hi[c0]);
        let start = self.by_distance.partition_point(|&(d, _)| d < lo);
        let end = self.by_distance.partition_point(|&(d, _)| d <= hi);
        for idx in start..end {
            let v = self.by_distance[idx].1;
            let row = self.dist.row(v);
            let ok = (1..i).all(|j| {
                self.bounds
                    .admits(cycle_distance(self.n, i, j), row[self.images[j] as usize])
            });
            if !ok {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return None;
            }
            self.images.push(v);
            match self.extend() {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            self.images.pop();
        }
        Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub embedding: Option<CycleEmbedding>,
    pub nodes: u64,
    /// Set only when every searched cell ran to completion.
    pub exhaustive: bool,
}

/// Distance table plus allowed-vertex bookkeeping for one target.
pub struct ShortcutTarget<'g> {
    graph: &'g Graph,
    dist: DistanceMatrix,
}

impl<'g> ShortcutTarget<'g> {
    pub fn new(graph: &'g Graph) -> Result<Self> {
        graph.require_connected("shortcut target")?;
        if graph.vertex_count() > MAX_TARGET_VERTICES {
            return Err(Error::resource(format!(
                "shortcut targets are limited to {MAX_TARGET_VERTICES} vertices, got {}",
                graph.vertex_count()
            )));
        }
        Ok(ShortcutTarget {
            graph,
            dist: DistanceMatrix::new(graph),
        })
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dist
    }

    fn vertex_lists(&self, q: &ShortcutQuery) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
        let allowed = match &q.restriction {
            Some(r) => {
                let mut r = r.clone();
                for &v in &r {
                    self.graph.check_vertex(v)?;
                }
                r.sort_unstable();
                r.dedup();
                r
            }
            None => self.graph.vertices().collect(),
        };
        let anchors = match &q.anchors {
            Some(a) => {
                for v in a {
                    if allowed.binary_search(v).is_err() {
                        return Err(Error::input(format!("anchor {v} is not an allowed vertex")));
                    }
                }
                a.clone()
            }
            None => allowed.clone(),
        };
        Ok((allowed, anchors))
    }

    /// Searches a single `(n, λ)` cell.
    pub fn search_cell(&self, q: &ShortcutQuery, lambda: Rational) -> Result<SearchOutcome> {
        q.validate()?;
        let (allowed, anchors) = self.vertex_lists(q)?;
        let mut s = Search {
            dist: &self.dist,
            allowed: &allowed,
            n: q.n,
            bounds: Bounds::new(q.n, q.k, lambda),
            cap: q.node_cap.unwrap_or(u64::MAX),
            nodes: 0,
            images: Vec::with_capacity(q.n),
            by_distance: Vec::new(),
        };
        let cell = s.run(&anchors);
        let nodes = s.nodes.min(s.cap);
        Ok(match cell {
            Cell::Found(images) => {
                let k_achieved = distortion(&images, lambda, &self.dist);
                SearchOutcome {
                    status: SearchStatus::Found,
                    embedding: Some(CycleEmbedding { images, lambda, k_achieved }),
                    nodes,
                    exhaustive: true,
                }
            }
            Cell::None => SearchOutcome {
                status: SearchStatus::None,
                embedding: None,
                nodes,
                exhaustive: true,
            },
            Cell::Unknown => SearchOutcome {
                status: SearchStatus::Unknown,
                embedding: None,
                nodes,
                exhaustive: false,
            },
        })
    }
}

/// Scans the query's λ grid in increasing order and returns the first
/// witness. Without a witness the status is `none` only if every cell was
/// exhausted, and `unknown` otherwise.
pub fn bilipschitz_cycle_search(target: &Graph, q: &ShortcutQuery) -> Result<SearchOutcome> {
    q.validate()?;
    let t = ShortcutTarget::new(target)?;
    let lambdas = q.lambdas.values();
    if lambdas.is_empty() {
        return Ok(SearchOutcome {
            status: SearchStatus::NotSearched,
            embedding: None,
            nodes: 0,
            exhaustive: false,
        });
    }
    let mut nodes = 0;
    let mut complete = true;
    for lambda in lambdas {
        let cell = t.search_cell(q, lambda)?;
        nodes += cell.nodes;
        match cell.status {
            SearchStatus::Found => return Ok(SearchOutcome { nodes, ..cell }),
            SearchStatus::Unknown => complete = false,
            _ => {}
        }
    }
    Ok(SearchOutcome {
        status: if complete { SearchStatus::None } else { SearchStatus::Unknown },
        embedding: None,
        nodes,
        exhaustive: complete,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub n: usize,
    pub k: Rational,
    /// `None` for rows that were not searched.
    pub lambda: Option<Rational>,
    pub status: SearchStatus,
    pub nodes: u64,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CycleEmbedding>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileSummary {
    pub n: usize,
    /// Largest grid λ with a witness.
    pub best_lambda: Option<Rational>,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortcutProfile {
    pub rows: Vec<ProfileRow>,
    pub summary: Vec<ProfileSummary>,
    /// Wall time per row, aligned with `rows`; not part of the
    /// deterministic output.
    #[serde(skip)]
    pub timings: Vec<Duration>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileSpec {
    pub k: Rational,
    pub cycle_lengths: Vec<usize>,
    pub lambdas: LambdaRange,
    pub restriction: Option<Vec<VertexId>>,
    pub anchors: Option<Vec<VertexId>>,
    pub node_cap: Option<u64>,
}

/// Searches every `(n, λ)` cell independently; rows come out ordered by `n`
/// then `λ` whatever order the cells finish in.
pub fn shortcut_profile(target: &Graph, spec: &ProfileSpec) -> Result<ShortcutProfile> {
    let t = ShortcutTarget::new(target)?;
    let lambdas = spec.lambdas.values();
    let query = |n| ShortcutQuery {
        n,
        k: spec.k,
        lambdas: spec.lambdas,
        restriction: spec.restriction.clone(),
        anchors: spec.anchors.clone(),
        node_cap: spec.node_cap,
    };
    for &n in &spec.cycle_lengths {
        query(n).validate()?;
    }
    let cells: Vec<(usize, Option<Rational>)> = spec
        .cycle_lengths
        .iter()
        .flat_map(|&n| {
            if lambdas.is_empty() {
                vec![(n, None)]
            } else {
                lambdas.iter().map(|&l| (n, Some(l))).collect()
            }
        })
        .collect();
    let results: Vec<Result<(ProfileRow, Duration)>> = cells
        .par_iter()
        .map(|&(n, lambda)| {
            let started = Instant::now();
            let Some(lambda) = lambda else {
                let row = ProfileRow {
                    n,
                    k: spec.k,
                    lambda: None,
                    status: SearchStatus::NotSearched,
                    nodes: 0,
                    exhaustive: false,
                    witness: None,
                };
                return Ok((row, started.elapsed()));
            };
            let out = t.search_cell(&query(n), lambda)?;
            let row = ProfileRow {
                n,
                k: spec.k,
                lambda: Some(lambda),
                status: out.status,
                nodes: out.nodes,
                exhaustive: out.exhaustive,
                witness: out.embedding,
            };
            Ok((row, started.elapsed()))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut timings = Vec::with_capacity(results.len());
    for r in results {
        let (row, t) = r?;
        rows.push(row);
        timings.push(t);
    }
    let summary = spec
        .cycle_lengths
        .iter()
        .map(|&n| {
            let mine: Vec<&ProfileRow> = rows.iter().filter(|r| r.n == n).collect();
            ProfileSummary {
                n,
                best_lambda: mine
                    .iter()
                    .filter(|r| r.status == SearchStatus::Found)
                    .filter_map(|r| r.lambda)
                    .max(),
                exhaustive: mine.iter().all(|r| r.exhaustive),
            }
        })
        .collect();
    Ok(ShortcutProfile { rows, summary, timings })
}

impl ShortcutProfile {
    /// `n,K,lambda,status,nodes,seconds`, one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,K,lambda,status,nodes,seconds\n");
        for (i, r) in self.rows.iter().enumerate() {
            let secs = self.timings.get(i).map_or(0.0, Duration::as_secs_f64);
            let lambda = r.lambda.map_or_else(String::new, |l| l.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.6}",
                r.n,
                r.k,
                lambda,
                r.status.as_str(),
                r.nodes,
                secs
            );
        }
        out
    }
}
