//! Multi-stage measurements on Cayley balls with their augmentations.

use rayon::prelude::*;
use serde::Serialize;

use super::instance::{interior_pairs, Instance};
use crate::analysis::{
    displacement_generating_set, qi_distortion, ConvexityOptions, ConvexityScanner, Fit, PairFilter,
};
use crate::cayley::CayleyBall;
use crate::error::{Error, Result};
use crate::graph::{BfsWorkspace, Graph, GraphBuilder, VertexId, INFINITY};
use crate::horoball::{build_augmented, AugmentedSpace};
use crate::rational::Rational;

/// Outcome of one named assertion made by an experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_owned(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Interior pairs of every parabolic, grouped by parabolic.
fn family_interior_pairs(ball: &CayleyBall, instance: &Instance) -> Vec<Vec<(VertexId, VertexId, u32)>> {
    instance
        .family
        .par_iter()
        .map_init(
            || BfsWorkspace::new(ball.graph().vertex_count()),
            |ws, p| interior_pairs(ball, &p.members, ws),
        )
        .collect()
}

fn local_index(members: &[VertexId], v: VertexId) -> VertexId {
    members.binary_search(&v).expect("pair endpoints are members") as VertexId
}

/// Consecutive runs of pairs sharing their first endpoint.
fn by_owner(pairs: &[(VertexId, VertexId, u32)]) -> impl Iterator<Item = &[(VertexId, VertexId, u32)]> {
    pairs.chunk_by(|a, b| a.0 == b.0)
}

/// Largest change in distance between a pair of parabolic points when both
/// are lifted from level 0 to the top level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelGap {
    pub depth: u32,
    pub pairs_checked: u64,
    pub max_gap: u32,
    /// `2n`.
    pub bound: u32,
    /// Base ids of a pair attaining the maximum.
    pub worst: Option<(VertexId, VertexId)>,
}

impl LevelGap {
    pub fn holds(&self) -> bool {
        self.max_gap <= self.bound
    }
}

/// Compares `d((x,0),(y,0))` with `d((x,n),(y,n))` in the augmentation over
/// all interior pairs of every parabolic.
pub fn level_gap_scan(ball: &CayleyBall, instance: &Instance, aug: &AugmentedSpace) -> LevelGap {
    let n = aug.depth();
    let carrier = aug.carrier();
    let pairs = family_interior_pairs(ball, instance);
    let per_alpha: Vec<(u64, u32, Option<(VertexId, VertexId)>)> = pairs
        .par_iter()
        .enumerate()
        .map_init(
            || (BfsWorkspace::new(carrier.vertex_count()), BfsWorkspace::new(carrier.vertex_count())),
            |(low, high), (alpha, pairs)| {
                let members = &aug.parabolic(alpha).members;
                let top = |v: VertexId| aug.vertex(alpha, local_index(members, v), n);
                let mut best = (0u64, 0u32, None);
                for run in by_owner(pairs) {
                    let x = run[0].0;
                    let ys: Vec<VertexId> = run.iter().map(|p| p.1).collect();
                    let top_ys: Vec<VertexId> = ys.iter().map(|&y| top(y)).collect();
                    low.run(carrier, &[x], INFINITY, Some(&ys));
                    high.run(carrier, &[top(x)], INFINITY, Some(&top_ys));
                    for (&y, &ty) in ys.iter().zip(&top_ys) {
                        let gap = low.dist(y).abs_diff(high.dist(ty));
                        best.0 += 1;
                        if best.2.is_none() || gap > best.1 {
                            best.1 = gap;
                            best.2 = Some((x, y));
                        }
                    }
                }
                best
            },
        )
        .collect();
    let mut out = LevelGap {
        depth: n,
        pairs_checked: 0,
        max_gap: 0,
        bound: 2 * n,
        worst: None,
    };
    for (count, gap, worst) in per_alpha {
        out.pairs_checked += count;
        if worst.is_some() && (out.worst.is_none() || gap > out.max_gap) {
            out.max_gap = gap;
            out.worst = worst;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicWitness {
    pub alpha: u32,
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
    pub distance: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexifyRow {
    pub depth: u32,
    /// Largest convexity defect over the top levels of all parabolics.
    pub defect: u32,
    pub witness_count: u64,
    pub witnesses: Vec<ParabolicWitness>,
    pub pairs_checked: u64,
    pub parabolics_checked: usize,
    pub carrier_vertices: usize,
}

/// For each depth, the convexity defect of every parabolic's top level in the
/// augmentation, over interior pairs only.
pub fn convexify_experiment(
    instance: &Instance,
    depths: &[u32],
    witness_limit: usize,
    max_vertices: usize,
) -> Result<Vec<ConvexifyRow>> {
    let ball = instance.require_ball()?;
    if instance.family.is_empty() {
        return Err(Error::input("parabolic family is empty"));
    }
    let pairs = family_interior_pairs(ball, instance);
    let active: Vec<usize> = (0..pairs.len()).filter(|&a| !pairs[a].is_empty()).collect();
    let mut rows = Vec::with_capacity(depths.len());
    for &n in depths {
        let aug = build_augmented(&instance.graph, instance.family.clone(), n, max_vertices)?;
        let carrier = aug.carrier();
        let opts = ConvexityOptions {
            geodesic_cap: None,
            witness_limit,
        };
        let reports = active
            .par_iter()
            .map_init(
                || ConvexityScanner::new(carrier),
                |scanner, &alpha| {
                    let members = &aug.parabolic(alpha).members;
                    let top = |v: VertexId| aug.vertex(alpha, local_index(members, v), n);
                    let explicit = pairs[alpha].iter().map(|&(x, y, _)| (top(x), top(y))).collect();
                    let set = aug.level_vertices(alpha, n);
                    scanner.scan(&set, &PairFilter::Explicit(explicit), &opts)
                },
            )
            .collect::<Result<Vec<_>>>()?;
        let mut row = ConvexifyRow {
            depth: n,
            defect: 0,
            witness_count: 0,
            witnesses: Vec::new(),
            pairs_checked: 0,
            parabolics_checked: active.len(),
            carrier_vertices: carrier.vertex_count(),
        };
        for (&alpha, r) in active.iter().zip(&reports) {
            row.defect = row.defect.max(r.defect);
            row.witness_count += r.witness_count;
            row.pairs_checked += r.pairs_checked;
            for w in &r.witnesses {
                if row.witnesses.len() < witness_limit {
                    row.witnesses.push(ParabolicWitness {
                        alpha: alpha as u32,
                        u: w.u,
                        v: w.v,
                        w: w.w,
                        distance: w.distance,
                    });
                }
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Defect column checks: non-increasing in depth and reaching zero.
pub fn convexify_checks(rows: &[ConvexifyRow]) -> Vec<Check> {
    let mut sorted: Vec<&ConvexifyRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.depth);
    let column: Vec<String> = sorted.iter().map(|r| format!("n={}:{}", r.depth, r.defect)).collect();
    let monotone = sorted.windows(2).all(|w| w[1].defect <= w[0].defect);
    let zero_at = sorted.iter().find(|r| r.defect == 0).map(|r| r.depth);
    vec![
        Check::new("defect_non_increasing", monotone, column.join(" ")),
        Check::new(
            "defect_reaches_zero",
            zero_at.is_some(),
            match zero_at {
                Some(n) => format!("first zero at n={n}"),
                None => "defect stays positive over the depth range".to_owned(),
            },
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorSvarcRow {
    pub t: u32,
    /// Nontrivial elements of the ball moving the basepoint at most `t`.
    pub generators: usize,
    /// Set when `S_t` does not generate within the ball; `k` is then absent.
    pub flagged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Multiplicative constant of the map `(G, t·d_{S_t}) -> X` with
    /// additive constant `t`.
    pub k: Option<Fit>,
    pub pairs_checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorSvarcResult {
    pub depth: u32,
    pub rows: Vec<MilnorSvarcRow>,
    pub checks: Vec<Check>,
}

/// Word metric of the generating set `gens` restricted to the ball:
/// `g ~ g s` whenever both lie in the ball.
fn restricted_cayley_graph(ball: &CayleyBall, gens: &[VertexId]) -> Result<Graph> {
    let g = ball.graph();
    let group = ball.group();
    let mut b = GraphBuilder::new(g.vertex_count());
    for x in g.vertices() {
        for &s in gens {
            if let Some(y) = ball.vertex_of(&group.mul(ball.element(x), ball.element(s))) {
                if x < y {
                    b.add_edge(x, y)?;
                }
            }
        }
    }
    Ok(b.build())
}

/// Orbit displacements from the identity, the sets `S_t`, and the fitted
/// constants `K_t` over interior pairs of the ball.
pub fn milnor_svarc_experiment(
    instance: &Instance,
    depth: u32,
    ts: &[u32],
    max_vertices: usize,
) -> Result<MilnorSvarcResult> {
    let ball = instance.require_ball()?;
    let aug = build_augmented(&instance.graph, instance.family.clone(), depth, max_vertices)?;
    let carrier = aug.carrier();
    let base = ball.graph();
    let e = ball.basepoint();

    let mut ws = BfsWorkspace::new(carrier.vertex_count());
    ws.run(carrier, &[e], INFINITY, None);
    let disp: Vec<u32> = base.vertices().map(|v| ws.dist(v)).collect();
    let orbit: Vec<(VertexId, u32)> = base.vertices().map(|v| (v, disp[v as usize])).collect();
    let inverse = |v: &VertexId| {
        ball.vertex_of(&ball.group().inverse(ball.element(*v)))
            .unwrap_or(VertexId::MAX)
    };

    let all: Vec<VertexId> = base.vertices().collect();
    let mut bws = BfsWorkspace::new(base.vertex_count());
    let pairs = interior_pairs(ball, &all, &mut bws);
    // carrier distances are shared by every t
    let mut target = Vec::with_capacity(pairs.len());
    for run in by_owner(&pairs) {
        let ys: Vec<VertexId> = run.iter().map(|p| p.1).collect();
        ws.run(carrier, &[run[0].0], INFINITY, Some(&ys));
        target.extend(ys.iter().map(|&y| ws.dist(y) as u64));
    }

    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let mut row = MilnorSvarcRow {
            t,
            generators: 0,
            flagged: false,
            reason: None,
            k: None,
            pairs_checked: 0,
        };
        match displacement_generating_set(&orbit, t, inverse) {
            Err(err) => {
                row.generators = orbit.iter().filter(|(_, d)| *d > 0 && *d <= t).count();
                row.flagged = true;
                row.reason = Some(err.to_string());
            }
            Ok(set) => {
                let gens: Vec<VertexId> = set.into_iter().filter(|&v| v != e).collect();
                row.generators = gens.len();
                let word = restricted_cayley_graph(ball, &gens)?;
                let mut samples = Vec::with_capacity(pairs.len());
                let mut disconnected = None;
                let mut at = 0;
                for run in by_owner(&pairs) {
                    let ys: Vec<VertexId> = run.iter().map(|p| p.1).collect();
                    bws.run(&word, &[run[0].0], INFINITY, Some(&ys));
                    for &y in &ys {
                        let d = bws.dist(y);
                        if d == INFINITY {
                            disconnected.get_or_insert((run[0].0, y));
                        } else {
                            samples.push((t as u64 * d as u64, target[at]));
                        }
                        at += 1;
                    }
                }
                if let Some((x, y)) = disconnected {
                    row.flagged = true;
                    row.reason = Some(format!(
                        "S_t does not generate within ball: no word path from {x} to {y}"
                    ));
                } else {
                    let fit = qi_distortion(&samples, Rational::integer(1), Rational::integer(t as i64))?;
                    row.k = Some(fit.multiplicative);
                    row.pairs_checked = fit.pairs_checked;
                }
            }
        }
        rows.push(row);
    }

    let mut checks = trend_checks(&rows);
    if let Some(c) = parabolic_displacement_check(ball, &aug, &disp, ts) {
        checks.push(c);
    }
    Ok(MilnorSvarcResult { depth, rows, checks })
}

fn show(k: Option<Rational>) -> String {
    k.map_or_else(|| "inf".to_owned(), |k| k.to_string())
}

/// `K_t` non-increasing in `t` and ending below where it started, over the
/// unflagged rows.
fn trend_checks(rows: &[MilnorSvarcRow]) -> Vec<Check> {
    // an infinite constant sorts above every finite one
    let key = |r: &MilnorSvarcRow| r.k.and_then(|f| f.exact);
    let mut fitted: Vec<&MilnorSvarcRow> = rows.iter().filter(|r| !r.flagged).collect();
    fitted.sort_by_key(|r| r.t);
    if fitted.len() < 2 {
        return Vec::new();
    }
    let le = |a: Option<Rational>, b: Option<Rational>| match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    };
    let column: Vec<String> = fitted
        .iter()
        .map(|r| format!("t={}:{}", r.t, show(key(r))))
        .collect();
    let monotone = fitted.windows(2).all(|w| le(key(w[1]), key(w[0])));
    let (first, last) = (key(fitted[0]), key(fitted[fitted.len() - 1]));
    let decreased = le(last, first) && last != first;
    vec![
        Check::new("k_non_increasing", monotone, column.join(" ")),
        Check::new("k_decreases", decreased, format!("first {}, last {}", show(first), show(last))),
    ]
}

/// Elements of a parabolic through the identity within `2^n` of it in the
/// parabolic's metric move the basepoint at most `2n + 1`, so they belong to
/// every `S_t` with `t >= 2n + 1`.
fn parabolic_displacement_check(ball: &CayleyBall, aug: &AugmentedSpace, disp: &[u32], ts: &[u32]) -> Option<Check> {
    let n = aug.depth();
    let threshold = 2 * n + 1;
    let t = ts.iter().copied().filter(|&t| t >= threshold).min()?;
    let e = ball.basepoint();
    let mut checked = 0usize;
    let mut missing = Vec::new();
    for (alpha, p) in aug.family().iter().enumerate() {
        let Ok(local) = p.members.binary_search(&e) else { continue };
        let mut ws = BfsWorkspace::new(p.graph.vertex_count());
        let reach = 1u32.checked_shl(n).unwrap_or(u32::MAX);
        ws.run(&p.graph, &[local as VertexId], reach, None);
        for &l in ws.reached() {
            let v = p.members[l as usize];
            if v == e {
                continue;
            }
            checked += 1;
            if disp[v as usize] > t {
                missing.push((alpha, v));
            }
        }
    }
    Some(Check::new(
        "parabolic_elements_in_s_t",
        missing.is_empty(),
        format!(
            "{checked} parabolic elements within 2^{n} of the identity, {} outside S_{t}",
            missing.len()
        ),
    ))
}
