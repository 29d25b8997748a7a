//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero when any fails. Tolerances are pinned below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use horolab_core::analysis::{convexity_defect, four_point_delta, ConvexityOptions, PairFilter, QuadrupleSample};
use horolab_core::cayley::{all_coset_families, cayley_ball, GroupSpec, DEFAULT_MAX_VERTICES};
use horolab_core::experiment::{interior_pairs, level_gap_scan, run, ExperimentConfig, Instance, RunStatus};
use horolab_core::graph::{
    bfs_distances, enumerate_geodesics_with_row, generators, rips_graph, BfsWorkspace, DistanceMatrix, Graph,
    VertexId,
};
use horolab_core::horoball::{build_augmented, RestrictedHoroball};
use horolab_core::shortcut::{cycle_distance, LambdaRange, SearchStatus, ShortcutQuery, ShortcutTarget};
use horolab_core::Rational;

/// Wall-clock budget for the exhaustive horoball distance comparison.
const DISTANCE_BUDGET: Duration = Duration::from_secs(60);
/// Geodesics enumerated per pair for the shape-law check.
const GEODESIC_CAP: usize = 10_000;
/// Hausdorff tolerance between any geodesic and the normal form.
const HAUSDORFF_TOLERANCE: u32 = 4;
const FREE_PRODUCT_RADIUS: u32 = 6;
const MAX_DEPTH: u32 = 5;
const MILNOR_SVARC_RADIUS: u32 = 32;
const MILNOR_SVARC_DEPTH: u32 = 2;
const MILNOR_SVARC_TS: [u32; 4] = [1, 2, 4, 8];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn path_with_edges(edges: usize) -> Graph {
    generators::path(edges + 1)
}

fn ceil_div(a: u32, b: u32) -> u32 {
    a.div_ceil(b)
}

fn z2z2() -> GroupSpec {
    GroupSpec::FreeProduct(vec![GroupSpec::FreeAbelian(2), GroupSpec::FreeAbelian(2)])
}

fn rips_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pairs = 0u64;
    let mut failures = 0u64;
    for i in 0..50 {
        let n = rng.gen_range(2..=40);
        let p = rng.gen_range(0.0..0.2);
        let g = generators::random_connected(n, p, 1000 + i);
        let base = DistanceMatrix::new(&g);
        for t in [1, 2, 3, 4, 8] {
            let r = DistanceMatrix::new(&rips_graph(&g, t).unwrap());
            for u in g.vertices() {
                for v in g.vertices() {
                    pairs += 1;
                    if r.get(u, v) != ceil_div(base.get(u, v), t) {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(failures == 0, format!("{pairs} ordered pairs over 50 graphs and t in {{1,2,3,4,8}}, {failures} mismatches"))
}

fn horoball_distance_formula() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0u64;
    let mut mismatches = 0u64;
    for l in [8, 16, 32] {
        for n in 1..=MAX_DEPTH {
            let h = RestrictedHoroball::new(path_with_edges(l), n).unwrap();
            let dm = DistanceMatrix::new(h.carrier());
            for a in h.carrier().vertices() {
                for b in h.carrier().vertices() {
                    pairs += 1;
                    if h.distance(a, b) != dm.get(a, b) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < DISTANCE_BUDGET,
        format!("{pairs} pairs on H_n(P_L), L in {{8,16,32}}, n <= {MAX_DEPTH}: {mismatches} mismatches in {elapsed:.1?} (budget {DISTANCE_BUDGET:?})"),
    )
}

/// Distance matrix of the level-`k` subgraph, indexed by base vertex.
fn level_metric(h: &RestrictedHoroball, k: u32) -> DistanceMatrix {
    let (level, _) = h.carrier().induced(&h.level_vertices(k)).unwrap();
    DistanceMatrix::new(&level)
}

fn level_halving() -> Outcome {
    let mut pairs = 0u64;
    let mut mismatches = 0u64;
    for l in [8, 16, 32] {
        for n in 1..=MAX_DEPTH {
            let h = RestrictedHoroball::new(path_with_edges(l), n).unwrap();
            for k in 0..=n {
                let dm = level_metric(&h, k);
                for x in 0..=l as VertexId {
                    for y in 0..=l as VertexId {
                        pairs += 1;
                        if dm.get(x, y) != ceil_div(x.abs_diff(y), 1 << k) {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    // the published datapoint: 8 apart at level m, 4 apart one level up
    let h = RestrictedHoroball::new(path_with_edges(16), 3).unwrap();
    let datapoint = [(0u32, 8u32), (1, 16)].iter().all(|&(m, y)| {
        level_metric(&h, m).get(0, y) == 8 && level_metric(&h, m + 1).get(0, y) == 4
    });
    outcome(
        mismatches == 0 && datapoint,
        format!("{pairs} level pairs, {mismatches} mismatches; 8 -> 4 datapoint at m = 0 and m = 1: {datapoint}"),
    )
}

fn geodesic_shape_laws() -> Outcome {
    let h = RestrictedHoroball::new(path_with_edges(16), 3).unwrap();
    let g = h.carrier();
    let dm = DistanceMatrix::new(g);
    let mut normal_form_bad = 0u64;
    let mut geodesics = 0u64;
    let mut shape_bad = 0u64;
    let mut far = 0u64;
    let mut truncated = 0u64;
    let mut worst_hausdorff = 0;
    for a in g.vertices() {
        for b in g.vertices() {
            let nf = h.normal_form_geodesic(a, b).unwrap().path();
            if nf.validate(g).is_err() || nf.len() as u32 != dm.get(a, b) || nf.start() != a || nf.end() != b {
                normal_form_bad += 1;
            }
            let set = enumerate_geodesics_with_row(g, a, b, dm.row(b), GEODESIC_CAP).unwrap();
            truncated += set.truncated as u64;
            for p in &set.paths {
                geodesics += 1;
                if !h.verify_geodesic_shape(p).unwrap().passed() {
                    shape_bad += 1;
                }
                let hd = hausdorff(&dm, p.vertices(), nf.vertices());
                worst_hausdorff = worst_hausdorff.max(hd);
                if hd > HAUSDORFF_TOLERANCE {
                    far += 1;
                }
            }
        }
    }
    outcome(
        normal_form_bad == 0 && shape_bad == 0 && far == 0,
        format!(
            "H_3(P_16): {} normal forms ({normal_form_bad} not geodesic), {geodesics} geodesics, \
             {shape_bad} shape violations, max Hausdorff {worst_hausdorff} (tolerance {HAUSDORFF_TOLERANCE}), \
             {truncated} pairs hit the cap",
            g.vertex_count() * g.vertex_count()
        ),
    )
}

fn hausdorff(dm: &DistanceMatrix, a: &[VertexId], b: &[VertexId]) -> u32 {
    let one_way = |x: &[VertexId], y: &[VertexId]| {
        x.iter()
            .map(|&p| y.iter().map(|&q| dm.get(p, q)).min().unwrap())
            .max()
            .unwrap()
    };
    one_way(a, b).max(one_way(b, a))
}

fn deep_convexity() -> Outcome {
    let mut sets = 0;
    let mut worst = 0;
    for n in 1..=MAX_DEPTH {
        let h = RestrictedHoroball::new(path_with_edges(32), n).unwrap();
        for k in 0..=n {
            let set: Vec<VertexId> = h.carrier().vertices().filter(|&v| h.level_of(v) >= k).collect();
            let r = convexity_defect(h.carrier(), &set, &PairFilter::All, &ConvexityOptions::default()).unwrap();
            worst = worst.max(r.defect);
            sets += 1;
        }
    }
    outcome(worst == 0, format!("{sets} level-at-least-k sets of H_n(P_32), n <= {MAX_DEPTH}: max defect {worst}"))
}

fn level_gap_bound() -> Outcome {
    let ball = cayley_ball(&z2z2(), FREE_PRODUCT_RADIUS, DEFAULT_MAX_VERTICES).unwrap();
    let cosets = all_coset_families(&ball).unwrap();
    let inst = Instance::from_ball(ball, &cosets);
    let mut column = Vec::new();
    let mut ok = true;
    for n in 1..=MAX_DEPTH {
        let aug = build_augmented(&inst.graph, inst.family.clone(), n, DEFAULT_MAX_VERTICES).unwrap();
        let gap = level_gap_scan(inst.ball.as_ref().unwrap(), &inst, &aug);
        ok &= gap.holds() && gap.pairs_checked > 0;
        column.push(format!("n={n}: max {} <= {} over {} pairs", gap.max_gap, gap.bound, gap.pairs_checked));
    }
    outcome(ok, format!("Z^2 * Z^2 radius {FREE_PRODUCT_RADIUS}: {}", column.join("; ")))
}

fn convexify() -> Outcome {
    let text = format!(
        r#"{{"version":1,"instance":{{"source":"group","group":{{"free_product":[{{"free_abelian":2}},{{"free_abelian":2}}]}},"radius":{FREE_PRODUCT_RADIUS}}},
            "experiment":{{"kind":"convexify-experiment","depths":[1,2,3,4,5]}}}}"#
    );
    let report = run(&ExperimentConfig::from_json(&text, None).unwrap());
    let defects: Vec<u64> = report.rows.iter().map(|r| r["defect"].as_u64().unwrap()).collect();
    let monotone = defects.windows(2).all(|w| w[1] <= w[0]);
    let first_zero = defects.iter().position(|&d| d == 0).map(|i| i + 1);

    // independent check on the identity cosets at depth 1: every geodesic
    // between interior top-level pairs stays in the top level
    let ball = cayley_ball(&z2z2(), FREE_PRODUCT_RADIUS, DEFAULT_MAX_VERTICES).unwrap();
    let cosets = all_coset_families(&ball).unwrap();
    let inst = Instance::from_ball(ball, &cosets);
    let aug = build_augmented(&inst.graph, inst.family.clone(), 1, DEFAULT_MAX_VERTICES).unwrap();
    let carrier = aug.carrier();
    let mut ws = BfsWorkspace::new(inst.graph.vertex_count());
    let mut enumerated_pairs = 0;
    let mut escapes = 0;
    for alpha in 0..inst.family.len() {
        let members = &inst.family[alpha].members;
        if members[0] != 0 {
            continue;
        }
        let top = |v: VertexId| aug.vertex(alpha, members.binary_search(&v).unwrap() as VertexId, 1);
        let level: std::collections::HashSet<VertexId> = aug.level_vertices(alpha, 1).into_iter().collect();
        let pairs = interior_pairs(inst.ball.as_ref().unwrap(), members, &mut ws);
        let mut rows: std::collections::HashMap<VertexId, Vec<u32>> = Default::default();
        for &(x, y, _) in &pairs {
            let (u, v) = (top(x), top(y));
            let row = rows.entry(v).or_insert_with(|| bfs_distances(carrier, v).unwrap());
            let set = enumerate_geodesics_with_row(carrier, u, v, row, 100_000).unwrap();
            assert!(!set.truncated);
            enumerated_pairs += 1;
            escapes += set.paths.iter().filter(|p| p.vertices().iter().any(|w| !level.contains(w))).count();
        }
    }
    let agrees = (escapes == 0) == (defects[0] == 0);
    outcome(
        report.status == RunStatus::Ok && monotone && first_zero.is_some_and(|n| n <= 5) && agrees,
        format!(
            "Z^2 * Z^2 radius {FREE_PRODUCT_RADIUS}, defect by n = 1..5: {defects:?}, first zero at n = {}, \
             status {:?}; enumeration cross-check at n = 1: {enumerated_pairs} pairs, {escapes} escaping geodesics",
            first_zero.map_or_else(|| "none".to_owned(), |n| n.to_string()),
            report.status
        ),
    )
}

/// Naive existence check over all `|V|^n` maps, with the admissibility
/// table `ok[d][c]` precomputed.
fn naive_exists(dm: &DistanceMatrix, n: usize, lambda: Rational, k: Rational) -> bool {
    let v = dm.len();
    let diam = dm.diameter() as usize;
    let (p, q) = (lambda.numer() as i128, lambda.denom() as i128);
    let (a, b) = (k.numer() as i128, k.denom() as i128);
    let ok: Vec<Vec<bool>> = (0..=diam)
        .map(|d| {
            (0..=n / 2)
                .map(|c| {
                    let (d, c) = (d as i128, c as i128);
                    d * q * a >= p * b * c && d * b * q <= a * p * c
                })
                .collect()
        })
        .collect();
    let mut f = vec![0usize; n];
    loop {
        let good = (0..n).all(|i| {
            (i + 1..n).all(|j| ok[dm.get(f[i] as VertexId, f[j] as VertexId) as usize][cycle_distance(n, i, j)])
        });
        if good {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            f[pos] += 1;
            if f[pos] < v {
                break;
            }
            f[pos] = 0;
            pos += 1;
        }
    }
}

fn shortcut_searches() -> Outcome {
    let r = Rational::new;
    // (i) C_n into itself at K = 1, λ = 1
    let mut identity_ok = 0;
    for n in 3..=12 {
        let c = generators::cycle(n);
        let t = ShortcutTarget::new(&c).unwrap();
        let q = ShortcutQuery::new(n, r(1, 1), LambdaRange::single(r(1, 1)));
        let cell = t.search_cell(&q, r(1, 1)).unwrap();
        let isometric = cell.embedding.as_ref().is_some_and(|e| {
            (0..n).all(|i| (0..n).all(|j| t.distances().get(e.images[i], e.images[j]) as usize == cycle_distance(n, i, j)))
        });
        identity_ok += (cell.status == SearchStatus::Found && isometric) as usize;
    }
    // (ii) no 6-cycle in P_10 at K = 6/5 for λ in [2, 4]
    let p10 = path_with_edges(10);
    let t = ShortcutTarget::new(&p10).unwrap();
    let range = LambdaRange { start: r(2, 1), end: r(4, 1), step: r(1, 4) };
    let q = ShortcutQuery::new(6, r(6, 5), range);
    let mut path_none = true;
    for lambda in range.values() {
        let cell = t.search_cell(&q, lambda).unwrap();
        path_none &= cell.status == SearchStatus::None && cell.exhaustive && !naive_exists(t.distances(), 6, lambda, r(6, 5));
    }
    // (iii) agreement with the naive oracle
    let mut targets: Vec<(String, Graph)> = vec![
        ("C_12".into(), generators::cycle(12)),
        ("C_7".into(), generators::cycle(7)),
        ("P_11".into(), path_with_edges(11)),
        ("grid 3x4".into(), generators::grid(3, 4)),
        ("petersen".into(), generators::petersen()),
        ("K_5".into(), generators::complete(5)),
        ("tree(2,2)".into(), generators::tree(2, 2)),
    ];
    for seed in 0..3 {
        targets.push((format!("random#{seed}"), generators::random_connected(9 + seed as usize, 0.15, 70 + seed)));
    }
    let grid = LambdaRange { start: r(1, 2), end: r(3, 1), step: r(1, 4) };
    let mut cells = 0;
    let mut disagreements = Vec::new();
    for (name, g) in &targets {
        assert!(g.vertex_count() <= 12);
        let t = ShortcutTarget::new(g).unwrap();
        for k in [r(1, 1), r(3, 2)] {
            for n in 3..=6 {
                let q = ShortcutQuery::new(n, k, grid);
                for lambda in grid.values() {
                    let cell = t.search_cell(&q, lambda).unwrap();
                    let expected = naive_exists(t.distances(), n, lambda, k);
                    cells += 1;
                    if !cell.exhaustive || (cell.status == SearchStatus::Found) != expected {
                        disagreements.push(format!("{name} n={n} K={k} λ={lambda}"));
                    }
                }
            }
        }
    }
    outcome(
        identity_ok == 10 && path_none && disagreements.is_empty(),
        format!(
            "isometric C_n found for {identity_ok}/10 n in 3..=12; P_10 n=6 none on [2,4]: {path_none}; \
             {cells} cells on {} targets agree with naive enumeration except {disagreements:?}",
            targets.len()
        ),
    )
}

/// Four-point constant via Gromov products over all ordered quadruples.
fn naive_delta(g: &Graph) -> Rational {
    let dm = DistanceMatrix::new(g);
    let n = g.vertex_count() as VertexId;
    let d = |a, b| dm.get(a, b) as i64;
    let gp = |a, b, w| d(w, a) + d(w, b) - d(a, b);
    let mut best = 0;
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    best = best.max(gp(x, y, w).min(gp(y, z, w)) - gp(x, z, w));
                }
            }
        }
    }
    Rational::new(best, 2)
}

fn delta_estimator() -> Outcome {
    let mut trees_ok = true;
    for (i, tree) in [generators::tree(2, 4), generators::tree(3, 3), generators::random_connected(30, 0.0, 5)]
        .iter()
        .enumerate()
    {
        assert_eq!(tree.edge_count() + 1, tree.vertex_count(), "tree {i}");
        let est = four_point_delta(tree, QuadrupleSample::All).unwrap();
        trees_ok &= est.delta == Rational::integer(0) && est.exhaustive;
    }
    let c12 = generators::cycle(12);
    let est = four_point_delta(&c12, QuadrupleSample::All).unwrap();
    let oracle = naive_delta(&c12);
    let sampled = four_point_delta(&c12, QuadrupleSample::Random { count: 200, seed: 1 }).unwrap();
    let ok = trees_ok && est.delta == oracle && est.exhaustive && est.quadruples_checked == 495 && !sampled.exhaustive;
    outcome(
        ok,
        format!(
            "trees: delta 0 exhaustive: {trees_ok}; C_12: delta {} vs naive {oracle} over {} quadruples (exhaustive {}); sampled run flagged non-exhaustive: {}",
            est.delta, est.quadruples_checked, est.exhaustive, !sampled.exhaustive
        ),
    )
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/milnor_svarc_z2.json")
}

/// `K_t` from closed forms: on Z^2 with the whole group as parabolic, `S_t`
/// is an l1 ball of radius `r_t`, the word metric is `ceil(D / r_t)`, and the
/// augmentation is a single horoball with distance `min_m 2m + ceil(D/2^m)`.
fn closed_form_k(t: u32) -> Option<Rational> {
    let horo = |d: u32| (0..=MILNOR_SVARC_DEPTH).map(|m| 2 * m + d.div_ceil(1 << m)).min().unwrap();
    let r_t = (0..=2 * MILNOR_SVARC_RADIUS).filter(|&d| horo(d) <= t).max()?;
    if r_t == 0 {
        return None;
    }
    let mut best = num_rational::Ratio::from_integer(1i64);
    let c = t as i64;
    for d in 1..=MILNOR_SVARC_RADIUS {
        let dx = (t * d.div_ceil(r_t)) as i64;
        let dy = horo(d) as i64;
        best = best.max(num_rational::Ratio::new(dy - c, dx));
        best = best.max(num_rational::Ratio::new(dx, dy + c));
    }
    Some(Rational(best))
}

fn milnor_svarc_trend() -> Outcome {
    let text = format!(
        r#"{{"version":1,"instance":{{"source":"group","group":{{"free_abelian":2}},"radius":{MILNOR_SVARC_RADIUS},"parabolics":"whole"}},
            "experiment":{{"kind":"milnor-svarc","depth":{MILNOR_SVARC_DEPTH},"t":{MILNOR_SVARC_TS:?}}}}}"#
    );
    let config = ExperimentConfig::from_json(&text, None).unwrap();
    let report = run(&config);
    let again = run(&config);
    let json = report.to_json();
    let stable = json == again.to_json();
    let ks: Vec<Option<Rational>> = report
        .rows
        .iter()
        .map(|r| r["k"]["exact"].as_str().map(|s| s.parse().unwrap()))
        .collect();
    let oracle: Vec<Option<Rational>> = MILNOR_SVARC_TS.iter().map(|&t| closed_form_k(t)).collect();
    let all_finite = ks.iter().all(Option::is_some);
    let k: Vec<Rational> = ks.iter().flatten().copied().collect();
    let monotone = all_finite && k.windows(2).all(|w| w[1] <= w[0]);
    let drops = all_finite && k[k.len() - 1] < k[0];

    let golden = golden_path();
    if std::env::var_os("HOROLAB_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden.parent().unwrap()).unwrap();
        std::fs::write(&golden, &json).unwrap();
    }
    let archived = std::fs::read_to_string(&golden).ok();
    let matches_golden = archived.as_deref() == Some(json.as_str());
    let column: Vec<String> = MILNOR_SVARC_TS
        .iter()
        .zip(&ks)
        .map(|(t, k)| format!("K_{t}={}", k.map_or("flagged".to_owned(), |k| k.to_string())))
        .collect();
    outcome(
        report.status == RunStatus::Ok && monotone && drops && ks == oracle && stable && matches_golden,
        format!(
            "Z^2 radius {MILNOR_SVARC_RADIUS}, depth {MILNOR_SVARC_DEPTH}, C = t: {}; closed form agrees: {}; \
             rerun byte-identical: {stable}; golden report {}",
            column.join(" "),
            ks == oracle,
            if archived.is_none() { "missing" } else if matches_golden { "matches" } else { "differs" }
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rips distance identity", rips_identity),
        ("horoball distance formula", horoball_distance_formula),
        ("level-wise distance halving", level_halving),
        ("geodesic shape laws", geodesic_shape_laws),
        ("deep levels are convex", deep_convexity),
        ("level gap at most 2n in the augmentation", level_gap_bound),
        ("parabolics become convex with depth", convexify),
        ("cycle-embedding searches", shortcut_searches),
        ("four-point delta estimator", delta_estimator),
        ("displacement generating set trend", milnor_svarc_trend),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += !result.passed as usize;
        println!(
            "{} [{:>2}] {name}: {} ({:.1}s)",
            if result.passed { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
