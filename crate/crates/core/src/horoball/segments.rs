use serde::Serialize;

use crate::graph::{Path, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Ascending,
    Descending,
    Horizontal { level: u32 },
}

/// A maximal run of same-kind edges, as vertex positions `start..=end` of
/// the classified path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SegmentClassification {
    pub segments: Vec<Segment>,
}

impl SegmentClassification {
    /// Splits `p` into the classified subpaths.
    pub fn pieces(&self, p: &Path) -> Vec<Path> {
        self.segments.iter().map(|s| p.subpath(s.start, s.end)).collect()
    }

    pub fn count(&self, pred: impl Fn(SegmentKind) -> bool) -> usize {
        self.segments.iter().filter(|s| pred(s.kind)).count()
    }
}

/// Decomposes a path into maximal ascending, descending and horizontal
/// segments. `level` gives the height of each vertex; an edge joining
/// different levels is vertical. The path is assumed valid.
pub fn classify_by_level(p: &Path, level: impl Fn(VertexId) -> u32) -> SegmentClassification {
    let vs = p.vertices();
    let mut segments: Vec<Segment> = Vec::new();
    for i in 0..vs.len().saturating_sub(1) {
        let (a, b) = (level(vs[i]), level(vs[i + 1]));
        let kind = match b.cmp(&a) {
            std::cmp::Ordering::Greater => SegmentKind::Ascending,
            std::cmp::Ordering::Less => SegmentKind::Descending,
            std::cmp::Ordering::Equal => SegmentKind::Horizontal { level: a },
        };
        match segments.last_mut() {
            Some(s) if s.kind == kind => s.end = i + 1,
            _ => segments.push(Segment {
                kind,
                start: i,
                end: i + 1,
            }),
        }
    }
    SegmentClassification { segments }
}

/// Clauses of the geodesic shape law for paths in a depth-`n` horoball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeClause {
    /// (a) no ascending segment after a descending one
    NoAscentAfterDescent,
    /// (b) horizontal segments of length >= 2 lie at the path's top level
    LongCrossingAtTop,
    /// (c) horizontal segments of length >= 6 lie at the deepest level
    VeryLongCrossingAtDepth,
    /// (d) at most two ascending and two descending segments
    FewVerticalSegments,
    /// (e) never below the lower endpoint level
    StaysAboveEndpoints,
    /// (f) a crossing of length >= 2 at level K < n keeps the path at or below K
    ShallowCrossingCapsHeight,
    /// (g) at most one horizontal edge outside the top level
    OneExtraHorizontalEdge,
}

impl ShapeClause {
    pub const ALL: [ShapeClause; 7] = [
        ShapeClause::NoAscentAfterDescent,
        ShapeClause::LongCrossingAtTop,
        ShapeClause::VeryLongCrossingAtDepth,
        ShapeClause::FewVerticalSegments,
        ShapeClause::StaysAboveEndpoints,
        ShapeClause::ShallowCrossingCapsHeight,
        ShapeClause::OneExtraHorizontalEdge,
    ];

    pub fn letter(self) -> char {
        (b'a' + ShapeClause::ALL.iter().position(|&c| c == self).unwrap() as u8) as char
    }

    /// Clauses (a)-(f) are required of every geodesic; (g) is reported
    /// separately.
    pub fn is_required(self) -> bool {
        self != ShapeClause::OneExtraHorizontalEdge
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseCheck {
    pub clause: ShapeClause,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub checks: Vec<ClauseCheck>,
}

impl ShapeReport {
    /// True when every required clause holds.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds || !c.clause.is_required())
    }

    pub fn holds(&self, clause: ShapeClause) -> bool {
        self.checks.iter().find(|c| c.clause == clause).is_some_and(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &ClauseCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Evaluates every shape clause on a path whose geodesicity was already
/// established.
pub(crate) fn shape_report(p: &Path, level: impl Fn(VertexId) -> u32, depth: u32) -> ShapeReport {
    let cls = classify_by_level(p, &level);
    let segs = &cls.segments;
    let levels: Vec<u32> = p.vertices().iter().map(|&v| level(v)).collect();
    let top = *levels.iter().max().unwrap();
    let floor = level(p.start()).min(level(p.end()));
    let horizontal = |s: &Segment| match s.kind {
        SegmentKind::Horizontal { level } => Some(level),
        _ => None,
    };

    let mut checks = Vec::new();
    let mut push = |clause, bad: Option<String>| {
        checks.push(ClauseCheck {
            clause,
            holds: bad.is_none(),
            detail: bad,
        })
    };

    let first_descent = segs.iter().position(|s| s.kind == SegmentKind::Descending);
    let late_ascent = first_descent.and_then(|d| {
        segs[d..].iter().find(|s| s.kind == SegmentKind::Ascending)
    });
    push(
        ShapeClause::NoAscentAfterDescent,
        late_ascent.map(|s| format!("ascends at position {} after descending", s.start)),
    );

    let low_long = segs
        .iter()
        .find(|s| s.len() >= 2 && horizontal(s).is_some_and(|l| l < top));
    push(
        ShapeClause::LongCrossingAtTop,
        low_long.map(|s| {
            format!(
                "horizontal segment of length {} at level {} below top level {top}",
                s.len(),
                horizontal(s).unwrap()
            )
        }),
    );

    let very_long = segs
        .iter()
        .find(|s| s.len() >= 6 && horizontal(s).is_some_and(|l| l < depth));
    push(
        ShapeClause::VeryLongCrossingAtDepth,
        very_long.map(|s| {
            format!(
                "horizontal segment of length {} at level {} < {depth}",
                s.len(),
                horizontal(s).unwrap()
            )
        }),
    );

    let ups = cls.count(|k| k == SegmentKind::Ascending);
    let downs = cls.count(|k| k == SegmentKind::Descending);
    push(
        ShapeClause::FewVerticalSegments,
        (ups > 2 || downs > 2)
            .then(|| format!("{ups} ascending and {downs} descending segments")),
    );

    let lowest = *levels.iter().min().unwrap();
    push(
        ShapeClause::StaysAboveEndpoints,
        (lowest < floor).then(|| format!("visits level {lowest} below endpoint level {floor}")),
    );

    let capped = segs
        .iter()
        .filter(|s| s.len() >= 2)
        .filter_map(horizontal)
        .filter(|&l| l < depth)
        .min();
    push(
        ShapeClause::ShallowCrossingCapsHeight,
        capped
            .filter(|&k| top > k)
            .map(|k| format!("crossing of length >= 2 at level {k} but path reaches level {top}")),
    );

    let extra: usize = segs
        .iter()
        .filter(|s| horizontal(s).is_some_and(|l| l < top))
        .map(Segment::len)
        .sum();
    push(
        ShapeClause::OneExtraHorizontalEdge,
        (extra > 1).then(|| format!("{extra} horizontal edges below top level {top}")),
    );

    ShapeReport { checks }
}
