use std::collections::HashSet;
use std::hash::Hash;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BfsWorkspace, Graph, Path, INFINITY};
use crate::rational::Rational;

/// A fitted constant: the exact optimum and its value rounded up to the fit
/// grid. `None` means no finite constant exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Fit {
    pub exact: Option<Rational>,
    pub value: Option<Rational>,
}

impl Fit {
    pub fn finite(exact: Rational) -> Fit {
        Fit {
            exact: Some(exact),
            value: Some(exact.ceil_to_grid()),
        }
    }

    pub fn infinite() -> Fit {
        Fit { exact: None, value: None }
    }

    pub fn is_finite(&self) -> bool {
        self.exact.is_some()
    }
}

/// Running maximum of lower bounds on a constant that is at least 1.
struct FitAccumulator {
    best: Ratio<i64>,
    infinite: bool,
}

impl FitAccumulator {
    fn new() -> Self {
        FitAccumulator {
            best: Ratio::from_integer(1),
            infinite: false,
        }
    }

    /// Requires `K >= numer / denom`; a non-positive `denom` with a positive
    /// `numer` makes `K` infinite.
    fn require(&mut self, numer: Ratio<i64>, denom: Ratio<i64>) {
        if numer <= Ratio::from_integer(0) {
            return;
        }
        if denom <= Ratio::from_integer(0) {
            self.infinite = true;
            return;
        }
        let r = numer / denom;
        if r > self.best {
            self.best = r;
        }
    }

    fn finish(self) -> Fit {
        if self.infinite {
            Fit::infinite()
        } else {
            Fit::finite(Rational(self.best))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowViolation {
    /// Position of the window's first vertex in the path.
    pub start: usize,
    pub length: usize,
    /// Distance between the window's endpoints.
    pub distance: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalGeodesicCheck {
    pub holds: bool,
    pub first_violation: Option<WindowViolation>,
}

/// Whether every subpath of length `min(r, |p|)` is a geodesic.
pub fn is_r_local_geodesic(g: &Graph, p: &Path, r: usize) -> Result<LocalGeodesicCheck> {
    if r == 0 {
        return Err(Error::input("window length must be at least 1"));
    }
    p.validate(g)?;
    let w = r.min(p.len());
    let vs = p.vertices();
    let mut ws = BfsWorkspace::new(g.vertex_count());
    for start in 0..vs.len() - w {
        let (a, b) = (vs[start], vs[start + w]);
        ws.run(g, &[a], w as u32, Some(&[b]));
        let d = ws.dist(b);
        if d != w as u32 {
            return Ok(LocalGeodesicCheck {
                holds: false,
                first_violation: Some(WindowViolation {
                    start,
                    length: w,
                    distance: d,
                }),
            });
        }
    }
    Ok(LocalGeodesicCheck {
        holds: true,
        first_violation: None,
    })
}

/// Smallest `L >= 1` with `|i-j|/L - C <= d(p_i, p_j) <= L|i-j| + C` over all
/// index pairs. The upper inequality holds with `L = 1` for any path, so the
/// lower one decides.
pub fn quasigeodesic_fit(g: &Graph, p: &Path, additive: Rational) -> Result<Fit> {
    if additive.0 < Ratio::from_integer(0) {
        return Err(Error::input("additive budget must be nonnegative"));
    }
    p.validate(g)?;
    let vs = p.vertices();
    let mut acc = FitAccumulator::new();
    let mut ws = BfsWorkspace::new(g.vertex_count());
    for i in 0..vs.len() {
        ws.run(g, &[vs[i]], INFINITY, Some(&vs[i + 1..]));
        for (j, &v) in vs.iter().enumerate().skip(i + 1) {
            let gap = Ratio::from_integer((j - i) as i64);
            acc.require(gap, Ratio::from_integer(ws.dist(v) as i64) + additive.0);
        }
    }
    Ok(acc.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QiFit {
    pub scale: Rational,
    pub additive_budget: Rational,
    pub multiplicative: Fit,
    pub pairs_checked: u64,
}

/// Smallest `K >= 1` with `d_X/K - C <= scale * d_Y <= K d_X + C` over
/// aligned samples `(d_X, d_Y)`.
pub fn qi_distortion(pairs: &[(u64, u64)], scale: Rational, additive: Rational) -> Result<QiFit> {
    if !scale.is_positive() {
        return Err(Error::input("scale must be positive"));
    }
    if additive.0 < Ratio::from_integer(0) {
        return Err(Error::input("additive budget must be nonnegative"));
    }
    let mut acc = FitAccumulator::new();
    for &(dx, dy) in pairs {
        let dx = Ratio::from_integer(dx as i64);
        let image = scale.0 * Ratio::from_integer(dy as i64);
        // image <= K dx + C
        acc.require(image - additive.0, dx);
        // dx / K <= image + C
        acc.require(dx, image + additive.0);
    }
    Ok(QiFit {
        scale,
        additive_budget: additive,
        multiplicative: acc.finish(),
        pairs_checked: pairs.len() as u64,
    })
}

/// Elements moving the basepoint at most `t`, in orbit order. The orbit must
/// be closed under `inverse`, and the set must contain a nontrivial element.
pub fn displacement_generating_set<T: Clone + Eq + Hash>(
    orbit: &[(T, u32)],
    t: u32,
    inverse: impl Fn(&T) -> T,
) -> Result<Vec<T>> {
    let chosen: Vec<T> = orbit
        .iter()
        .filter(|(_, d)| *d <= t)
        .map(|(x, _)| x.clone())
        .collect();
    if !orbit.iter().any(|(_, d)| *d > 0 && *d <= t) {
        let min = orbit.iter().map(|(_, d)| *d).filter(|&d| d > 0).min();
        return Err(Error::input(format!(
            "S_t does not generate within ball: no element moves the basepoint by 1..={t} \
             (smallest nonzero displacement {})",
            min.map_or_else(|| "none".into(), |d| d.to_string())
        )));
    }
    let set: HashSet<&T> = chosen.iter().collect();
    if chosen.iter().any(|x| !set.contains(&inverse(x))) {
        return Err(Error::input(
            "displacement set is not closed under inversion; the orbit sample is incomplete",
        ));
    }
    Ok(chosen)
}
