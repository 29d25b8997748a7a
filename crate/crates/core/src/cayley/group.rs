//! Group catalog with unique normal forms.
//!
//! Every element is stored as a list of syllables `(factor, factor element)`
//! with adjacent syllables from distinct factors and no trivial syllable. A
//! group that is not a free product has a single factor, so its elements have
//! at most one syllable. Derived equality on [`GroupElement`] is therefore
//! equality in the group.
//!
//! Heisenberg convention: generators `a`, `b` and central `c = [a,b] =
//! a^-1 b^-1 a b`, with normal form `a^p b^q c^r`. In this convention
//! `b a = a b c^-1`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Letters used for generator names; `e` is reserved for the identity.
const NAME_POOL: &str = "abcdfghijklmnopqrstuvwxyz";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Free(u32),
    FreeAbelian(u32),
    Heisenberg(HeisenbergOptions),
    FreeProduct(Vec<GroupSpec>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeisenbergOptions {
    /// Include `c^{±1}` in the Cayley generating set.
    pub central_generator: bool,
}

impl GroupSpec {
    pub fn heisenberg() -> Self {
        GroupSpec::Heisenberg(HeisenbergOptions::default())
    }

    pub fn is_free_product(&self) -> bool {
        matches!(self, GroupSpec::FreeProduct(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Free { rank: usize },
    Abelian { rank: usize },
    Heisenberg { central_generator: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: FactorKind,
    /// Names of the basic generators (for Heisenberg: `a`, `b`, `c` equivalents).
    pub names: Vec<String>,
}

/// Nontrivial-or-trivial element of a single factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorElement {
    /// Freely reduced word as `(generator, nonzero exponent)` runs with
    /// adjacent generators distinct.
    Free(Vec<(u16, i64)>),
    /// Exponent vector.
    Abelian(Vec<i64>),
    /// `a^p b^q c^r` as `[p, q, r]`.
    Heisenberg([i64; 3]),
}

impl FactorElement {
    fn is_identity(&self) -> bool {
        match self {
            FactorElement::Free(w) => w.is_empty(),
            FactorElement::Abelian(v) => v.iter().all(|&x| x == 0),
            FactorElement::Heisenberg(h) => *h == [0, 0, 0],
        }
    }

    fn mul(&self, other: &FactorElement) -> FactorElement {
        match (self, other) {
            (FactorElement::Free(x), FactorElement::Free(y)) => {
                let mut out = x.clone();
                for &(g, e) in y {
                    match out.last_mut() {
                        Some(last) if last.0 == g => {
                            last.1 += e;
                            if last.1 == 0 {
                                out.pop();
                            }
                        }
                        _ => out.push((g, e)),
                    }
                }
                FactorElement::Free(out)
            }
            (FactorElement::Abelian(x), FactorElement::Abelian(y)) => {
                FactorElement::Abelian(x.iter().zip(y).map(|(a, b)| a + b).collect())
            }
            (FactorElement::Heisenberg([p, q, r]), FactorElement::Heisenberg([p2, q2, r2])) => {
                FactorElement::Heisenberg([p + p2, q + q2, r + r2 - p2 * q])
            }
            _ => unreachable!("syllables of one factor share a kind"),
        }
    }

    fn inverse(&self) -> FactorElement {
        match self {
            FactorElement::Free(w) => {
                FactorElement::Free(w.iter().rev().map(|&(g, e)| (g, -e)).collect())
            }
            FactorElement::Abelian(v) => FactorElement::Abelian(v.iter().map(|x| -x).collect()),
            FactorElement::Heisenberg([p, q, r]) => FactorElement::Heisenberg([-p, -q, -r - p * q]),
        }
    }

    /// Word length in the factor's standard generators, when it has a closed
    /// form.
    fn word_length(&self) -> Option<u64> {
        match self {
            FactorElement::Free(w) => Some(w.iter().map(|&(_, e)| e.unsigned_abs()).sum()),
            FactorElement::Abelian(v) => Some(v.iter().map(|x| x.unsigned_abs()).sum()),
            FactorElement::Heisenberg(_) => None,
        }
    }
}

/// Group element in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement {
    syllables: Vec<(u16, FactorElement)>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::default()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[(u16, FactorElement)] {
        &self.syllables
    }

    pub fn last_factor(&self) -> Option<usize> {
        self.syllables.last().map(|s| s.0 as usize)
    }

    /// Drops a trailing syllable from `factor`, giving the shortest element
    /// of the coset `self * H_factor`.
    pub fn coset_representative(&self, factor: usize) -> GroupElement {
        let mut out = self.clone();
        if out.last_factor() == Some(factor) {
            out.syllables.pop();
        }
        out
    }
}

/// One element of the symmetric generating set `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// `a`, `a^-1`, ...
    pub name: String,
    pub factor: usize,
    pub element: GroupElement,
}

/// A validated [`GroupSpec`] with its generating set and name tables.
#[derive(Clone, Debug)]
pub struct Group {
    spec: GroupSpec,
    factors: Vec<Factor>,
    generators: Vec<Generator>,
    names: HashMap<String, (usize, usize)>,
}

impl Group {
    pub fn new(spec: &GroupSpec) -> Result<Group> {
        let factor_specs: Vec<&GroupSpec> = match spec {
            GroupSpec::FreeProduct(fs) => {
                if fs.len() < 2 {
                    return Err(Error::input("a free product needs at least two factors"));
                }
                if fs.iter().any(GroupSpec::is_free_product) {
                    return Err(Error::input(
                        "nested free products are not supported; list the factors directly",
                    ));
                }
                fs.iter().collect()
            }
            other => vec![other],
        };
        let mut pool = NAME_POOL.chars();
        let mut factors = Vec::new();
        let mut names = HashMap::new();
        for (fi, fs) in factor_specs.into_iter().enumerate() {
            let (kind, count) = match *fs {
                GroupSpec::Free(k) | GroupSpec::FreeAbelian(k) if k == 0 => {
                    return Err(Error::input("group rank must be at least 1"));
                }
                GroupSpec::Free(k) => (FactorKind::Free { rank: k as usize }, k as usize),
                GroupSpec::FreeAbelian(k) => (FactorKind::Abelian { rank: k as usize }, k as usize),
                GroupSpec::Heisenberg(opts) => (
                    FactorKind::Heisenberg {
                        central_generator: opts.central_generator,
                    },
                    3,
                ),
                GroupSpec::FreeProduct(_) => unreachable!(),
            };
            let mut fnames = Vec::new();
            for gi in 0..count {
                let c = pool.next().ok_or_else(|| {
                    Error::input(format!("at most {} generators are supported", NAME_POOL.len()))
                })?;
                names.insert(c.to_string(), (fi, gi));
                fnames.push(c.to_string());
            }
            factors.push(Factor { kind, names: fnames });
        }
        let mut group = Group {
            spec: spec.clone(),
            factors,
            generators: Vec::new(),
            names,
        };
        group.generators = group.build_generators();
        Ok(group)
    }

    fn build_generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for (fi, f) in self.factors.iter().enumerate() {
            let basic = match f.kind {
                FactorKind::Free { rank } | FactorKind::Abelian { rank } => rank,
                FactorKind::Heisenberg { central_generator } => {
                    if central_generator {
                        3
                    } else {
                        2
                    }
                }
            };
            for gi in 0..basic {
                for sign in [1i64, -1] {
                    let element = self.power(fi, gi, sign);
                    let name = if sign == 1 {
                        f.names[gi].clone()
                    } else {
                        format!("{}^-1", f.names[gi])
                    };
                    out.push(Generator { name, factor: fi, element });
                }
            }
        }
        out
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_free_product(&self) -> bool {
        self.spec.is_free_product()
    }

    /// The symmetric generating set `S`, the union of the factors' sets.
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Generators belonging to `factor` (the set `S_i`).
    pub fn factor_generators(&self, factor: usize) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(move |g| g.factor == factor)
    }

    /// `x_gen^exp` where `gen` indexes the factor's basic generators.
    pub fn power(&self, factor: usize, gen: usize, exp: i64) -> GroupElement {
        let fe = match self.factors[factor].kind {
            FactorKind::Free { .. } => FactorElement::Free(if exp == 0 {
                vec![]
            } else {
                vec![(gen as u16, exp)]
            }),
            FactorKind::Abelian { rank } => {
                let mut v = vec![0; rank];
                v[gen] = exp;
                FactorElement::Abelian(v)
            }
            FactorKind::Heisenberg { .. } => {
                let mut h = [0; 3];
                h[gen] = exp;
                FactorElement::Heisenberg(h)
            }
        };
        Self::from_syllable(factor, fe)
    }

    fn from_syllable(factor: usize, fe: FactorElement) -> GroupElement {
        if fe.is_identity() {
            GroupElement::identity()
        } else {
            GroupElement {
                syllables: vec![(factor as u16, fe)],
            }
        }
    }

    /// Checks that `x` is a normal form of this group.
    pub fn validate(&self, x: &GroupElement) -> Result<()> {
        let bad = |why: &str| Err(Error::input(format!("malformed element: {why}")));
        if !self.is_free_product() && x.syllables.len() > 1 {
            return bad("more than one syllable outside a free product");
        }
        for (i, (f, fe)) in x.syllables.iter().enumerate() {
            let f = *f as usize;
            if f >= self.factors.len() {
                return bad("factor index out of range");
            }
            if i > 0 && x.syllables[i - 1].0 as usize == f {
                return bad("adjacent syllables from the same factor");
            }
            if fe.is_identity() {
                return bad("trivial syllable");
            }
            match (&self.factors[f].kind, fe) {
                (FactorKind::Free { rank }, FactorElement::Free(w)) => {
                    for (j, &(g, e)) in w.iter().enumerate() {
                        if g as usize >= *rank || e == 0 {
                            return bad("free word has an invalid letter");
                        }
                        if j > 0 && w[j - 1].0 == g {
                            return bad("free word is not reduced");
                        }
                    }
                }
                (FactorKind::Abelian { rank }, FactorElement::Abelian(v)) if v.len() == *rank => {}
                (FactorKind::Heisenberg { .. }, FactorElement::Heisenberg(_)) => {}
                _ => return bad("syllable kind does not match its factor"),
            }
        }
        Ok(())
    }

    /// Normal form of `x * y`.
    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.mul(x, y))
    }

    /// Unchecked multiplication of valid normal forms.
    pub(crate) fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut out = x.syllables.clone();
        for (f, fe) in &y.syllables {
            match out.last_mut() {
                Some((lf, lfe)) if lf == f => {
                    let merged = lfe.mul(fe);
                    if merged.is_identity() {
                        out.pop();
                    } else {
                        *lfe = merged;
                    }
                }
                _ => out.push((*f, fe.clone())),
            }
        }
        // each of y's syllables is merged into whatever is last, so a
        // cancellation exposes the next pair for merging
        GroupElement { syllables: out }
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        GroupElement {
            syllables: x.syllables.iter().rev().map(|(f, fe)| (*f, fe.inverse())).collect(),
        }
    }

    /// Word length with respect to [`generators`](Self::generators) when a
    /// closed form exists (free, free abelian, and free products of those).
    /// Heisenberg syllables have none; use a Cayley ball instead.
    pub fn word_length(&self, x: &GroupElement) -> Option<u64> {
        x.syllables.iter().map(|(_, fe)| fe.word_length()).sum()
    }

    /// Renders the normal form, e.g. `a^2 b^-1 | c`; the identity is `e`.
    pub fn format(&self, x: &GroupElement) -> String {
        if x.is_identity() {
            return "e".into();
        }
        let mut parts = Vec::new();
        for (f, fe) in &x.syllables {
            let names = &self.factors[*f as usize].names;
            let mut tokens = Vec::new();
            let mut push = |name: &str, e: i64| {
                if e == 1 {
                    tokens.push(name.to_string());
                } else if e != 0 {
                    tokens.push(format!("{name}^{e}"));
                }
            };
            match fe {
                FactorElement::Free(w) => w.iter().for_each(|&(g, e)| push(&names[g as usize], e)),
                FactorElement::Abelian(v) => {
                    v.iter().enumerate().for_each(|(g, &e)| push(&names[g], e))
                }
                FactorElement::Heisenberg(h) => {
                    h.iter().enumerate().for_each(|(g, &e)| push(&names[g], e))
                }
            }
            parts.push(tokens.join(" "));
        }
        parts.join(" | ")
    }

    fn parse_token(&self, tok: &str) -> Result<(usize, usize, i64)> {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| Error::input(format!("bad exponent in token {tok:?}")))?,
            ),
            None => (tok, 1),
        };
        let &(f, g) = self
            .names
            .get(name)
            .ok_or_else(|| Error::input(format!("unknown generator {name:?}")))?;
        Ok((f, g, exp))
    }

    /// Parses a normal form produced by [`format`](Self::format), rejecting
    /// anything that is not already canonical.
    pub fn parse(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        if s == "e" {
            return Ok(GroupElement::identity());
        }
        let mut syllables = Vec::new();
        for part in s.split('|') {
            let mut factor = None;
            let mut tokens = Vec::new();
            for tok in part.split_whitespace() {
                let (f, g, e) = self.parse_token(tok)?;
                if *factor.get_or_insert(f) != f {
                    return Err(Error::input(format!("syllable {part:?} mixes factors")));
                }
                if e == 0 {
                    return Err(Error::input(format!("zero exponent in {tok:?}")));
                }
                tokens.push((g, e));
            }
            let f = factor.ok_or_else(|| Error::input(format!("empty syllable in {s:?}")))?;
            let increasing = tokens.windows(2).all(|w| w[0].0 < w[1].0);
            let fe = match self.factors[f].kind {
                FactorKind::Free { .. } => {
                    FactorElement::Free(tokens.iter().map(|&(g, e)| (g as u16, e)).collect())
                }
                FactorKind::Abelian { rank } => {
                    if !increasing {
                        return Err(Error::input(format!("{part:?} is not in sorted order")));
                    }
                    let mut v = vec![0; rank];
                    tokens.iter().for_each(|&(g, e)| v[g] = e);
                    FactorElement::Abelian(v)
                }
                FactorKind::Heisenberg { .. } => {
                    if !increasing {
                        return Err(Error::input(format!("{part:?} is not of the form a^p b^q c^r")));
                    }
                    let mut h = [0; 3];
                    tokens.iter().for_each(|&(g, e)| h[g] = e);
                    FactorElement::Heisenberg(h)
                }
            };
            syllables.push((f as u16, fe));
        }
        let x = GroupElement { syllables };
        self.validate(&x)?;
        Ok(x)
    }

    /// Evaluates an arbitrary word such as `b a b^-2` (separators `|` are
    /// ignored).
    pub fn evaluate_word(&self, word: &str) -> Result<GroupElement> {
        let mut acc = GroupElement::identity();
        for tok in word.split(|c: char| c.is_whitespace() || c == '|') {
            if tok.is_empty() || tok == "e" {
                continue;
            }
            let (f, g, e) = self.parse_token(tok)?;
            acc = self.mul(&acc, &self.power(f, g, e));
        }
        Ok(acc)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free(k) => write!(f, "F{k}"),
            GroupSpec::FreeAbelian(k) => write!(f, "Z^{k}"),
            GroupSpec::Heisenberg(o) if o.central_generator => write!(f, "H3(a,b,c)"),
            GroupSpec::Heisenberg(_) => write!(f, "H3"),
            GroupSpec::FreeProduct(fs) => {
                let parts: Vec<String> = fs.iter().map(|s| s.to_string()).collect();
                write!(f, "{}", parts.join(" * "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z2() -> GroupSpec {
        GroupSpec::FreeAbelian(2)
    }

    fn catalog() -> Vec<GroupSpec> {
        vec![
            GroupSpec::Free(1),
            GroupSpec::Free(2),
            z2(),
            GroupSpec::FreeAbelian(3),
            GroupSpec::heisenberg(),
            GroupSpec::Heisenberg(HeisenbergOptions { central_generator: true }),
            GroupSpec::FreeProduct(vec![z2(), z2()]),
            GroupSpec::FreeProduct(vec![z2(), GroupSpec::FreeAbelian(1)]),
            GroupSpec::FreeProduct(vec![GroupSpec::heisenberg(), GroupSpec::heisenberg()]),
            GroupSpec::FreeProduct(vec![GroupSpec::Free(2), z2(), GroupSpec::heisenberg()]),
        ]
    }

    /// Independent integer matrix model of the Heisenberg group:
    /// a^p b^q c^r is [[1,p,pq+r],[0,1,q],[0,0,1]].
    type M3 = [[i64; 3]; 3];

    fn mat_mul(x: &M3, y: &M3) -> M3 {
        let mut out = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        out
    }

    fn heis_matrix(h: [i64; 3]) -> M3 {
        let [p, q, r] = h;
        [[1, p, p * q + r], [0, 1, q], [0, 0, 1]]
    }

    fn heis_of(x: &GroupElement) -> [i64; 3] {
        match x.syllables() {
            [] => [0; 3],
            [(0, FactorElement::Heisenberg(h))] => *h,
            _ => panic!("not a Heisenberg element"),
        }
    }

    fn random_element(g: &Group, rng: &mut ChaCha8Rng, len: usize) -> GroupElement {
        let s = g.generators();
        (0..len).fold(GroupElement::identity(), |acc, _| {
            g.mul(&acc, &s[rng.gen_range(0..s.len())].element)
        })
    }

    #[test]
    fn heisenberg_commutator_convention() {
        let g = Group::new(&GroupSpec::heisenberg()).unwrap();
        let ba = g.evaluate_word("b a").unwrap();
        assert_eq!(g.format(&ba), "a b c^-1");
        assert_eq!(ba, g.evaluate_word("a b c^-1").unwrap());
        let comm = g.evaluate_word("a^-1 b^-1 a b").unwrap();
        assert_eq!(g.format(&comm), "c");
        // through the matrix model
        let a = heis_matrix([1, 0, 0]);
        let b = heis_matrix([0, 1, 0]);
        assert_eq!(mat_mul(&b, &a), heis_matrix(heis_of(&ba)));
    }

    #[test]
    fn heisenberg_multiplication_matches_matrices() {
        let g = Group::new(&GroupSpec::heisenberg()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let x = random_element(&g, &mut rng, 9);
            let y = random_element(&g, &mut rng, 9);
            let xy = g.multiply(&x, &y).unwrap();
            assert_eq!(
                heis_matrix(heis_of(&xy)),
                mat_mul(&heis_matrix(heis_of(&x)), &heis_matrix(heis_of(&y)))
            );
        }
    }

    #[test]
    fn group_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for spec in catalog() {
            let g = Group::new(&spec).unwrap();
            let e = GroupElement::identity();
            for _ in 0..1000 {
                let x = random_element(&g, &mut rng, 7);
                let y = random_element(&g, &mut rng, 7);
                let z = random_element(&g, &mut rng, 7);
                g.validate(&x).unwrap();
                assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
                assert_eq!(g.mul(&x, &e), x);
                assert_eq!(g.mul(&e, &x), x);
                assert!(g.mul(&x, &g.inverse(&x)).is_identity());
                assert_eq!(g.parse(&g.format(&x)).unwrap(), x);
            }
        }
    }

    #[test]
    fn abelian_and_free_models() {
        // exponent vectors for Z^3, reduced words for F2, checked by hand
        let z3 = Group::new(&GroupSpec::FreeAbelian(3)).unwrap();
        let x = z3.evaluate_word("c a^2 b c^-3 a").unwrap();
        assert_eq!(z3.format(&x), "a^3 b c^-2");
        assert_eq!(z3.word_length(&x), Some(6));
        let f1 = Group::new(&GroupSpec::Free(1)).unwrap();
        assert!(f1.evaluate_word("a a^-1").unwrap().is_identity());
        let f2 = Group::new(&GroupSpec::Free(2)).unwrap();
        let w = f2.evaluate_word("a b b^-1 a b a^-1 a").unwrap();
        assert_eq!(f2.format(&w), "a^2 b");
    }

    #[test]
    fn free_product_syllables_merge_across_cancellation() {
        let g = Group::new(&GroupSpec::FreeProduct(vec![z2(), z2()])).unwrap();
        let x = g.evaluate_word("a c d a").unwrap();
        assert_eq!(g.format(&x), "a | c d | a");
        let y = g.evaluate_word("a^-1 d^-1 c^-1 b").unwrap();
        let xy = g.multiply(&x, &y).unwrap();
        assert_eq!(g.format(&xy), "a b");
        assert_eq!(g.word_length(&xy), Some(2));
    }

    #[test]
    fn generator_names_and_sets() {
        let g = Group::new(&GroupSpec::FreeProduct(vec![z2(), z2()])).unwrap();
        let names: Vec<&str> = g.generators().iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["a", "a^-1", "b", "b^-1", "c", "c^-1", "d", "d^-1"]);
        assert_eq!(g.factor_generators(1).count(), 4);
        let h = Group::new(&GroupSpec::heisenberg()).unwrap();
        assert_eq!(h.generators().len(), 4);
        let hc = Group::new(&GroupSpec::Heisenberg(HeisenbergOptions { central_generator: true })).unwrap();
        assert_eq!(hc.generators().len(), 6);
        // e is skipped so it can denote the identity
        let three = Group::new(&GroupSpec::FreeProduct(vec![z2(), z2(), z2()])).unwrap();
        assert_eq!(three.factors()[2].names, ["f", "g"]);
    }

    #[test]
    fn rejects_invalid_specs_and_words() {
        assert!(Group::new(&GroupSpec::Free(0)).is_err());
        assert!(Group::new(&GroupSpec::FreeProduct(vec![z2()])).is_err());
        let nested = GroupSpec::FreeProduct(vec![z2(), GroupSpec::FreeProduct(vec![z2(), z2()])]);
        assert!(Group::new(&nested).is_err());
        let g = Group::new(&GroupSpec::FreeProduct(vec![z2(), z2()])).unwrap();
        for bad in ["b a", "a c", "a | a", "a^0", "q", "a^x", "a |", "a a"] {
            assert!(g.parse(bad).is_err(), "accepted {bad:?}");
        }
        let f2 = Group::new(&GroupSpec::Free(2)).unwrap();
        assert!(f2.parse("a a").is_err());
        assert!(f2.parse("b a^-1").is_ok());
        let z = Group::new(&z2()).unwrap();
        let foreign = f2.evaluate_word("a").unwrap();
        assert!(z.multiply(&foreign, &foreign).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let spec: GroupSpec =
            serde_json::from_str(r#"{"free_product":[{"free_abelian":2},{"free_abelian":2}]}"#).unwrap();
        assert_eq!(spec, GroupSpec::FreeProduct(vec![z2(), z2()]));
        let h: GroupSpec = serde_json::from_str(r#"{"heisenberg":{}}"#).unwrap();
        assert_eq!(h, GroupSpec::heisenberg());
        assert!(serde_json::from_str::<GroupSpec>(r#"{"heisenberg":{"bogus":1}}"#).is_err());
    }
}
