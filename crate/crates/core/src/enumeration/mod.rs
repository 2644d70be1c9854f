//! Exhaustive generation of non-crossing matchings, meanders, open shapes,
//! and their faces.
//!
//! Gaps are numbered from 0: gap `g` sits between points `g` and `g + 1`.

mod cache;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::systems::{count_components, PairSystem, PartialSystem, Side};
use crate::words::{partner_table, Interval, Letter, PartialMatching, Word};

pub use cache::{DiskCache, InMemory, Manifest, ShapeSource, CACHE_FORMAT_VERSION};

/// Largest half-size accepted by [`enumerate_noncrossing_matchings`].
pub const MAX_MATCHING_K: usize = 12;
/// Largest half-size accepted by [`enumerate_meanders`].
pub const MAX_MEANDER_K: usize = 8;
/// Largest `k` accepted by [`enumerate_partial_shapes`].
pub const MAX_SHAPE_K: usize = 7;

fn check_cap(what: &str, k: usize, cap: usize) -> Result<()> {
    if k > cap {
        return Err(Error::resource(format!(
            "{what} enumeration is capped at k = {cap}, got k = {k}"
        )));
    }
    Ok(())
}

/// Balanced words of length `2n` in lexicographic order (`L < R`).
#[derive(Clone, Debug)]
pub struct BalancedWords {
    next: Option<Vec<Letter>>,
}

impl BalancedWords {
    pub fn new(n: usize) -> Self {
        let mut first = vec![Letter::L; n];
        first.extend(std::iter::repeat_n(Letter::R, n));
        BalancedWords { next: Some(first) }
    }
}

/// Lexicographic successor of a balanced word, in place. Returns `false` on
/// the last word.
fn advance(w: &mut [Letter]) -> bool {
    let len = w.len();
    let mut heights = Vec::with_capacity(len);
    let mut h = 0i64;
    for &c in w.iter() {
        heights.push(h);
        h += c.step();
    }
    // heights[i] is the height before position i
    for i in (0..len).rev() {
        if w[i] == Letter::L && heights[i] >= 1 {
            let h = heights[i] - 1;
            let rest = len - i - 1;
            let ls = (rest as i64 - h) / 2;
            w[i] = Letter::R;
            for (j, c) in w[i + 1..].iter_mut().enumerate() {
                *c = if (j as i64) < ls {
                    Letter::L
                } else {
                    Letter::R
                };
            }
            return true;
        }
    }
    false
}

impl Iterator for BalancedWords {
    type Item = Vec<Letter>;

    fn next(&mut self) -> Option<Vec<Letter>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if advance(&mut succ) {
            self.next = Some(succ);
        }
        Some(cur)
    }
}

/// All complete non-crossing matchings of `2k` points, in lexicographic
/// order of their words.
pub fn enumerate_noncrossing_matchings(k: usize) -> Result<Vec<PartialMatching>> {
    check_cap("matching", k, MAX_MATCHING_K)?;
    Ok(BalancedWords::new(k)
        .map(|w| Word::new(0, w).to_matching())
        .collect())
}

/// A meandric system with a single component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PairSystem", into = "PairSystem")]
pub struct Meander(PairSystem);

impl Meander {
    pub fn new(system: PairSystem) -> Result<Self> {
        let cc = system.cc();
        if cc != 1 {
            return Err(Error::invariant(format!(
                "{system} has {cc} components, not a meander"
            )));
        }
        Ok(Meander(system))
    }

    pub fn system(&self) -> &PairSystem {
        &self.0
    }

    /// Half-size: the meander has `2k` points.
    pub fn k(&self) -> usize {
        self.0.n()
    }

    pub fn faces(&self) -> FaceDecomposition {
        faces(self)
    }
}

impl TryFrom<PairSystem> for Meander {
    type Error = Error;

    fn try_from(s: PairSystem) -> Result<Self> {
        Meander::new(s)
    }
}

impl From<Meander> for PairSystem {
    fn from(m: Meander) -> PairSystem {
        m.0
    }
}

impl fmt::Display for Meander {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All meanders of half-size `k`, ordered by (upper, lower) words.
pub fn enumerate_meanders(k: usize) -> Result<Vec<Meander>> {
    if k == 0 {
        return Err(Error::domain("meanders have half-size at least 1"));
    }
    check_cap("meander", k, MAX_MEANDER_K)?;
    let words: Vec<Vec<Letter>> = BalancedWords::new(k).collect();
    let tables: Vec<Vec<Option<usize>>> = words.iter().map(|w| partner_table(w)).collect();
    let mut out = Vec::new();
    for (u, tu) in words.iter().zip(&tables) {
        for (l, tl) in words.iter().zip(&tables) {
            if is_single_cycle(tu, tl) {
                let sys = PairSystem::new(Word::new(0, u.clone()), Word::new(0, l.clone()))?;
                out.push(Meander(sys));
            }
        }
    }
    Ok(out)
}

/// Walks the cycle through 0, alternating upper and lower arcs, and checks
/// that it visits every point.
fn is_single_cycle(upper: &[Option<usize>], lower: &[Option<usize>]) -> bool {
    let n = upper.len();
    let mut p = 0usize;
    let mut steps = 0usize;
    loop {
        p = upper[p].expect("balanced");
        p = lower[p].expect("balanced");
        steps += 2;
        if p == 0 {
            return steps == n;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKind {
    Bounded,
    /// Closed off by the virtual arc coming from the left of the window.
    OpenZero,
    /// Closed off by the virtual arc going to the right of the window.
    OpenInfinity,
}

/// A region between an arc and its children on one side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub side: Side,
    /// Arc endpoints; virtual arcs use `-1` or `2k + 1`.
    pub arc: (i64, i64),
    /// Gap indices on the boundary of the face, ascending.
    pub gaps: Vec<i64>,
    pub kind: FaceKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceDecomposition {
    pub faces: Vec<Face>,
    /// Number of gap variables: `2k - 1` for a meander on `2k` points, `2k`
    /// for an open shape on `2k + 1` points.
    pub gap_count: usize,
}

impl FaceDecomposition {
    pub fn bounded(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.kind == FaceKind::Bounded)
    }

    pub fn open_face(&self, kind: FaceKind) -> Option<&Face> {
        self.faces.iter().find(|f| f.kind == kind)
    }

    /// How many faces each gap belongs to.
    pub fn gap_multiplicity(&self) -> Vec<usize> {
        let mut m = vec![0; self.gap_count];
        for f in &self.faces {
            for &g in &f.gaps {
                m[g as usize] += 1;
            }
        }
        m
    }
}

/// Faces cut out by the arcs of `word` (all letters matched), with positions
/// offset by `lo`. For arc `(a, b)` with children `(c_j, d_j)` the face's
/// gaps are `a` and every `d_j`.
fn side_faces(side: Side, word: &[Letter], lo: i64) -> Vec<(i64, i64, Vec<i64>)> {
    let mut out = Vec::new();
    // stack of (open position, collected child right ends)
    let mut stack: Vec<(usize, Vec<i64>)> = Vec::new();
    for (i, &c) in word.iter().enumerate() {
        match c {
            Letter::L => stack.push((i, Vec::new())),
            Letter::R => {
                let (a, kids) = stack.pop().expect("balanced side word");
                let (a, b) = (a as i64 + lo, i as i64 + lo);
                let mut gaps = vec![a];
                gaps.extend(kids);
                out.push((a, b, gaps));
                if let Some(parent) = stack.last_mut() {
                    parent.1.push(b);
                }
            }
        }
    }
    debug_assert!(stack.is_empty(), "{side:?} word is not balanced");
    out
}

/// The bounded faces of a meander: one per arc, `2k` in total.
pub fn faces(c: &Meander) -> FaceDecomposition {
    let sys = c.system();
    let mut faces = Vec::with_capacity(2 * c.k());
    for side in [Side::Upper, Side::Lower] {
        for (a, b, gaps) in side_faces(side, sys.word(side).letters(), 0) {
            faces.push(Face {
                side,
                arc: (a, b),
                gaps,
                kind: FaceKind::Bounded,
            });
        }
    }
    FaceDecomposition {
        faces,
        gap_count: 2 * c.k() - 1,
    }
}

/// A member of the family of open shapes on `[0, 2k]`: connected, one
/// singleton on each side (one `L`, one `R`), and minimal in the sense that
/// dropping the last point does not already connect 0 to an `R`-singleton.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialShape {
    system: PartialSystem,
    upper_singleton: (i64, Letter),
    lower_singleton: (i64, Letter),
}

impl PartialShape {
    pub fn new(system: PartialSystem) -> Result<Self> {
        let d = system.domain();
        if d.lo != 0 || d.len().is_multiple_of(2) || d.len() < 3 {
            return Err(Error::invariant(format!(
                "open shapes live on [0, 2k] with k >= 1, got {d}"
            )));
        }
        let single = |side: Side| -> Result<(i64, Letter)> {
            match system.singletons(side)[..] {
                [s] => Ok(s),
                ref v => Err(Error::invariant(format!(
                    "{side:?} side has {} singletons, expected 1",
                    v.len()
                ))),
            }
        };
        let (us, ls) = (single(Side::Upper)?, single(Side::Lower)?);
        if us.1 == ls.1 {
            return Err(Error::invariant(
                "both singletons carry the same decoration",
            ));
        }
        if system.components().count != 1 {
            return Err(Error::invariant("open shape is not connected"));
        }
        let cut = Interval::new(0, d.hi - 1);
        if zero_reaches_left(
            system.upper().restrict(cut)?.letters(),
            system.lower().restrict(cut)?.letters(),
        ) {
            return Err(Error::invariant(
                "the shape without its last point already connects 0 to an R-singleton",
            ));
        }
        Ok(PartialShape {
            system,
            upper_singleton: us,
            lower_singleton: ls,
        })
    }

    pub fn parse(upper: &str, lower: &str) -> Result<Self> {
        PartialShape::new(PartialSystem::parse_at(upper, lower, 0)?)
    }

    pub fn system(&self) -> &PartialSystem {
        &self.system
    }

    pub fn k(&self) -> usize {
        self.system.domain().len() / 2
    }

    pub fn upper_singleton(&self) -> (i64, Letter) {
        self.upper_singleton
    }

    pub fn lower_singleton(&self) -> (i64, Letter) {
        self.lower_singleton
    }

    pub fn mirror(&self) -> PartialShape {
        PartialShape {
            system: self.system.mirror(),
            upper_singleton: self.lower_singleton,
            lower_singleton: self.upper_singleton,
        }
    }

    pub fn open_faces(&self) -> FaceDecomposition {
        open_faces(self)
    }
}

impl fmt::Display for PartialShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.system.upper(), self.system.lower())
    }
}

impl Serialize for PartialShape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.system.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialShape {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        PartialShape::new(PartialSystem::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Whether the component of position 0 contains an `R`-singleton of either
/// side (a point whose partner lies left of the window).
pub(crate) fn zero_reaches_left(upper: &[Letter], lower: &[Letter]) -> bool {
    let n = upper.len();
    if n == 0 {
        return false;
    }
    let mut dsu = DisjointSets::new(n);
    let mut escapes = Vec::new();
    for w in [upper, lower] {
        let mut open = Vec::new();
        for (i, &c) in w.iter().enumerate() {
            match c {
                Letter::L => open.push(i),
                Letter::R => match open.pop() {
                    Some(j) => {
                        dsu.union(i, j);
                    }
                    None => escapes.push(i),
                },
            }
        }
    }
    let root = dsu.find(0);
    escapes.into_iter().any(|i| dsu.find(i) == root)
}

/// Words of length `len` with exactly one unmatched letter.
fn one_singleton_words(len: usize) -> (Vec<Vec<Letter>>, Vec<Vec<Letter>>) {
    let (mut with_l, mut with_r) = (Vec::new(), Vec::new());
    for bits in 0u64..(1u64 << len) {
        let w: Vec<Letter> = (0..len)
            .map(|i| {
                if bits >> (len - 1 - i) & 1 == 0 {
                    Letter::L
                } else {
                    Letter::R
                }
            })
            .collect();
        let (mut depth, mut unmatched_r) = (0usize, 0usize);
        for &c in &w {
            match c {
                Letter::L => depth += 1,
                Letter::R if depth > 0 => depth -= 1,
                Letter::R => unmatched_r += 1,
            }
        }
        match (depth, unmatched_r) {
            (1, 0) => with_l.push(w),
            (0, 1) => with_r.push(w),
            _ => {}
        }
    }
    (with_l, with_r)
}

/// All open shapes on `2k + 1` points, ordered by (upper, lower) words.
///
/// Each side carries exactly one singleton, so the search pairs words with
/// one unmatched `L` against words with one unmatched `R` instead of
/// scanning all `4^(2k+1)` letter pairs.
pub fn enumerate_partial_shapes(k: usize) -> Result<Vec<PartialShape>> {
    if k == 0 {
        return Err(Error::domain("open shapes have k >= 1"));
    }
    check_cap("open shape", k, MAX_SHAPE_K)?;
    let len = 2 * k + 1;
    let (with_l, with_r) = one_singleton_words(len);
    let mut out = Vec::new();
    let mut all: Vec<&Vec<Letter>> = with_l.iter().chain(&with_r).collect();
    all.sort();
    for u in &all {
        let u_has_l = u.iter().filter(|&&c| c == Letter::L).count() > k;
        let partners: &Vec<Vec<Letter>> = if u_has_l { &with_r } else { &with_l };
        for l in partners {
            if count_components(u, l) != 1 {
                continue;
            }
            if zero_reaches_left(&u[..len - 1], &l[..len - 1]) {
                continue;
            }
            let sys = PartialSystem::new(Word::new(0, (*u).clone()), Word::new(0, l.clone()))?;
            out.push(PartialShape::new(sys)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Completes an open shape with two virtual arcs and returns every face.
///
/// The side holding the `L`-singleton `s` gains the arc `(s, 2k + 1)`, whose
/// face is [`FaceKind::OpenInfinity`]; the side holding the `R`-singleton `t`
/// gains `(-1, t)`, whose face is [`FaceKind::OpenZero`]. The sentinel gaps
/// `-1` and `2k` carry no variable and are dropped.
pub fn open_faces(p: &PartialShape) -> FaceDecomposition {
    let k = p.k() as i64;
    let top = 2 * k;
    let mut faces = Vec::with_capacity(2 * p.k() + 2);
    for side in [Side::Upper, Side::Lower] {
        let w = p.system().word(side).letters();
        let (_, deco) = match side {
            Side::Upper => p.upper_singleton(),
            Side::Lower => p.lower_singleton(),
        };
        let (completed, lo) = match deco {
            Letter::L => {
                let mut v = w.to_vec();
                v.push(Letter::R);
                (v, 0)
            }
            Letter::R => {
                let mut v = vec![Letter::L];
                v.extend_from_slice(w);
                (v, -1)
            }
        };
        for (a, b, gaps) in side_faces(side, &completed, lo) {
            let kind = if b == top + 1 {
                FaceKind::OpenInfinity
            } else if a == -1 {
                FaceKind::OpenZero
            } else {
                FaceKind::Bounded
            };
            let gaps = gaps.into_iter().filter(|&g| g >= 0 && g < top).collect();
            faces.push(Face {
                side,
                arc: (a, b),
                gaps,
                kind,
            });
        }
    }
    FaceDecomposition {
        faces,
        gap_count: 2 * p.k(),
    }
}
