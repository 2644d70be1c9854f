//! Letters, words over integer intervals, and the bijection between words
//! and non-crossing partial matchings.
//!
//! A word assigns `L` or `R` to every position of a finite integer interval.
//! Reading `L` as an opening and `R` as a closing parenthesis, positions are
//! paired parenthesis-wise; unmatched `L`s become singletons decorated `L`
//! (their arc leaves the window to the right) and unmatched `R`s become
//! singletons decorated `R` (their arc comes from the left). This is a
//! bijection onto non-crossing partial matchings and commutes with
//! restriction to subintervals.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::L => Letter::R,
            Letter::R => Letter::L,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::L => 'L',
            Letter::R => 'R',
        }
    }

    pub fn from_char(c: char) -> Result<Letter> {
        match c {
            'L' => Ok(Letter::L),
            'R' => Ok(Letter::R),
            other => Err(Error::Parse(format!("invalid letter {other:?}"))),
        }
    }

    /// +1 for `L`, -1 for `R`.
    #[inline]
    pub fn step(self) -> i64 {
        match self {
            Letter::L => 1,
            Letter::R => -1,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Inclusive integer interval `[lo, hi]`; empty when `hi < lo`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Self {
        Interval { lo, hi }
    }

    /// The interval `[lo, lo + len - 1]`.
    pub fn with_len(lo: i64, len: usize) -> Self {
        Interval {
            lo,
            hi: lo + len as i64 - 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Partner table of a letter slice, indexed from 0: `Some(j)` for paired
/// positions, `None` for singletons.
pub(crate) fn partner_table(letters: &[Letter]) -> Vec<Option<usize>> {
    let mut partners = vec![None; letters.len()];
    let mut open = Vec::new();
    for (i, &c) in letters.iter().enumerate() {
        match c {
            Letter::L => open.push(i),
            Letter::R => {
                if let Some(j) = open.pop() {
                    partners[i] = Some(j);
                    partners[j] = Some(i);
                }
            }
        }
    }
    partners
}

/// A finite word over `{L, R}` indexed by an integer interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    lo: i64,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(lo: i64, letters: Vec<Letter>) -> Self {
        Word { lo, letters }
    }

    pub fn empty(lo: i64) -> Self {
        Word {
            lo,
            letters: Vec::new(),
        }
    }

    /// Parses a string over `{L, R}` placed at positions `lo, lo+1, ...`.
    pub fn parse_at(s: &str, lo: i64) -> Result<Self> {
        let letters = s.chars().map(Letter::from_char).collect::<Result<_>>()?;
        Ok(Word { lo, letters })
    }

    pub fn domain(&self) -> Interval {
        Interval::with_len(self.lo, self.letters.len())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn get(&self, i: i64) -> Option<Letter> {
        let idx = i.checked_sub(self.lo)?;
        usize::try_from(idx)
            .ok()
            .and_then(|idx| self.letters.get(idx).copied())
    }

    /// The same letters re-indexed from 0.
    pub fn normalized(&self) -> Word {
        Word {
            lo: 0,
            letters: self.letters.clone(),
        }
    }

    pub fn count(&self, c: Letter) -> usize {
        self.letters.iter().filter(|&&x| x == c).count()
    }

    /// Equal numbers of `L` and `R`, and every prefix has at least as many
    /// `L` as `R`.
    pub fn is_balanced(&self) -> bool {
        let mut h = 0i64;
        for c in &self.letters {
            h += c.step();
            if h < 0 {
                return false;
            }
        }
        h == 0
    }

    /// `#L - #R` among positions `<= i`, for `i` in the domain or `lo - 1`.
    pub fn height(&self, i: i64) -> Result<i64> {
        if i < self.lo - 1 || i > self.domain().hi {
            return Err(Error::domain(format!(
                "position {i} outside {} (or lo-1)",
                self.domain()
            )));
        }
        let upto = (i - self.lo + 1) as usize;
        Ok(self.letters[..upto].iter().map(|c| c.step()).sum())
    }

    /// Matched position of `i`, or `None` when `i` is a singleton or lies
    /// outside the domain. Single stack sweep, nothing cached.
    pub fn partner(&self, i: i64) -> Option<i64> {
        let idx = usize::try_from(i.checked_sub(self.lo)?).ok()?;
        if idx >= self.letters.len() {
            return None;
        }
        // Only the side toward which the arc opens needs scanning.
        match self.letters[idx] {
            Letter::L => {
                let mut depth = 0usize;
                for (j, &c) in self.letters.iter().enumerate().skip(idx + 1) {
                    match c {
                        Letter::L => depth += 1,
                        Letter::R if depth == 0 => return Some(self.lo + j as i64),
                        Letter::R => depth -= 1,
                    }
                }
                None
            }
            Letter::R => {
                let mut depth = 0usize;
                for j in (0..idx).rev() {
                    match self.letters[j] {
                        Letter::R => depth += 1,
                        Letter::L if depth == 0 => return Some(self.lo + j as i64),
                        Letter::L => depth -= 1,
                    }
                }
                None
            }
        }
    }

    pub(crate) fn partner_table(&self) -> Vec<Option<usize>> {
        partner_table(&self.letters)
    }

    pub fn to_matching(&self) -> PartialMatching {
        let partners = self.partner_table();
        let slots = partners
            .iter()
            .zip(&self.letters)
            .map(|(p, &c)| match p {
                Some(j) => Slot::Paired(self.lo + *j as i64),
                None => Slot::Single(c),
            })
            .collect();
        PartialMatching { lo: self.lo, slots }
    }

    /// Letters on `sub`, which must lie inside the domain.
    pub fn restrict(&self, sub: Interval) -> Result<Word> {
        if !self.domain().contains_interval(&sub) {
            return Err(Error::domain(format!(
                "{sub} is not a subinterval of {}",
                self.domain()
            )));
        }
        if sub.is_empty() {
            return Ok(Word::empty(sub.lo));
        }
        let a = (sub.lo - self.lo) as usize;
        Ok(Word {
            lo: sub.lo,
            letters: self.letters[a..a + sub.len()].to_vec(),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse_at(s, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Paired(i64),
    Single(Letter),
}

/// A partition of an interval into pairs and decorated singletons, with
/// none of the forbidden configurations (crossing pairs, a singleton under
/// a pair, an `L`-singleton left of an `R`-singleton).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialMatching {
    lo: i64,
    slots: Vec<Slot>,
}

impl PartialMatching {
    /// Builds and validates a matching on `domain`.
    pub fn from_parts(
        domain: Interval,
        pairs: &[(i64, i64)],
        singletons: &[(i64, Letter)],
    ) -> Result<Self> {
        let mut slots: Vec<Option<Slot>> = vec![None; domain.len()];
        let mut place = |i: i64, slot: Slot| -> Result<()> {
            if !domain.contains(i) {
                return Err(Error::domain(format!("position {i} outside {domain}")));
            }
            let cell = &mut slots[(i - domain.lo) as usize];
            if cell.is_some() {
                return Err(Error::invariant(format!("position {i} used twice")));
            }
            *cell = Some(slot);
            Ok(())
        };
        for &(a, b) in pairs {
            if a == b {
                return Err(Error::invariant(format!("degenerate pair {{{a}, {b}}}")));
            }
            place(a, Slot::Paired(b))?;
            place(b, Slot::Paired(a))?;
        }
        for &(i, c) in singletons {
            place(i, Slot::Single(c))?;
        }
        let slots = slots
            .into_iter()
            .enumerate()
            .map(|(k, s)| {
                s.ok_or_else(|| {
                    Error::invariant(format!("position {} not covered", domain.lo + k as i64))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = PartialMatching {
            lo: domain.lo,
            slots,
        };
        // Non-crossing iff the matching is the one its own word encodes.
        if m.word_unchecked().to_matching() != m {
            return Err(Error::invariant("matching is crossing"));
        }
        Ok(m)
    }

    pub fn domain(&self) -> Interval {
        Interval::with_len(self.lo, self.slots.len())
    }

    pub fn slot(&self, i: i64) -> Option<Slot> {
        let idx = usize::try_from(i.checked_sub(self.lo)?).ok()?;
        self.slots.get(idx).copied()
    }

    pub fn partner(&self, i: i64) -> Option<i64> {
        match self.slot(i)? {
            Slot::Paired(j) => Some(j),
            Slot::Single(_) => None,
        }
    }

    /// Pairs `(a, b)` with `a < b`, ordered by `a`.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.domain()
            .positions()
            .zip(&self.slots)
            .filter_map(|(i, s)| match *s {
                Slot::Paired(j) if i < j => Some((i, j)),
                _ => None,
            })
            .collect()
    }

    pub fn singletons(&self) -> Vec<(i64, Letter)> {
        self.domain()
            .positions()
            .zip(&self.slots)
            .filter_map(|(i, s)| match *s {
                Slot::Single(c) => Some((i, c)),
                _ => None,
            })
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.slots.iter().all(|s| matches!(s, Slot::Paired(_)))
    }

    fn word_unchecked(&self) -> Word {
        let letters = self
            .domain()
            .positions()
            .zip(&self.slots)
            .map(|(i, s)| match *s {
                Slot::Single(c) => c,
                Slot::Paired(j) if i < j => Letter::L,
                Slot::Paired(_) => Letter::R,
            })
            .collect();
        Word::new(self.lo, letters)
    }

    /// Inverse of [`Word::to_matching`].
    pub fn to_word(&self) -> Word {
        self.word_unchecked()
    }

    /// Restriction to `sub`: pairs inside are kept, pairs cut in half become
    /// singletons decorated `L` (partner to the right) or `R` (partner to the
    /// left).
    pub fn restrict(&self, sub: Interval) -> Result<PartialMatching> {
        if !self.domain().contains_interval(&sub) {
            return Err(Error::domain(format!(
                "{sub} is not a subinterval of {}",
                self.domain()
            )));
        }
        let slots = sub
            .positions()
            .map(|i| match self.slot(i).expect("inside domain") {
                Slot::Paired(j) if !sub.contains(j) => {
                    Slot::Single(if j > i { Letter::L } else { Letter::R })
                }
                s => s,
            })
            .collect();
        Ok(PartialMatching { lo: sub.lo, slots })
    }
}

impl fmt::Display for PartialMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

/// A word together with a marked position of its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedWord {
    word: Word,
    mark: i64,
}

impl MarkedWord {
    pub fn new(word: Word, mark: i64) -> Result<Self> {
        if !word.domain().contains(mark) {
            return Err(Error::domain(format!(
                "mark {mark} outside {}",
                word.domain()
            )));
        }
        Ok(MarkedWord { word, mark })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn mark(&self) -> i64 {
        self.mark
    }

    fn left_extent(&self) -> i64 {
        self.mark - self.word.lo()
    }

    fn right_extent(&self) -> i64 {
        self.word.domain().hi - self.mark
    }

    /// Radius-`k` views around the marks agree up to a shift.
    fn agree_at(&self, other: &MarkedWord, k: i64) -> bool {
        let (l1, r1) = (k.min(self.left_extent()), k.min(self.right_extent()));
        let (l2, r2) = (k.min(other.left_extent()), k.min(other.right_extent()));
        l1 == l2
            && r1 == r2
            && (-l1..=r1).all(|d| self.word.get(self.mark + d) == other.word.get(other.mark + d))
    }

    /// Largest radius at which the two marked words agree up to shift:
    /// `None` if they differ at the mark, `Some(None)` if they agree at every
    /// radius (are equivalent).
    pub fn agreement_radius(&self, other: &MarkedWord) -> Option<Option<u64>> {
        let stop = self
            .left_extent()
            .max(self.right_extent())
            .max(other.left_extent())
            .max(other.right_extent());
        // Agreement is monotone in k, so the first failure fixes the answer.
        for k in 0..=stop {
            if !self.agree_at(other, k) {
                return if k == 0 {
                    None
                } else {
                    Some(Some(k as u64 - 1))
                };
            }
        }
        Some(None)
    }

    /// `1 / (1 + max k)` where `k` ranges over radii at which the views agree;
    /// 0 for equivalent marked words, 1 when the marked letters differ.
    pub fn distance(&self, other: &MarkedWord) -> Ratio<u64> {
        radius_to_distance(self.agreement_radius(other))
    }
}

pub(crate) fn radius_to_distance(r: Option<Option<u64>>) -> Ratio<u64> {
    match r {
        None => Ratio::from_integer(1),
        Some(None) => Ratio::from_integer(0),
        Some(Some(k)) => Ratio::new(1, k + 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn balanced_examples() {
        assert!(w("LLRR").is_balanced());
        assert!(w("LRLR").is_balanced());
        assert!(!w("RL").is_balanced());
        assert!(!w("LRL").is_balanced());
        assert!(w("").is_balanced());
    }

    #[test]
    fn height_examples() {
        assert_eq!(w("LLRR").height(1).unwrap(), 2);
        assert_eq!(w("LLRR").height(3).unwrap(), 0);
        assert_eq!(w("LRLR").height(2).unwrap(), 1);
        assert_eq!(w("LRLR").height(-1).unwrap(), 0);
        assert!(matches!(w("LRLR").height(4), Err(Error::Domain(_))));
        assert!(matches!(w("LRLR").height(-2), Err(Error::Domain(_))));
    }

    #[test]
    fn word_to_matching_examples() {
        let m = w("LLRR").to_matching();
        assert_eq!(m.pairs(), vec![(0, 3), (1, 2)]);
        assert!(m.singletons().is_empty());

        let m = Word::parse_at("RLR", 0).unwrap().to_matching();
        assert_eq!(m.pairs(), vec![(1, 2)]);
        assert_eq!(m.singletons(), vec![(0, Letter::R)]);

        assert_eq!(w("LRLR").to_matching().pairs(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn matching_to_word_examples() {
        let d = Interval::new(0, 3);
        let m = PartialMatching::from_parts(d, &[(0, 3), (1, 2)], &[]).unwrap();
        assert_eq!(m.to_word().to_string(), "LLRR");

        let m =
            PartialMatching::from_parts(Interval::new(0, 2), &[(1, 2)], &[(0, Letter::R)]).unwrap();
        assert_eq!(m.to_word().to_string(), "RLR");

        let m = PartialMatching::from_parts(Interval::new(0, -1), &[], &[]).unwrap();
        assert_eq!(m.to_word().to_string(), "");
    }

    #[test]
    fn crossing_inputs_rejected() {
        let d = Interval::new(0, 3);
        assert!(matches!(
            PartialMatching::from_parts(d, &[(0, 2), (1, 3)], &[]),
            Err(Error::Invariant(_))
        ));
        // singleton under a pair
        assert!(
            PartialMatching::from_parts(Interval::new(0, 2), &[(0, 2)], &[(1, Letter::L)]).is_err()
        );
        // L-singleton left of an R-singleton
        assert!(PartialMatching::from_parts(
            Interval::new(0, 1),
            &[],
            &[(0, Letter::L), (1, Letter::R)]
        )
        .is_err());
        // R left of L is fine
        assert!(PartialMatching::from_parts(
            Interval::new(0, 1),
            &[],
            &[(0, Letter::R), (1, Letter::L)]
        )
        .is_ok());
        // uncovered position
        assert!(PartialMatching::from_parts(Interval::new(0, 2), &[(0, 1)], &[]).is_err());
    }

    #[test]
    fn restrict_examples() {
        let m = w("LLRR").to_matching();
        let r = m.restrict(Interval::new(0, 1)).unwrap();
        assert!(r.pairs().is_empty());
        assert_eq!(r.singletons(), vec![(0, Letter::L), (1, Letter::L)]);

        let r = m.restrict(Interval::new(1, 3)).unwrap();
        assert_eq!(r.pairs(), vec![(1, 2)]);
        assert_eq!(r.singletons(), vec![(3, Letter::R)]);

        assert!(matches!(
            m.restrict(Interval::new(2, 5)),
            Err(Error::Domain(_))
        ));
        assert!(w("LLRR").restrict(Interval::new(-1, 1)).is_err());
    }

    #[test]
    fn partner_examples() {
        assert_eq!(w("LLRR").partner(0), Some(3));
        assert_eq!(w("RLR").partner(0), None);
        assert_eq!(w("LRLR").partner(2), Some(3));
        assert_eq!(w("LRLR").partner(3), Some(2));
        assert_eq!(Word::parse_at("LLRR", -2).unwrap().partner(-1), Some(0));
        assert_eq!(w("LR").partner(7), None);
    }

    #[test]
    fn marked_distance_examples() {
        let a = MarkedWord::new(w("LLRR"), 1).unwrap();
        assert_eq!(a.distance(&a), Ratio::from_integer(0));
        let b = MarkedWord::new(w("RLRL"), 2).unwrap();
        assert_eq!(a.distance(&b), Ratio::from_integer(1));

        // same letters around the mark up to radius 1, differ at radius 2
        let c = MarkedWord::new(w("LLRRL"), 2).unwrap();
        let d = MarkedWord::new(w("RLRRR"), 2).unwrap();
        assert_eq!(c.distance(&d), Ratio::new(1, 2));

        // shifted copies are equivalent
        let e = MarkedWord::new(Word::parse_at("LLRR", 10).unwrap(), 11).unwrap();
        assert_eq!(a.distance(&e), Ratio::from_integer(0));
        assert!(MarkedWord::new(w("LR"), 2).is_err());
    }

    #[test]
    fn boundary_truncation_breaks_equivalence() {
        // same letters, but one view is cut by the boundary at radius 1
        let a = MarkedWord::new(w("LR"), 0).unwrap();
        let b = MarkedWord::new(w("LLR"), 1).unwrap();
        assert_eq!(a.distance(&b), Ratio::from_integer(1));
    }
}
