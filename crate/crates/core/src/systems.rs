//! Meandric systems (pairs of non-crossing matchings drawn above and below
//! a line), their partial versions, connected components, and shapes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::words::{Interval, Letter, MarkedWord, PartialMatching, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        }
    }
}

/// A complete meandric system of size `n`: two balanced words of length `2n`
/// on positions `0..2n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSystem {
    upper: Word,
    lower: Word,
}

impl PairSystem {
    pub fn new(upper: Word, lower: Word) -> Result<Self> {
        let (upper, lower) = (upper.normalized(), lower.normalized());
        if upper.len() != lower.len() {
            return Err(Error::invariant(format!(
                "upper has length {}, lower has length {}",
                upper.len(),
                lower.len()
            )));
        }
        for (name, w) in [("upper", &upper), ("lower", &lower)] {
            if !w.is_balanced() {
                return Err(Error::invariant(format!("{name} word {w} is not balanced")));
            }
        }
        Ok(PairSystem { upper, lower })
    }

    pub fn parse(upper: &str, lower: &str) -> Result<Self> {
        PairSystem::new(upper.parse()?, lower.parse()?)
    }

    /// Half-size: the system lives on `2n` points.
    pub fn n(&self) -> usize {
        self.upper.len() / 2
    }

    pub fn upper(&self) -> &Word {
        &self.upper
    }

    pub fn lower(&self) -> &Word {
        &self.lower
    }

    pub fn word(&self, side: Side) -> &Word {
        match side {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        }
    }

    /// Swaps the upper and lower matchings.
    pub fn mirror(&self) -> PairSystem {
        PairSystem {
            upper: self.lower.clone(),
            lower: self.upper.clone(),
        }
    }

    pub fn to_partial(&self) -> PartialSystem {
        PartialSystem {
            upper: self.upper.clone(),
            lower: self.lower.clone(),
        }
    }

    pub fn components(&self) -> ComponentStats {
        components_of_words(&self.upper, &self.lower)
    }

    /// Number of connected components, without building [`ComponentStats`].
    pub fn cc(&self) -> usize {
        count_components(self.upper.letters(), self.lower.letters())
    }

    /// Both sides of the identity `cc/n = E[2/|C_i|]` for a uniform
    /// point `i`, as exact rationals.
    pub fn cc_expectation_identity(&self) -> (BigRational, BigRational) {
        let n = self.n();
        if n == 0 {
            let zero = BigRational::from_integer(0.into());
            return (zero.clone(), zero);
        }
        let stats = self.components();
        let lhs = BigRational::new(BigInt::from(stats.count), BigInt::from(n));
        // (1/2n) * sum_i 2/|C_i|
        let mut sum = BigRational::from_integer(0.into());
        for i in 0..2 * n as i64 {
            sum += BigRational::new(BigInt::from(2), BigInt::from(stats.size_of(i).unwrap()));
        }
        let rhs = sum / BigRational::from_integer(BigInt::from(2 * n));
        (lhs, rhs)
    }
}

impl fmt::Display for PairSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.upper, self.lower)
    }
}

#[derive(Serialize, Deserialize)]
struct PairSystemRecord {
    n: usize,
    upper: String,
    lower: String,
}

impl Serialize for PairSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairSystemRecord {
            n: self.n(),
            upper: self.upper.to_string(),
            lower: self.lower.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PairSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PairSystemRecord::deserialize(d)?;
        let sys = PairSystem::parse(&r.upper, &r.lower).map_err(D::Error::custom)?;
        if sys.n() != r.n {
            return Err(D::Error::custom(format!(
                "declared n = {} but words have half-length {}",
                r.n,
                sys.n()
            )));
        }
        Ok(sys)
    }
}

/// Two non-crossing partial matchings on the same interval, stored through
/// their words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialSystem {
    upper: Word,
    lower: Word,
}

impl PartialSystem {
    pub fn new(upper: Word, lower: Word) -> Result<Self> {
        if upper.domain() != lower.domain() {
            return Err(Error::invariant(format!(
                "upper domain {} differs from lower domain {}",
                upper.domain(),
                lower.domain()
            )));
        }
        Ok(PartialSystem { upper, lower })
    }

    pub fn from_matchings(upper: &PartialMatching, lower: &PartialMatching) -> Result<Self> {
        PartialSystem::new(upper.to_word(), lower.to_word())
    }

    pub fn parse_at(upper: &str, lower: &str, lo: i64) -> Result<Self> {
        PartialSystem::new(Word::parse_at(upper, lo)?, Word::parse_at(lower, lo)?)
    }

    pub fn domain(&self) -> Interval {
        self.upper.domain()
    }

    pub fn upper(&self) -> &Word {
        &self.upper
    }

    pub fn lower(&self) -> &Word {
        &self.lower
    }

    pub fn word(&self, side: Side) -> &Word {
        match side {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        }
    }

    pub fn matching(&self, side: Side) -> PartialMatching {
        self.word(side).to_matching()
    }

    pub fn singletons(&self, side: Side) -> Vec<(i64, Letter)> {
        self.matching(side).singletons()
    }

    pub fn is_complete(&self) -> bool {
        self.upper.is_balanced() && self.lower.is_balanced()
    }

    pub fn mirror(&self) -> PartialSystem {
        PartialSystem {
            upper: self.lower.clone(),
            lower: self.upper.clone(),
        }
    }

    pub fn restrict(&self, sub: Interval) -> Result<PartialSystem> {
        Ok(PartialSystem {
            upper: self.upper.restrict(sub)?,
            lower: self.lower.restrict(sub)?,
        })
    }

    pub fn components(&self) -> ComponentStats {
        components_of_words(&self.upper, &self.lower)
    }

    /// Converts a complete system on `[0, 2n-1]` into a [`PairSystem`].
    pub fn into_pair_system(self) -> Result<PairSystem> {
        if self.upper.lo() != 0 {
            return Err(Error::invariant(format!(
                "pair systems start at 0, got domain {}",
                self.domain()
            )));
        }
        PairSystem::new(self.upper, self.lower)
    }
}

impl fmt::Display for PartialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}@{}", self.upper, self.lower, self.upper.lo())
    }
}

#[derive(Serialize, Deserialize)]
struct PartialSystemRecord {
    lo: i64,
    upper: String,
    lower: String,
    upper_singletons: Vec<(i64, Letter)>,
    lower_singletons: Vec<(i64, Letter)>,
}

impl Serialize for PartialSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartialSystemRecord {
            lo: self.upper.lo(),
            upper: self.upper.to_string(),
            lower: self.lower.to_string(),
            upper_singletons: self.singletons(Side::Upper),
            lower_singletons: self.singletons(Side::Lower),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PartialSystemRecord::deserialize(d)?;
        let sys = PartialSystem::parse_at(&r.upper, &r.lower, r.lo).map_err(D::Error::custom)?;
        if sys.singletons(Side::Upper) != r.upper_singletons
            || sys.singletons(Side::Lower) != r.lower_singletons
        {
            return Err(D::Error::custom("singleton lists disagree with the words"));
        }
        Ok(sys)
    }
}

/// A partial system with a marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSystem {
    system: PartialSystem,
    mark: i64,
}

impl MarkedSystem {
    pub fn new(system: PartialSystem, mark: i64) -> Result<Self> {
        if !system.domain().contains(mark) {
            return Err(Error::domain(format!(
                "mark {mark} outside {}",
                system.domain()
            )));
        }
        Ok(MarkedSystem { system, mark })
    }

    pub fn system(&self) -> &PartialSystem {
        &self.system
    }

    pub fn mark(&self) -> i64 {
        self.mark
    }

    fn marked_word(&self, side: Side) -> MarkedWord {
        MarkedWord::new(self.system.word(side).clone(), self.mark).expect("mark checked")
    }

    /// `1 / (1 + max k)` over radii `k` at which both restricted systems are
    /// equivalent up to shift. Restriction commutes with the word encoding,
    /// so this is the larger of the two one-sided word distances.
    pub fn distance(&self, other: &MarkedSystem) -> Ratio<u64> {
        let du = self
            .marked_word(Side::Upper)
            .distance(&other.marked_word(Side::Upper));
        let dl = self
            .marked_word(Side::Lower)
            .distance(&other.marked_word(Side::Lower));
        du.max(dl)
    }
}

/// Connected components of a (partial) system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStats {
    pub count: usize,
    /// Component sizes, ascending.
    pub sizes: Vec<usize>,
    /// First position of the domain.
    pub lo: i64,
    /// Component id (its minimum position) of each position, in domain order.
    pub component_of: Vec<i64>,
}

impl ComponentStats {
    pub fn component(&self, i: i64) -> Option<i64> {
        let idx = usize::try_from(i.checked_sub(self.lo)?).ok()?;
        self.component_of.get(idx).copied()
    }

    pub fn size_of(&self, i: i64) -> Option<usize> {
        let id = self.component(i)?;
        Some(self.component_of.iter().filter(|&&c| c == id).count())
    }

    /// Points of each component keyed by component id.
    pub fn members(&self) -> BTreeMap<i64, Vec<i64>> {
        let mut out: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for (k, &c) in self.component_of.iter().enumerate() {
            out.entry(c).or_default().push(self.lo + k as i64);
        }
        out
    }
}

fn join_pairs(dsu: &mut DisjointSets, letters: &[Letter]) {
    let mut open = Vec::new();
    for (i, &c) in letters.iter().enumerate() {
        match c {
            Letter::L => open.push(i),
            Letter::R => {
                if let Some(j) = open.pop() {
                    dsu.union(i, j);
                }
            }
        }
    }
}

pub(crate) fn count_components(upper: &[Letter], lower: &[Letter]) -> usize {
    let mut dsu = DisjointSets::new(upper.len());
    join_pairs(&mut dsu, upper);
    join_pairs(&mut dsu, lower);
    (0..upper.len()).filter(|&i| dsu.find(i) == i).count()
}

/// Components of the multigraph whose edges are the pairs of both words'
/// matchings; singletons contribute no edge.
pub fn components_of_words(upper: &Word, lower: &Word) -> ComponentStats {
    debug_assert_eq!(upper.domain(), lower.domain());
    let n = upper.len();
    let mut dsu = DisjointSets::new(n);
    join_pairs(&mut dsu, upper.letters());
    join_pairs(&mut dsu, lower.letters());
    let mut min_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = dsu.find(i);
        min_of_root[r] = min_of_root[r].min(i);
    }
    let component_of: Vec<i64> = (0..n)
        .map(|i| upper.lo() + min_of_root[dsu.find(i)] as i64)
        .collect();
    let mut by_id: BTreeMap<i64, usize> = BTreeMap::new();
    for &c in &component_of {
        *by_id.entry(c).or_default() += 1;
    }
    let mut sizes: Vec<usize> = by_id.values().copied().collect();
    sizes.sort_unstable();
    ComponentStats {
        count: by_id.len(),
        sizes,
        lo: upper.lo(),
        component_of,
    }
}

/// Relabels the ordered point set `points` onto `0..points.len()` by the
/// increasing bijection and re-reads the letters there.
pub fn extract_shape(
    points: &[i64],
    mut upper: impl FnMut(i64) -> Letter,
    mut lower: impl FnMut(i64) -> Letter,
) -> Result<PartialSystem> {
    if points.is_empty() {
        return Err(Error::domain(
            "cannot extract the shape of an empty point set",
        ));
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(
            "component points must be strictly increasing",
        ));
    }
    let up = points.iter().map(|&p| upper(p)).collect();
    let low = points.iter().map(|&p| lower(p)).collect();
    PartialSystem::new(Word::new(0, up), Word::new(0, low))
}
