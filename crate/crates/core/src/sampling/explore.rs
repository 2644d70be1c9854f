//! Exploration of the component of a point in the infinite noodle.

use serde::Serialize;

use super::oracle::LetterSource;
use crate::dsu::DisjointSets;
use crate::enumeration::{Meander, PartialShape};
use crate::error::Result;
use crate::systems::{extract_shape, Side};
use crate::words::Letter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Closed,
    Censored,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplorationResult {
    pub status: Status,
    /// Component points found, ascending.
    pub points: Vec<i64>,
    /// `|C|` when closed.
    pub size: Option<usize>,
    /// The relabeled component, when closed.
    pub shape: Option<Meander>,
    /// Whether the start is the leftmost point of its component. Tentatively
    /// `true` when a partial-shape exploration is censored.
    pub leftmost_is_zero: Option<bool>,
    /// First `k` with 0 joined to the left of the origin inside `[0, k]`.
    pub k: Option<usize>,
    /// The relabeled component of 0 inside `[0, K]` when `K >= 1`.
    pub partial_shape: Option<PartialShape>,
    /// Letter reads spent.
    pub steps: u64,
}

/// Partner of `i` on `side` by an outward balance scan. Returns `None` if
/// the scan would exceed `budget` total steps.
fn scan_partner<S: LetterSource>(
    src: &mut S,
    side: Side,
    i: i64,
    steps: &mut u64,
    budget: u64,
) -> Option<i64> {
    let (dir, open) = match src.letter(side, i) {
        Letter::L => (1, Letter::L),
        Letter::R => (-1, Letter::R),
    };
    let mut depth = 1i64;
    let mut j = i;
    loop {
        if *steps >= budget {
            return None;
        }
        *steps += 1;
        j += dir;
        if src.letter(side, j) == open {
            depth += 1;
        } else {
            depth -= 1;
            if depth == 0 {
                return Some(j);
            }
        }
    }
}

/// Walks the loop through `start`, alternating upper and lower arcs.
///
/// `budget` caps the total number of letters scanned while searching for
/// partners (and hence the component size). A censored result carries the
/// points found so far.
pub fn explore_component<S: LetterSource>(
    src: &mut S,
    start: i64,
    budget: u64,
) -> Result<ExplorationResult> {
    let mut points = vec![start];
    let mut steps = 0u64;
    let mut p = start;
    let closed = loop {
        let Some(q) = scan_partner(src, Side::Upper, p, &mut steps, budget) else {
            break false;
        };
        points.push(q);
        let Some(r) = scan_partner(src, Side::Lower, q, &mut steps, budget) else {
            break false;
        };
        if r == start {
            break true;
        }
        points.push(r);
        p = r;
    };
    points.sort_unstable();
    if !closed {
        return Ok(ExplorationResult {
            status: Status::Censored,
            leftmost_is_zero: (points[0] < start).then_some(false),
            points,
            size: None,
            shape: None,
            k: None,
            partial_shape: None,
            steps,
        });
    }
    let mut letters = |side: Side, i: i64| src.letter(side, i);
    let upper: Vec<Letter> = points.iter().map(|&i| letters(Side::Upper, i)).collect();
    let lower: Vec<Letter> = points.iter().map(|&i| letters(Side::Lower, i)).collect();
    let at = |w: &[Letter], i: i64| w[points.binary_search(&i).expect("component point")];
    let shape = extract_shape(&points, |i| at(&upper, i), |i| at(&lower, i))?
        .into_pair_system()
        .and_then(Meander::new)?;
    Ok(ExplorationResult {
        status: Status::Closed,
        size: Some(points.len()),
        shape: Some(shape),
        leftmost_is_zero: Some(points[0] == start),
        points,
        k: None,
        partial_shape: None,
        steps,
    })
}

/// Reads points `0, 1, 2, ...` until the component of 0 inside `[0, k]`
/// contains a point whose arc leaves to the left of 0 (an `R` with no
/// partner inside the window). The first such `k` is `K`; for `K >= 1` the
/// component of 0 in `[0, K]`, relabeled, is returned as the partial shape.
///
/// If `K > budget` the result is censored and 0 is tentatively leftmost.
pub fn explore_partial_shape<S: LetterSource>(
    src: &mut S,
    budget: u64,
) -> Result<ExplorationResult> {
    let mut dsu = DisjointSets::new(0);
    let mut escapes: Vec<bool> = Vec::new();
    let mut open: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut letters: [Vec<Letter>; 2] = [Vec::new(), Vec::new()];
    for k in 0..=budget as usize {
        dsu.push();
        escapes.push(false);
        for (s, side) in [Side::Upper, Side::Lower].into_iter().enumerate() {
            let c = src.letter(side, k as i64);
            letters[s].push(c);
            match c {
                Letter::L => open[s].push(k),
                Letter::R => match open[s].pop() {
                    Some(j) => {
                        let (ra, rb) = (dsu.find(j), dsu.find(k));
                        let flag = escapes[ra] || escapes[rb];
                        dsu.union(ra, rb);
                        let r = dsu.find(k);
                        escapes[r] = flag;
                    }
                    None => {
                        let r = dsu.find(k);
                        escapes[r] = true;
                    }
                },
            }
        }
        let root = dsu.find(0);
        if !escapes[root] {
            continue;
        }
        let points: Vec<i64> = (0..=k)
            .filter(|&p| dsu.find(p) == root)
            .map(|p| p as i64)
            .collect();
        let partial_shape = if k == 0 {
            None
        } else {
            let sys = extract_shape(
                &points,
                |i| letters[0][i as usize],
                |i| letters[1][i as usize],
            )?;
            Some(PartialShape::new(sys)?)
        };
        return Ok(ExplorationResult {
            status: Status::Closed,
            points,
            size: None,
            shape: None,
            leftmost_is_zero: Some(false),
            k: Some(k),
            partial_shape,
            steps: k as u64 + 1,
        });
    }
    let root = dsu.find(0);
    let points = (0..dsu.len())
        .filter(|&p| dsu.find(p) == root)
        .map(|p| p as i64)
        .collect();
    Ok(ExplorationResult {
        status: Status::Censored,
        points,
        size: None,
        shape: None,
        leftmost_is_zero: Some(true),
        k: None,
        partial_shape: None,
        steps: budget + 1,
    })
}
