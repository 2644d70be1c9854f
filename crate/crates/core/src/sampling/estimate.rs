//! Monte Carlo estimators and diagnostics.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::explore::{explore_component, explore_partial_shape, Status};
use super::oracle::NoodleOracle;
use super::rng::{mix, RandomSource};
use crate::error::{Error, Result};
use crate::systems::PairSystem;
use crate::words::{Letter, Word};

/// Samples per parallel work unit. Fixed so that results do not depend on
/// the number of threads.
const CHUNK: u64 = 4096;

/// Uniform balanced word of length `2n`, by the cycle lemma: among the
/// rotations of a shuffled word with `n` L's and `n + 1` R's exactly one
/// has all proper prefixes nonnegative, and it ends with an R.
pub fn sample_balanced_word<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Word {
    let mut w: Vec<Letter> = std::iter::repeat_n(Letter::L, n)
        .chain(std::iter::repeat_n(Letter::R, n + 1))
        .collect();
    w.shuffle(rng);
    // first index where the prefix sum reaches its minimum
    let (mut h, mut min, mut at) = (0i64, 0i64, 0usize);
    for (i, c) in w.iter().enumerate() {
        h += c.step();
        if h < min {
            min = h;
            at = i + 1;
        }
    }
    let len = w.len();
    w.rotate_left(at % len);
    w.pop();
    Word::new(0, w)
}

/// Two independent uniform balanced words.
pub fn sample_meandric_system<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PairSystem {
    let upper = sample_balanced_word(n, rng);
    let lower = sample_balanced_word(n, rng);
    PairSystem::new(upper, lower).expect("sampled words are balanced")
}

/// Runs `f(i)` for `i in 0..samples` in fixed-size chunks and folds the
/// chunk results in index order.
fn chunked<T, F, M>(samples: u64, f: F, merge: M) -> Result<T>
where
    T: Default + Send,
    F: Fn(u64, &mut T) -> Result<()> + Sync,
    M: Fn(&mut T, T),
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = T::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                f(i, &mut acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = T::default();
    for p in parts {
        merge(&mut total, p);
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaEstimate {
    pub point: f64,
    pub low: f64,
    pub high: f64,
    pub std_error: f64,
    pub samples: u64,
    pub censored: u64,
    pub budget: Option<u64>,
    pub seed: u64,
}

#[derive(Default)]
struct NoodleTally {
    /// Closed runs by component size.
    closed: BTreeMap<usize, u64>,
    /// Censored runs by a lower bound on their size.
    censored: BTreeMap<usize, u64>,
}

/// Averages `2 / |C_0|` over independent noodles. Censored runs count as 0
/// in `point` and `low`, and in `high` as `2 / m` where `m` is the smallest
/// even number above the count of points found.
pub fn estimate_kappa_noodle(samples: u64, budget: u64, seed: u64) -> Result<KappaEstimate> {
    if samples == 0 {
        return Err(Error::domain("samples must be at least 1"));
    }
    let tally = chunked(
        samples,
        |i, acc: &mut NoodleTally| {
            let mut o = NoodleOracle::new(mix(seed, i));
            let r = explore_component(&mut o, 0, budget)?;
            // an unfinished loop has more points than found, and an even count
            let (map, size) = match r.status {
                Status::Closed => (&mut acc.closed, r.points.len()),
                Status::Censored => (&mut acc.censored, (r.points.len() + 2) & !1),
            };
            *map.entry(size).or_default() += 1;
            Ok(())
        },
        |t, p| {
            for (s, c) in p.closed {
                *t.closed.entry(s).or_default() += c;
            }
            for (s, c) in p.censored {
                *t.censored.entry(s).or_default() += c;
            }
        },
    )?;
    let n = samples as f64;
    let (mut sum, mut sq) = (0.0, 0.0);
    for (&s, &c) in &tally.closed {
        let v = 2.0 / s as f64;
        sum += c as f64 * v;
        sq += c as f64 * v * v;
    }
    let extra: f64 = tally
        .censored
        .iter()
        .map(|(&s, &c)| c as f64 * 2.0 / s as f64)
        .sum();
    let point = sum / n;
    let var = (sq / n - point * point).max(0.0);
    Ok(KappaEstimate {
        point,
        low: point,
        high: (sum + extra) / n,
        std_error: (var / n).sqrt(),
        samples,
        censored: tally.censored.values().sum(),
        budget: Some(budget),
        seed,
    })
}

/// Mean of `cc / n` over uniform meandric systems of size `n`.
pub fn estimate_kappa_finite(n: usize, samples: u64, seed: u64) -> Result<KappaEstimate> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be at least 1"));
    }
    let counts = chunked(
        samples,
        |i, acc: &mut BTreeMap<usize, u64>| {
            let mut rng = RandomSource::new(mix(seed, i));
            let cc = sample_meandric_system(n, &mut rng).cc();
            *acc.entry(cc).or_default() += 1;
            Ok(())
        },
        |t, p| {
            for (cc, c) in p {
                *t.entry(cc).or_default() += c;
            }
        },
    )?;
    let m = samples as f64;
    let (mut sum, mut sq) = (0.0, 0.0);
    for (&cc, &c) in &counts {
        let v = cc as f64 / n as f64;
        sum += c as f64 * v;
        sq += c as f64 * v * v;
    }
    let point = sum / m;
    let var = if samples > 1 {
        ((sq - m * point * point) / (m - 1.0)).max(0.0)
    } else {
        0.0
    };
    let se = (var / m).sqrt();
    Ok(KappaEstimate {
        point,
        low: point,
        high: point,
        std_error: se,
        samples,
        censored: 0,
        budget: None,
        seed,
    })
}

/// Frequencies of the local events around the origin of the noodle.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct EventTally {
    pub samples: u64,
    /// Runs whose component exploration was censored.
    pub censored_components: u64,
    /// Closed component shapes by their word pair.
    pub component_shapes: BTreeMap<String, u64>,
    /// Histogram of `K`; censored runs are not counted.
    pub k_histogram: BTreeMap<usize, u64>,
    pub censored_k: u64,
    /// Partial shapes (for `K >= 1`) by their word pair.
    pub partial_shapes: BTreeMap<String, u64>,
}

impl EventTally {
    fn merge(&mut self, o: EventTally) {
        self.samples += o.samples;
        self.censored_components += o.censored_components;
        self.censored_k += o.censored_k;
        for (s, c) in o.component_shapes {
            *self.component_shapes.entry(s).or_default() += c;
        }
        for (k, c) in o.k_histogram {
            *self.k_histogram.entry(k).or_default() += c;
        }
        for (s, c) in o.partial_shapes {
            *self.partial_shapes.entry(s).or_default() += c;
        }
    }

    pub fn frequency(count: u64, samples: u64) -> f64 {
        count as f64 / samples as f64
    }
}

/// Explores the component of 0 and the partial shape of 0 on each of
/// `samples` independent noodles. Shapes are only recorded up to `max_k`
/// (component half-size or partial-shape `k`) to keep the tables small.
pub fn tally_noodle_events(
    samples: u64,
    budget: u64,
    max_k: usize,
    seed: u64,
) -> Result<EventTally> {
    chunked(
        samples,
        |i, acc: &mut EventTally| {
            acc.samples += 1;
            let mut o = NoodleOracle::new(mix(seed, i));
            let c = explore_component(&mut o, 0, budget)?;
            match c.shape {
                Some(m) if m.k() <= max_k => {
                    *acc.component_shapes.entry(m.to_string()).or_default() += 1
                }
                Some(_) => {}
                None => acc.censored_components += 1,
            }
            let p = explore_partial_shape(&mut o, budget)?;
            match p.k {
                Some(k) => *acc.k_histogram.entry(k).or_default() += 1,
                None => acc.censored_k += 1,
            }
            if let Some(s) = p.partial_shape.filter(|s| s.k() <= max_k) {
                *acc.partial_shapes.entry(s.to_string()).or_default() += 1;
            }
            Ok(())
        },
        EventTally::merge,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalProfile {
    pub n: usize,
    pub radius: usize,
    pub marks: u64,
    pub seed: u64,
    /// Distinct patterns seen, out of `4^(2 radius + 1)`.
    pub patterns_seen: usize,
    /// Total variation distance between the empirical pattern law and the
    /// uniform law on pairs of `2 radius + 1` letters.
    pub tv: f64,
}

/// Samples one meandric system of size `n`, then looks at the pair of
/// letter windows of radius `k` around `marks` uniform positions in
/// `[k, 2n - 1 - k]`.
pub fn local_profile(n: usize, k: usize, marks: u64, seed: u64) -> Result<LocalProfile> {
    let width = 2 * k + 1;
    if 2 * n <= width {
        return Err(Error::domain(format!(
            "n = {n} is too small for radius {k}"
        )));
    }
    if 2 * width > 24 {
        return Err(Error::resource(format!(
            "radius {k} gives too many patterns"
        )));
    }
    let mut rng = RandomSource::new(seed);
    let sys = sample_meandric_system(n, &mut rng);
    let bits = |w: &Word| -> Vec<usize> {
        w.letters()
            .iter()
            .map(|&c| (c == Letter::R) as usize)
            .collect()
    };
    let (u, l) = (bits(sys.upper()), bits(sys.lower()));
    let cells = 1usize << (2 * width);
    let mut counts = vec![0u64; cells];
    let mut mark_rng = rng.derive(1);
    for _ in 0..marks {
        let r = mark_rng.random_range(k..2 * n - k);
        let mut idx = 0usize;
        for j in r - k..=r + k {
            idx = (idx << 2) | (u[j] << 1) | l[j];
        }
        counts[idx] += 1;
    }
    let uniform = 1.0 / cells as f64;
    let tv = 0.5
        * counts
            .iter()
            .map(|&c| (c as f64 / marks as f64 - uniform).abs())
            .sum::<f64>();
    Ok(LocalProfile {
        n,
        radius: k,
        marks,
        seed,
        patterns_seen: counts.iter().filter(|&&c| c > 0).count(),
        tv,
    })
}
