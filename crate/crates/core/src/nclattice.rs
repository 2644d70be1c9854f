//! Non-crossing partitions of `{1..n}`, their Hasse diagram under
//! refinement, and the doubling map to meandric systems.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dsu::DisjointSets;
use crate::enumeration::BalancedWords;
use crate::error::{Error, Result};
use crate::sampling::{mix, sample_balanced_word, RandomSource};
use crate::systems::PairSystem;
use crate::words::{Letter, Word};

/// Default cap for breadth-first Hasse distances.
pub const HASSE_CAP: usize = 6;
/// Largest `n` accepted by [`enumerate_nc`].
pub const MAX_ENUMERATE_N: usize = 12;

/// A non-crossing partition. Blocks are sorted internally and ordered by
/// their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::invariant("empty block"));
            }
            for &x in b {
                if x == 0 || x > n {
                    return Err(Error::domain(format!("element {x} outside 1..{n}")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::invariant(format!("element {x} appears twice")));
                }
            }
        }
        if let Some(x) = (1..=n).find(|&x| !seen[x]) {
            return Err(Error::invariant(format!("element {x} is in no block")));
        }
        let p = NCPartition::canonical(n, blocks);
        if partition_from_word(&p.word())? != p {
            return Err(Error::invariant(format!("{p} is crossing")));
        }
        Ok(p)
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        NCPartition { n, blocks }
    }

    /// Parses `"1,2,3|4"`; `n` is the number of elements listed.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return NCPartition::new(0, Vec::new());
        }
        let blocks = s
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("bad element {x:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = blocks.iter().map(Vec::len).sum();
        NCPartition::new(n, blocks)
    }

    /// All singletons.
    pub fn zero(n: usize) -> Self {
        NCPartition {
            n,
            blocks: (1..=n).map(|i| vec![i]).collect(),
        }
    }

    /// One block.
    pub fn one(n: usize) -> Self {
        NCPartition {
            n,
            blocks: if n == 0 {
                Vec::new()
            } else {
                vec![(1..=n).collect()]
            },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    fn labels(&self) -> Vec<usize> {
        let mut lab = vec![0; self.n + 1];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &x in b {
                lab[x] = bi;
            }
        }
        lab
    }

    fn same_n(&self, o: &NCPartition) -> Result<()> {
        if self.n != o.n {
            return Err(Error::domain(format!(
                "partitions of {} and {} elements",
                self.n, o.n
            )));
        }
        Ok(())
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &NCPartition) -> Result<bool> {
        self.same_n(other)?;
        let lab = other.labels();
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&x| lab[x] == lab[b[0]])))
    }

    /// Partitions obtained by merging two blocks, when still non-crossing:
    /// exactly the partitions covering `self`.
    pub fn upper_covers(&self) -> Vec<NCPartition> {
        let mut out = Vec::new();
        for i in 0..self.blocks.len() {
            for j in i + 1..self.blocks.len() {
                let mut blocks = self.blocks.clone();
                let b = blocks.remove(j);
                blocks[i].extend(b);
                let p = NCPartition::canonical(self.n, blocks);
                if partition_from_word(&p.word()).is_ok_and(|q| q == p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// One side of the doubling map: element `i` owns points `2i - 2` and
    /// `2i - 1`; a block `i_1 < ... < i_m` contributes the arcs
    /// `(2 i_j - 1, 2 i_{j+1} - 2)` and the closing arc `(2 i_1 - 2, 2 i_m - 1)`.
    pub fn word(&self) -> Word {
        let mut w = vec![Letter::R; 2 * self.n];
        for b in &self.blocks {
            w[2 * b[0] - 2] = Letter::L;
            for pair in b.windows(2) {
                w[2 * pair[0] - 1] = Letter::L;
            }
        }
        Word::new(0, w)
    }
}

/// Inverse of [`NCPartition::word`]: an arc from a right point `2i - 1` to a
/// left point `2i' - 2` puts `i` and `i'` in the same block.
pub fn partition_from_word(w: &Word) -> Result<NCPartition> {
    if !w.is_balanced() || !w.len().is_multiple_of(2) {
        return Err(Error::invariant(format!("{w} is not balanced")));
    }
    let n = w.len() / 2;
    let mut dsu = DisjointSets::new(n + 1);
    let mut open = Vec::new();
    for (p, &c) in w.letters().iter().enumerate() {
        match c {
            Letter::L => open.push(p),
            Letter::R => {
                let a = open.pop().expect("balanced");
                if a % 2 == 1 {
                    dsu.union(a.div_ceil(2), p / 2 + 1);
                }
            }
        }
    }
    let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
    for x in 1..=n {
        by_root.entry(dsu.find(x)).or_default().push(x);
    }
    Ok(NCPartition::canonical(n, by_root.into_values().collect()))
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl FromStr for NCPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NCPartition::parse(s)
    }
}

impl Serialize for NCPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All of NC(n), in the order of their words.
pub fn enumerate_nc(n: usize) -> Result<Vec<NCPartition>> {
    if n > MAX_ENUMERATE_N {
        return Err(Error::resource(format!(
            "NC(n) enumeration is capped at n = {MAX_ENUMERATE_N}"
        )));
    }
    BalancedWords::new(n)
        .map(|w| partition_from_word(&Word::new(0, w)))
        .collect()
}

/// Upper matching from `pi`, lower from `rho`.
pub fn gnp_meandric_system(pi: &NCPartition, rho: &NCPartition) -> Result<PairSystem> {
    pi.same_n(rho)?;
    PairSystem::new(pi.word(), rho.word())
}

/// `n - cc` of the associated meandric system.
pub fn distance_via_cc(pi: &NCPartition, rho: &NCPartition) -> Result<usize> {
    Ok(pi.n - gnp_meandric_system(pi, rho)?.cc())
}

/// The Hasse diagram of NC(n) under refinement.
#[derive(Clone, Debug)]
pub struct HasseGraph {
    n: usize,
    vertices: Vec<NCPartition>,
    index: HashMap<NCPartition, usize>,
    adj: Vec<Vec<usize>>,
}

impl HasseGraph {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::resource(format!(
                "Hasse diagram is capped at n = {cap}, got {n}"
            )));
        }
        let vertices = enumerate_nc(n)?;
        let index: HashMap<NCPartition, usize> = vertices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (i, p) in vertices.iter().enumerate() {
            for q in p.upper_covers() {
                let j = index[&q];
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        Ok(HasseGraph {
            n,
            vertices,
            index,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[NCPartition] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, p: &NCPartition) -> Vec<&NCPartition> {
        self.index
            .get(p)
            .map(|&i| self.adj[i].iter().map(|&j| &self.vertices[j]).collect())
            .unwrap_or_default()
    }

    /// Breadth-first distances from `a` to every vertex, in vertex order.
    pub fn distances_from(&self, a: &NCPartition) -> Result<Vec<usize>> {
        let &s = self
            .index
            .get(a)
            .ok_or_else(|| Error::domain(format!("{a} is not in NC({})", self.n)))?;
        let mut dist = vec![usize::MAX; self.vertices.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    pub fn distance(&self, a: &NCPartition, b: &NCPartition) -> Result<usize> {
        let &t = self
            .index
            .get(b)
            .ok_or_else(|| Error::domain(format!("{b} is not in NC({})", self.n)))?;
        Ok(self.distances_from(a)?[t])
    }
}

/// Graph distance in the Hasse diagram by breadth-first search, for
/// `n <= HASSE_CAP`.
pub fn hasse_distance(a: &NCPartition, b: &NCPartition) -> Result<usize> {
    a.same_n(b)?;
    HasseGraph::new(a.n, HASSE_CAP)?.distance(a, b)
}

/// Uniform element of NC(n).
pub fn sample_nc_partition<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> NCPartition {
    partition_from_word(&sample_balanced_word(n, rng)).expect("sampled word is balanced")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceExperiment {
    pub n: usize,
    pub seed: u64,
    pub samples: u64,
    /// Mean of `d(pi, rho) / n` over uniform pairs.
    pub mean_d_over_n: f64,
    /// Mean of `d(0_n, rho) / n` over uniform `rho`.
    pub mean_d0_over_n: f64,
}

pub fn typical_distance_experiment(
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<DistanceExperiment> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be at least 1"));
    }
    let zero = NCPartition::zero(n);
    let (mut d, mut d0) = (0u64, 0u64);
    for i in 0..samples {
        let mut rng = RandomSource::new(mix(seed, i));
        let pi = sample_nc_partition(n, &mut rng);
        let rho = sample_nc_partition(n, &mut rng);
        d += distance_via_cc(&pi, &rho)? as u64;
        d0 += distance_via_cc(&zero, &rho)? as u64;
    }
    let denom = (n as u64 * samples) as f64;
    Ok(DistanceExperiment {
        n,
        seed,
        samples,
        mean_d_over_n: d as f64 / denom,
        mean_d0_over_n: d0 as f64 / denom,
    })
}
