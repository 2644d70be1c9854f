//! Letters of the two infinite words of the noodle, drawn on demand.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::systems::Side;
use crate::words::{Letter, Word};

/// Read access to the letters of two words on ℤ.
pub trait LetterSource {
    fn letter(&mut self, side: Side, i: i64) -> Letter;
}

/// One direction of one side: letters at offsets `0, 1, 2, ...` drawn
/// 64 at a time from its own ChaCha stream.
#[derive(Clone, Debug)]
struct Tape {
    rng: ChaCha8Rng,
    blocks: Vec<u64>,
}

impl Tape {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Tape {
            rng,
            blocks: Vec::new(),
        }
    }

    fn get(&mut self, idx: u64) -> Letter {
        let b = (idx / 64) as usize;
        while self.blocks.len() <= b {
            self.blocks.push(self.rng.next_u64());
        }
        if self.blocks[b] >> (idx % 64) & 1 == 0 {
            Letter::L
        } else {
            Letter::R
        }
    }
}

/// Two independent sequences of fair letters indexed by ℤ.
///
/// Each side has one tape for positions `>= 0` and one for positions `< 0`.
/// Tapes are filled sequentially from their own stream, so the letter at a
/// position depends only on the seed, never on the order of queries.
#[derive(Clone, Debug)]
pub struct NoodleOracle {
    seed: u64,
    tapes: [Tape; 4],
    queries: u64,
}

impl NoodleOracle {
    pub fn new(seed: u64) -> Self {
        NoodleOracle {
            seed,
            tapes: [0, 1, 2, 3].map(|s| Tape::new(seed, s)),
            queries: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Letters materialized so far, over both sides.
    pub fn drawn(&self) -> u64 {
        self.tapes.iter().map(|t| t.blocks.len() as u64 * 64).sum()
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Letters on `[lo, hi]` of one side as a word.
    pub fn window(&mut self, side: Side, lo: i64, hi: i64) -> Word {
        Word::new(lo, (lo..=hi).map(|i| self.letter(side, i)).collect())
    }
}

impl LetterSource for NoodleOracle {
    fn letter(&mut self, side: Side, i: i64) -> Letter {
        self.queries += 1;
        let base = match side {
            Side::Upper => 0,
            Side::Lower => 2,
        };
        if i >= 0 {
            self.tapes[base].get(i as u64)
        } else {
            self.tapes[base + 1].get((-(i + 1)) as u64)
        }
    }
}

/// Fixed letters on a window, with a fallback source elsewhere.
#[derive(Clone, Debug)]
pub struct ScriptedLetters<S> {
    upper: Word,
    lower: Word,
    rest: S,
}

impl<S: LetterSource> ScriptedLetters<S> {
    /// `upper` and `lower` must cover the same domain.
    pub fn new(upper: Word, lower: Word, rest: S) -> Self {
        assert_eq!(upper.domain(), lower.domain(), "scripted windows differ");
        ScriptedLetters { upper, lower, rest }
    }
}

impl<S: LetterSource> LetterSource for ScriptedLetters<S> {
    fn letter(&mut self, side: Side, i: i64) -> Letter {
        let w = match side {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        };
        w.get(i).unwrap_or_else(|| self.rest.letter(side, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_never_change() {
        let mut o = NoodleOracle::new(5);
        let first: Vec<Letter> = (-300..300).map(|i| o.letter(Side::Upper, i)).collect();
        let again: Vec<Letter> = (-300..300)
            .rev()
            .map(|i| o.letter(Side::Upper, i))
            .collect();
        let again: Vec<Letter> = again.into_iter().rev().collect();
        assert_eq!(first, again);
        assert_eq!(o.queries(), 1200);
        assert_eq!(o.drawn(), 640);
    }

    #[test]
    fn order_of_queries_is_irrelevant() {
        let mut a = NoodleOracle::new(9);
        let mut b = NoodleOracle::new(9);
        let _ = b.letter(Side::Lower, 5000);
        let _ = b.letter(Side::Upper, -777);
        for i in -100..100 {
            for side in [Side::Upper, Side::Lower] {
                assert_eq!(a.letter(side, i), b.letter(side, i));
            }
        }
    }

    #[test]
    fn sides_are_distinct_streams() {
        let mut o = NoodleOracle::new(1);
        let up = o.window(Side::Upper, 0, 127);
        let low = o.window(Side::Lower, 0, 127);
        assert_ne!(up.letters(), low.letters());
        let l = up.count(Letter::L) + low.count(Letter::L);
        assert!((96..=160).contains(&l), "{l}");
    }

    #[test]
    fn scripted_window() {
        let mut s = ScriptedLetters::new(
            Word::parse_at("LR", 0).unwrap(),
            Word::parse_at("RR", 0).unwrap(),
            NoodleOracle::new(3),
        );
        assert_eq!(s.letter(Side::Upper, 0), Letter::L);
        assert_eq!(s.letter(Side::Lower, 1), Letter::R);
        let mut o = NoodleOracle::new(3);
        assert_eq!(s.letter(Side::Upper, 2), o.letter(Side::Upper, 2));
    }
}
