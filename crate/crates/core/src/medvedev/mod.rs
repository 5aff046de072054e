//! Medvedev frames and their Kripke semantics.
//!
//! `M_n` is the poset of non-empty subsets of `{1..n}` ordered by reverse
//! inclusion: `⋀I ≤ ⋀J` iff `J ⊆ I`. A world is stored as the bitmask of
//! its generator set; maximal worlds are the singletons and the bottom is
//! the full set.
//!
//! Sets of worlds are bitsets indexed directly by mask (bit 0, the empty
//! set, is never a world). With that layout the up- and down-closure
//! operators are a handful of shift-and-mask steps per generator, and a
//! whole truth set of `M_n` for `n <= 6` fits in one `u64`.

pub(crate) mod bits;
mod search;
mod subframe;
mod upset;
mod valuation;
mod witness;

use std::fmt;

use thiserror::Error;

pub use search::{refute, valid_on, SearchMode, SearchOptions, Strategy, Verdict, DEFAULT_BUDGET};
pub(crate) use search::search_valuations;
pub use search::{exhaustive_steps, random_upset};
pub use subframe::{disjoint_embed, dp_countermodel, generated_subframe, Embedding, Reindex};
pub use upset::{enumerate_upsets, upset_count, UpSet, EXHAUSTIVE_MAX_N};
pub use valuation::{persistence_check, Valuation, ValuationMap};
pub use witness::{RefutationWitness, WitnessJson, WitnessParseError};

pub const MAX_N: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame size {n} is outside 1..={max}", max = MAX_N)]
    FrameSize { n: u32 },
    #[error("world {mask:#b} does not belong to M_{n}")]
    WorldOutOfFrame { mask: u32, n: u32 },
    #[error("a world needs a non-empty generator set")]
    EmptyWorld,
    #[error("generator {index} is outside 1..={n}")]
    GeneratorOutOfRange { index: usize, n: u32 },
    #[error("truth set for `{atom}` is not upward closed")]
    NotUpwardClosed { atom: String },
    #[error("up-set belongs to M_{found}, expected M_{expected}")]
    FrameMismatch { expected: u32, found: u32 },
    #[error("valuation has no entry for atom `{0}`")]
    UnknownAtom(String),
    #[error("exhaustive enumeration is limited to n <= {max}; got n = {n}", max = EXHAUSTIVE_MAX_N)]
    EnumerationTooLarge { n: u32 },
    #[error("exhaustive search needs {steps} evaluation steps, budget is {budget}")]
    BudgetExceeded { steps: u128, budget: u64 },
    #[error("`{formula}` is forced at the claimed witness world")]
    NotRefuted { formula: String },
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
}

/// A world `⋀I` of a Medvedev frame, as the bitmask of `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct World(u32);

impl World {
    pub fn from_mask(mask: u32) -> Result<World, FrameError> {
        if mask == 0 {
            return Err(FrameError::EmptyWorld);
        }
        Ok(World(mask))
    }

    /// Build `⋀I` from 1-based generator indices.
    pub fn from_generators(gens: &[usize]) -> Result<World, FrameError> {
        let mut mask = 0u32;
        for &g in gens {
            if g == 0 || g > MAX_N as usize {
                return Err(FrameError::GeneratorOutOfRange {
                    index: g,
                    n: MAX_N,
                });
            }
            mask |= 1 << (g - 1);
        }
        World::from_mask(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Sorted 1-based generator indices.
    pub fn generators(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    /// Number of generators; maximal worlds have exactly one.
    pub fn generator_count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_maximal(self) -> bool {
        self.0.count_ones() == 1
    }

    /// `self ≤ other` in the frame order, i.e. `other ⊆ self`. The derived
    /// `Ord` is plain mask order and unrelated.
    pub fn is_below(self, other: World) -> bool {
        other.0 & !self.0 == 0
    }

    /// The meet `⋀(I ∪ J)`.
    pub fn meet(self, other: World) -> World {
        World(self.0 | other.0)
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        write!(f, "⋀{{{}}}", gens.join(","))
    }
}

/// The Medvedev frame `M_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    n: u32,
}

impl Frame {
    pub fn new(n: u32) -> Result<Frame, FrameError> {
        if n == 0 || n > MAX_N {
            return Err(FrameError::FrameSize { n });
        }
        Ok(Frame { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `2^n - 1`.
    pub fn world_count(&self) -> usize {
        (1usize << self.n) - 1
    }

    pub fn contains(&self, w: World) -> bool {
        w.0 >> self.n == 0
    }

    pub fn check(&self, w: World) -> Result<(), FrameError> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(FrameError::WorldOutOfFrame {
                mask: w.0,
                n: self.n,
            })
        }
    }

    pub fn world(&self, gens: &[usize]) -> Result<World, FrameError> {
        if let Some(&g) = gens.iter().find(|&&g| g == 0 || g > self.n as usize) {
            return Err(FrameError::GeneratorOutOfRange {
                index: g,
                n: self.n,
            });
        }
        World::from_generators(gens)
    }

    /// All worlds in ascending mask order.
    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (1..=self.world_count() as u32).map(World)
    }

    /// The maximal worlds `⋀{1}, …, ⋀{n}`.
    pub fn maximal_worlds(&self) -> impl Iterator<Item = World> {
        (0..self.n).map(|i| World(1 << i))
    }

    /// `⋀{1..n}`.
    pub fn bottom(&self) -> World {
        World(self.world_count() as u32)
    }

    /// Worlds `w' ≥ w` (the generated subframe `↑w`), ascending by mask.
    pub fn above(&self, w: World) -> impl Iterator<Item = World> {
        let mask = w.0;
        // enumerate non-empty submasks
        let mut sub = mask;
        let mut out = Vec::with_capacity(1 << w.generator_count());
        while sub != 0 {
            out.push(World(sub));
            sub = (sub - 1) & mask;
        }
        out.reverse();
        out.into_iter()
    }

    pub fn le(&self, a: World, b: World) -> bool {
        a.is_below(b)
    }

    pub(crate) fn words(&self) -> usize {
        bits::words_for(self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_sizes() {
        assert_eq!(Frame::new(1).unwrap().world_count(), 1);
        assert_eq!(Frame::new(3).unwrap().world_count(), 7);
        assert_eq!(Frame::new(3).unwrap().worlds().count(), 7);
        assert!(Frame::new(0).is_err());
        assert!(Frame::new(21).is_err());
    }

    #[test]
    fn order_is_reverse_inclusion() {
        let m2 = Frame::new(2).unwrap();
        let w12 = m2.world(&[1, 2]).unwrap();
        let w1 = m2.world(&[1]).unwrap();
        assert!(m2.le(w12, w1));
        assert!(!m2.le(w1, w12));
        assert!(m2.le(w1, w1));
    }

    #[test]
    fn maximal_worlds_are_singletons() {
        let m4 = Frame::new(4).unwrap();
        let max: Vec<World> = m4.worlds().filter(|w| m4.worlds().all(|v| !w.is_below(v) || v == *w)).collect();
        let singletons: Vec<World> = m4.maximal_worlds().collect();
        let mut max_sorted = max.clone();
        max_sorted.sort();
        let mut s = singletons.clone();
        s.sort();
        assert_eq!(max_sorted, s);
        assert!(singletons.iter().all(|w| w.is_maximal()));
    }

    #[test]
    fn above_lists_submasks() {
        let m4 = Frame::new(4).unwrap();
        let w = m4.world(&[2, 3]).unwrap();
        let up: Vec<Vec<usize>> = m4.above(w).map(|v| v.generators()).collect();
        assert_eq!(up, vec![vec![2], vec![3], vec![2, 3]]);
    }

    #[test]
    fn generator_range_checked() {
        let m2 = Frame::new(2).unwrap();
        assert!(m2.world(&[3]).is_err());
        assert!(m2.world(&[]).is_err());
        assert!(!m2.contains(World::from_mask(4).unwrap()));
    }
}
