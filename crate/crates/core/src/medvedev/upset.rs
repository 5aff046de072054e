use std::sync::OnceLock;

use super::bits;
use super::{Frame, FrameError, World};

/// Largest `n` for which up-sets are enumerated exhaustively.
pub const EXHAUSTIVE_MAX_N: u32 = 6;

/// Number of up-sets of `M_n`: the Dedekind number `M(n)` minus one.
const UPSET_COUNTS: [u64; 7] = [1, 2, 5, 19, 167, 7_580, 7_828_353];

/// An upward-closed set of worlds of a fixed frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet {
    n: u32,
    bits: Vec<u64>,
}

impl UpSet {
    pub fn empty(frame: &Frame) -> UpSet {
        UpSet {
            n: frame.n(),
            bits: vec![0; frame.words()],
        }
    }

    pub fn full(frame: &Frame) -> UpSet {
        UpSet {
            n: frame.n(),
            bits: bits::full(frame.n()),
        }
    }

    /// Exactly the given worlds; fails if they are not upward closed.
    pub fn from_worlds(
        frame: &Frame,
        worlds: impl IntoIterator<Item = World>,
    ) -> Result<UpSet, FrameError> {
        let set = Self::collect(frame, worlds)?;
        if !bits::is_up_closed(&set.bits, set.n) {
            return Err(FrameError::NotUpwardClosed {
                atom: String::new(),
            });
        }
        Ok(set)
    }

    /// Smallest up-set containing the given worlds.
    pub fn closure_of(
        frame: &Frame,
        worlds: impl IntoIterator<Item = World>,
    ) -> Result<UpSet, FrameError> {
        let mut set = Self::collect(frame, worlds)?;
        bits::up_close(&mut set.bits, set.n);
        Ok(set)
    }

    fn collect(frame: &Frame, worlds: impl IntoIterator<Item = World>) -> Result<UpSet, FrameError> {
        let mut set = UpSet::empty(frame);
        for w in worlds {
            frame.check(w)?;
            bits::insert(&mut set.bits, w.mask());
        }
        Ok(set)
    }

    pub(crate) fn from_bits_unchecked(n: u32, bits: Vec<u64>) -> UpSet {
        UpSet { n, bits }
    }

    pub(crate) fn bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, w: World) -> bool {
        w.mask() >> self.n == 0 && bits::contains(&self.bits, w.mask())
    }

    /// Members in ascending mask order.
    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        bits::iter_masks(&self.bits).map(|m| World::from_mask(m).expect("bit 0 is never set"))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_upward_closed(&self) -> bool {
        bits::is_up_closed(&self.bits, self.n)
    }
}

/// `|Up(M_n)|` for `n <= 6`.
pub fn upset_count(n: u32) -> Option<u64> {
    UPSET_COUNTS.get(n as usize).copied().filter(|_| n >= 1)
}

/// All up-sets of `M_n` as single-word bitsets, sorted ascending.
///
/// Built by the monotone-function recursion on the last generator: a
/// down-closed family of subsets of `{1..k}` is a pair `(a, b)` of
/// down-closed families on `{1..k-1}` with `b ⊆ a`, where `b` collects the
/// members containing `k`. Dropping the empty set from each non-empty
/// family gives exactly the up-sets of `M_k`.
pub(crate) fn upset_words(n: u32) -> Result<&'static [u64], FrameError> {
    static CACHE: [OnceLock<Vec<u64>>; 7] = [const { OnceLock::new() }; 7];
    if n == 0 || n > EXHAUSTIVE_MAX_N {
        return Err(FrameError::EnumerationTooLarge { n });
    }
    Ok(CACHE[n as usize].get_or_init(|| {
        let mut families = down_families(n);
        families.retain(|&f| f != 0);
        let mut out: Vec<u64> = families.into_iter().map(|f| f & !1).collect();
        out.sort_unstable();
        out
    }))
}

fn down_families(k: u32) -> Vec<u64> {
    if k == 0 {
        return vec![0, 1];
    }
    let prev = down_families(k - 1);
    let shift = 1u32 << (k - 1);
    let mut out = Vec::new();
    for &a in &prev {
        for &b in &prev {
            if b & !a == 0 {
                out.push(a | (b << shift));
            }
        }
    }
    out
}

/// Every up-set of the frame exactly once, in ascending bitset order.
pub fn enumerate_upsets(frame: &Frame) -> Result<impl Iterator<Item = UpSet>, FrameError> {
    let n = frame.n();
    let words = upset_words(n)?;
    Ok(words
        .iter()
        .map(move |&w| UpSet::from_bits_unchecked(n, vec![w])))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Filter all subsets of the world set for upward closure.
    fn naive_count(n: u32) -> usize {
        let frame = Frame::new(n).unwrap();
        let worlds: Vec<World> = frame.worlds().collect();
        (0u64..1 << worlds.len())
            .filter(|&subset| {
                let chosen: Vec<World> = worlds
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| subset >> i & 1 == 1)
                    .map(|(_, w)| *w)
                    .collect();
                chosen
                    .iter()
                    .all(|w| frame.above(*w).all(|v| chosen.contains(&v)))
            })
            .count()
    }

    #[test]
    fn counts_match_naive_filter() {
        for n in 1..=3 {
            let frame = Frame::new(n).unwrap();
            assert_eq!(enumerate_upsets(&frame).unwrap().count(), naive_count(n));
        }
    }

    #[test]
    fn counts_are_dedekind_minus_one() {
        for (n, expected) in [(2, 5), (3, 19), (4, 167), (5, 7580)] {
            let frame = Frame::new(n).unwrap();
            let all: Vec<UpSet> = enumerate_upsets(&frame).unwrap().collect();
            assert_eq!(all.len(), expected);
            assert_eq!(upset_count(n), Some(expected as u64));
            assert!(all.iter().all(|u| u.is_upward_closed()));
            assert!(all.windows(2).all(|w| w[0] < w[1]), "strictly ascending, no repeats");
        }
    }

    #[test]
    fn m2_order_starts_with_empty_then_first_generator() {
        let frame = Frame::new(2).unwrap();
        let lists: Vec<Vec<Vec<usize>>> = enumerate_upsets(&frame)
            .unwrap()
            .map(|u| u.worlds().map(|w| w.generators()).collect())
            .collect();
        assert_eq!(
            lists,
            vec![
                vec![],
                vec![vec![1]],
                vec![vec![2]],
                vec![vec![1], vec![2]],
                vec![vec![1], vec![2], vec![1, 2]],
            ]
        );
    }

    #[test]
    fn from_worlds_rejects_non_closed() {
        let frame = Frame::new(2).unwrap();
        let bottom = frame.bottom();
        assert!(UpSet::from_worlds(&frame, [bottom]).is_err());
        let closed = UpSet::closure_of(&frame, [bottom]).unwrap();
        assert_eq!(closed, UpSet::full(&frame));
    }

    #[test]
    fn enumeration_bound() {
        assert!(enumerate_upsets(&Frame::new(7).unwrap()).is_err());
    }
}
