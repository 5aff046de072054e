//! Word-parallel closure operators on mask-indexed world sets.

/// Positions within a word whose index has bit `i` clear.
const LOW: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

pub(crate) fn words_for(n: u32) -> usize {
    (1usize << n).div_ceil(64)
}

/// Every world of `M_n` (masks `1..2^n`).
pub(crate) fn full(n: u32) -> Vec<u64> {
    let size = 1usize << n;
    let mut out = vec![u64::MAX; words_for(n)];
    if size < 64 {
        out[0] = (1u64 << size) - 1;
    }
    out[0] &= !1;
    out
}

pub(crate) fn contains(set: &[u64], mask: u32) -> bool {
    set[(mask >> 6) as usize] >> (mask & 63) & 1 == 1
}

pub(crate) fn insert(set: &mut [u64], mask: u32) {
    set[(mask >> 6) as usize] |= 1 << (mask & 63);
}

/// Add every world below a member: all supersets of member masks.
pub(crate) fn down_close(set: &mut [u64], n: u32) {
    for i in 0..n.min(6) {
        let shift = 1u32 << i;
        for w in set.iter_mut() {
            *w |= (*w & LOW[i as usize]) << shift;
        }
    }
    for i in 6..n {
        let stride = 1usize << (i - 6);
        for w in 0..set.len() {
            if w & stride == 0 {
                set[w | stride] |= set[w];
            }
        }
    }
}

/// Add every world above a member: all non-empty submasks.
pub(crate) fn up_close(set: &mut [u64], n: u32) {
    for i in 0..n.min(6) {
        let shift = 1u32 << i;
        for w in set.iter_mut() {
            *w |= (*w >> shift) & LOW[i as usize];
        }
    }
    for i in 6..n {
        let stride = 1usize << (i - 6);
        for w in 0..set.len() {
            if w & stride == 0 {
                set[w] |= set[w | stride];
            }
        }
    }
    set[0] &= !1;
}

pub(crate) fn is_up_closed(set: &[u64], n: u32) -> bool {
    let mut closed = set.to_vec();
    up_close(&mut closed, n);
    closed == set
}

pub(crate) fn iter_masks(set: &[u64]) -> impl Iterator<Item = u32> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            Some((w as u32) << 6 | bit)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_down(set: &[u32], n: u32) -> Vec<u32> {
        (1..1u32 << n)
            .filter(|&m| set.iter().any(|&s| s & !m == 0))
            .collect()
    }

    fn naive_up(set: &[u32], n: u32) -> Vec<u32> {
        (1..1u32 << n)
            .filter(|&m| set.iter().any(|&s| m & !s == 0))
            .collect()
    }

    fn from_masks(masks: &[u32], n: u32) -> Vec<u64> {
        let mut out = vec![0; words_for(n)];
        for &m in masks {
            insert(&mut out, m);
        }
        out
    }

    #[test]
    fn closures_match_naive_across_word_boundaries() {
        for n in [3u32, 6, 7, 8] {
            let seeds: Vec<Vec<u32>> = vec![
                vec![1],
                vec![(1 << n) - 1],
                vec![0b101 & ((1 << n) - 1), 1 << (n - 1)],
                vec![(1 << (n - 1)) | 1],
            ];
            for seed in seeds {
                let mut d = from_masks(&seed, n);
                down_close(&mut d, n);
                assert_eq!(iter_masks(&d).collect::<Vec<_>>(), naive_down(&seed, n), "down n={n} {seed:?}");
                let mut u = from_masks(&seed, n);
                up_close(&mut u, n);
                assert_eq!(iter_masks(&u).collect::<Vec<_>>(), naive_up(&seed, n), "up n={n} {seed:?}");
            }
        }
    }

    #[test]
    fn full_set_sizes() {
        for n in 1..=8 {
            assert_eq!(iter_masks(&full(n)).count(), (1 << n) - 1);
        }
    }
}
