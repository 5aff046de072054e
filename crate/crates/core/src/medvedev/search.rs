//! Bounded validity and refutation search over valuations of `M_n`.
//!
//! Exhaustive mode walks every assignment of up-sets to the formula's atoms
//! like an odometer (last atom fastest, up-sets in ascending bitset order)
//! and reports the first failing valuation. Sample mode draws valuations
//! from a seeded ChaCha stream; a clean sample run is evidence, not proof.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bits;
use super::upset::upset_words;
use super::valuation::TruthEvaluator;
use super::{upset_count, Frame, FrameError, RefutationWitness, UpSet, Valuation, World};
use crate::formula::Formula;
use crate::program::Program;

/// Default cap on `(#upsets)^atoms * (2^n - 1)` for exhaustive search.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No valuation refutes the formula (exhaustive).
    Valid,
    /// No counterexample among the sampled valuations. Not a proof.
    NoCounterexample { samples: u64, seed: u64 },
    Refuted(RefutationWitness),
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn is_established(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&RefutationWitness> {
        match self {
            Verdict::Refuted(w) => Some(w),
            _ => None,
        }
    }
}

/// How multi-frame searches pick a mode for each `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Exhaustive only; frames over budget end the scan.
    Exhaustive,
    Sample { count: u64, seed: u64 },
    /// Exhaustive where the budget allows, sampling elsewhere.
    Auto { count: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub strategy: Strategy,
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: Strategy::Auto {
                count: 10_000,
                seed: 0,
            },
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SearchOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.strategy = match self.strategy {
            Strategy::Exhaustive => Strategy::Exhaustive,
            Strategy::Sample { count, .. } => Strategy::Sample { count, seed },
            Strategy::Auto { count, .. } => Strategy::Auto { count, seed },
        };
        self
    }

    /// The mode to use on `frame` for `atoms` atoms, or `None` when the
    /// strategy is exhaustive-only and the frame is over budget.
    pub fn mode_for(&self, frame: &Frame, atoms: usize) -> Option<SearchMode> {
        let fits = exhaustive_steps(frame, atoms).is_some_and(|s| s <= self.budget as u128);
        match self.strategy {
            Strategy::Exhaustive => fits.then_some(SearchMode::Exhaustive),
            Strategy::Sample { count, seed } => Some(SearchMode::Sample { count, seed }),
            Strategy::Auto { count, seed } => Some(if fits {
                SearchMode::Exhaustive
            } else {
                SearchMode::Sample { count, seed }
            }),
        }
    }
}

/// `(#upsets)^atoms * (2^n - 1)`, or `None` beyond the enumerable range.
pub fn exhaustive_steps(frame: &Frame, atoms: usize) -> Option<u128> {
    let count = upset_count(frame.n())? as u128;
    let mut total = frame.world_count() as u128;
    for _ in 0..atoms {
        total = total.saturating_mul(count);
    }
    Some(total)
}

/// Search valuations over the atoms of `formulas` (first-occurrence order
/// across the list). `hit` receives the truth set of every formula and the
/// full world set, and returns the mask of a witnessing world, if any.
pub(crate) fn search_valuations<F>(
    frame: &Frame,
    formulas: &[&Formula],
    mode: SearchMode,
    budget: u64,
    mut hit: F,
) -> Result<Option<(Valuation, World)>, FrameError>
where
    F: FnMut(&[&[u64]], &[u64]) -> Option<u32>,
{
    let prog = Program::compile(formulas, &[]);
    let k = prog.atoms.len();
    let mut eval = TruthEvaluator::new(&prog, *frame);
    let roots = prog.roots.len();

    let mut check = |eval: &mut TruthEvaluator, sets: &[&[u64]]| -> Option<u32> {
        eval.run(sets);
        let truth: Vec<&[u64]> = (0..roots).map(|r| eval.root(r)).collect();
        hit(&truth, eval.full())
    };

    let build = |sets: &[Vec<u64>], world: u32| -> Result<(Valuation, World), FrameError> {
        let mut val = Valuation::new(*frame);
        for (atom, set) in prog.atoms.iter().zip(sets) {
            val.insert(atom.clone(), UpSet::from_bits_unchecked(frame.n(), set.clone()))?;
        }
        Ok((val, World::from_mask(world)?))
    };

    match mode {
        SearchMode::Exhaustive => {
            let steps = exhaustive_steps(frame, k)
                .ok_or(FrameError::EnumerationTooLarge { n: frame.n() })?;
            if steps > budget as u128 {
                return Err(FrameError::BudgetExceeded { steps, budget });
            }
            let upsets = upset_words(frame.n())?;
            let mut digits = vec![0usize; k];
            loop {
                let words: Vec<[u64; 1]> = digits.iter().map(|&d| [upsets[d]]).collect();
                let sets: Vec<&[u64]> = words.iter().map(|w| w.as_slice()).collect();
                if let Some(world) = check(&mut eval, &sets) {
                    let owned: Vec<Vec<u64>> = words.iter().map(|w| w.to_vec()).collect();
                    return build(&owned, world).map(Some);
                }
                // odometer, last atom fastest
                let mut pos = k;
                loop {
                    if pos == 0 {
                        return Ok(None);
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < upsets.len() {
                        break;
                    }
                    digits[pos] = 0;
                }
            }
        }
        SearchMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let owned: Vec<Vec<u64>> = (0..k).map(|_| random_upset_bits(frame, &mut rng)).collect();
                let sets: Vec<&[u64]> = owned.iter().map(|s| s.as_slice()).collect();
                if let Some(world) = check(&mut eval, &sets) {
                    return build(&owned, world).map(Some);
                }
            }
            Ok(None)
        }
    }
}

/// A random up-set. Uniform over all up-sets for `n <= 5`; for larger
/// frames, the upward closure of a random handful of worlds.
pub(crate) fn random_upset_bits(frame: &Frame, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let n = frame.n();
    if n <= 5 {
        let all = upset_words(n).expect("n <= 5 is enumerable");
        return vec![all[rng.gen_range(0..all.len())]];
    }
    let mut set = vec![0u64; frame.words()];
    let picks = rng.gen_range(0..=n + 1);
    for _ in 0..picks {
        let mask = rng.gen_range(1..=frame.world_count() as u32);
        bits::insert(&mut set, mask);
    }
    bits::up_close(&mut set, n);
    set
}

pub fn random_upset(frame: &Frame, rng: &mut ChaCha8Rng) -> UpSet {
    UpSet::from_bits_unchecked(frame.n(), random_upset_bits(frame, rng))
}

fn first_missing(truth: &[u64], full: &[u64]) -> Option<u32> {
    bits::iter_masks(
        &truth
            .iter()
            .zip(full)
            .map(|(t, f)| f & !t)
            .collect::<Vec<u64>>(),
    )
    .next()
}

/// Is `f` forced at every world under every valuation of `frame`?
pub fn valid_on(
    frame: &Frame,
    f: &Formula,
    mode: SearchMode,
    budget: u64,
) -> Result<Verdict, FrameError> {
    let found = search_valuations(frame, &[f], mode, budget, |truth, full| {
        first_missing(truth[0], full)
    })?;
    Ok(match (found, mode) {
        (Some((val, world)), _) => {
            Verdict::Refuted(RefutationWitness::new(val, world, f.clone())?)
        }
        (None, SearchMode::Exhaustive) => Verdict::Valid,
        (None, SearchMode::Sample { count, seed }) => Verdict::NoCounterexample {
            samples: count,
            seed,
        },
    })
}

/// First refutation over `M_1..M_max_n`. `None` means nothing was found up
/// to the bound; it says nothing about validity in general.
pub fn refute(
    f: &Formula,
    max_n: u32,
    options: &SearchOptions,
) -> Result<Option<RefutationWitness>, FrameError> {
    let atoms = f.atoms().len();
    for n in 1..=max_n {
        let frame = Frame::new(n)?;
        let Some(mode) = options.mode_for(&frame, atoms) else {
            break;
        };
        if let Verdict::Refuted(w) = valid_on(&frame, f, mode, options.budget)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    const KP: &str = "(~p -> q | r) -> (~p -> q) | (~p -> r)";
    const WKP: &str = "(~p -> ~q | ~r) -> (~p -> ~q) | (~p -> ~r)";

    #[test]
    fn kreisel_putnam_axioms_valid_on_small_frames() {
        for n in [2, 3] {
            let frame = Frame::new(n).unwrap();
            for ax in [KP, WKP] {
                let v = valid_on(&frame, &f(ax), SearchMode::Exhaustive, DEFAULT_BUDGET).unwrap();
                assert_eq!(v, Verdict::Valid, "{ax} on M_{n}");
            }
        }
    }

    #[test]
    fn excluded_middle_fails_on_m2() {
        let frame = Frame::new(2).unwrap();
        let v = valid_on(&frame, &f("p | ~p"), SearchMode::Exhaustive, DEFAULT_BUDGET).unwrap();
        let w = v.witness().expect("refuted");
        assert_eq!(w.world().generators(), vec![1, 2]);
        assert_eq!(w.valuation().to_map()["p"], vec![vec![1]]);
    }

    #[test]
    fn refute_examples() {
        let opts = SearchOptions::default();
        let w = refute(&f("~p | ~~p"), 4, &opts).unwrap().unwrap();
        assert_eq!(w.n(), 2);
        assert!(refute(&f("p -> p"), 4, &opts).unwrap().is_none());
        assert!(refute(&f(KP), 4, &opts).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let frame = Frame::new(3).unwrap();
        let err = valid_on(&frame, &f("p | q"), SearchMode::Exhaustive, 10).unwrap_err();
        assert!(matches!(err, FrameError::BudgetExceeded { .. }));
        let auto = SearchOptions {
            strategy: Strategy::Auto { count: 5, seed: 1 },
            budget: 10,
        };
        assert_eq!(
            auto.mode_for(&frame, 2),
            Some(SearchMode::Sample { count: 5, seed: 1 })
        );
        let strict = SearchOptions {
            strategy: Strategy::Exhaustive,
            budget: 10,
        };
        assert_eq!(strict.mode_for(&frame, 2), None);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let frame = Frame::new(7).unwrap();
        let g = f("~p | ~~p");
        let mode = SearchMode::Sample { count: 200, seed: 42 };
        let a = valid_on(&frame, &g, mode, DEFAULT_BUDGET).unwrap();
        let b = valid_on(&frame, &g, mode, DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
        assert!(a.is_refuted());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            assert!(random_upset(&frame, &mut rng).is_upward_closed());
        }
    }

    #[test]
    fn atomless_formulas_have_one_valuation() {
        let frame = Frame::new(2).unwrap();
        assert_eq!(
            valid_on(&frame, &f("~~T"), SearchMode::Exhaustive, DEFAULT_BUDGET).unwrap(),
            Verdict::Valid
        );
        assert!(valid_on(&frame, &f("F"), SearchMode::Exhaustive, DEFAULT_BUDGET)
            .unwrap()
            .is_refuted());
    }
}
