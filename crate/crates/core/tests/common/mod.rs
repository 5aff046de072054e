//! Independent oracles: pointwise forcing straight from the Kripke clauses,
//! and up-sets by filtering every subset of worlds.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mlogic::formula::Formula;
use mlogic::medvedev::{Frame, UpSet, Valuation, World};
use rand::Rng;

/// Atom name to the set of world masks where it holds.
pub type Worlds = BTreeMap<String, Vec<u32>>;

fn le(a: u32, b: u32) -> bool {
    // ⋀A ≤ ⋀B iff B ⊆ A
    b & !a == 0
}

pub fn forces(n: u32, val: &Worlds, w: u32, f: &Formula) -> bool {
    let above = || (1..1u32 << n).filter(move |&v| le(w, v));
    match f {
        Formula::Atom(a) => val.get(a).is_some_and(|ws| ws.contains(&w)),
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Neg(a) => above().all(|v| !forces(n, val, v, a)),
        Formula::And(a, b) => forces(n, val, w, a) && forces(n, val, w, b),
        Formula::Or(a, b) => forces(n, val, w, a) || forces(n, val, w, b),
        Formula::Imp(a, b) => above().all(|v| !forces(n, val, v, a) || forces(n, val, v, b)),
    }
}

pub fn is_upset(n: u32, set: &[u32]) -> bool {
    set.iter()
        .all(|&w| (1..1u32 << n).filter(|&v| le(w, v)).all(|v| set.contains(&v)))
}

/// Every up-set of `M_n`, by testing all `2^(2^n - 1)` subsets.
pub fn naive_upsets(n: u32) -> Vec<Vec<u32>> {
    let worlds: Vec<u32> = (1..1u32 << n).collect();
    let mut out = Vec::new();
    for bits in 0u64..1 << worlds.len() {
        let set: Vec<u32> = worlds
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, &w)| w)
            .collect();
        if is_upset(n, &set) {
            out.push(set);
        }
    }
    out
}

pub fn to_worlds(v: &Valuation) -> Worlds {
    v.iter()
        .map(|(a, s)| (a.clone(), s.worlds().map(|w| w.mask()).collect()))
        .collect()
}

/// A random up-set: the upward closure of a few random worlds.
pub fn random_upset<R: Rng>(rng: &mut R, frame: &Frame) -> UpSet {
    let k = rng.gen_range(0..=frame.n() + 1);
    let worlds: Vec<World> = (0..k)
        .map(|_| World::from_mask(rng.gen_range(1..=frame.world_count() as u32)).unwrap())
        .collect();
    UpSet::closure_of(frame, worlds).unwrap()
}

pub fn random_valuation<R: Rng>(rng: &mut R, frame: &Frame, atoms: &[String]) -> Valuation {
    let mut v = Valuation::new(*frame);
    for a in atoms {
        v.insert(a.clone(), random_upset(rng, frame)).unwrap();
    }
    v
}

pub fn parse(s: &str) -> Formula {
    mlogic::formula::parse(s).unwrap()
}

pub const KP: &str = "(~p -> q | r) -> (~p -> q) | (~p -> r)";
pub const WKP: &str = "(~p -> ~q | ~r) -> (~p -> ~q) | (~p -> ~r)";

/// Intuitionistic theorems over at most three atoms.
pub const IPC_CORPUS: &[&str] = &[
    "p -> p",
    "p -> q -> p",
    "(p -> q -> r) -> (p -> q) -> p -> r",
    "p & q -> q & p",
    "p | q -> q | p",
    "p -> ~~p",
    "~~~p -> ~p",
    "~~(p | ~p)",
    "(p -> q) -> ~q -> ~p",
    "~(p | q) -> ~p & ~q",
    "~p & ~q -> ~(p | q)",
    "~p | ~q -> ~(p & q)",
    "(p | q) & r -> p & r | q & r",
    "p & (q | r) -> p & q | p & r",
    "(p -> r) -> (q -> r) -> p | q -> r",
    "F -> p",
    "p -> T",
    "~~(p -> q) -> ~~p -> ~~q",
    "(p -> q) & (q -> r) -> p -> r",
    "~~(~~p -> p)",
    "(p -> q & r) -> (p -> q) & (p -> r)",
    "~(p & ~p)",
    "p | q -> (p -> r) -> (q -> r) -> r",
    "(~~p -> ~~q) -> ~~(p -> q)",
];
