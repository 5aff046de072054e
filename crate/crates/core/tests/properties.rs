mod common;

use common::{forces, to_worlds};
use mlogic::alpha::universal_subst;
use mlogic::formula::{parse, Formula, Substitution};
use mlogic::ipc::{classically_valid, ipc_provable};
use mlogic::kpform::{kp_normalize, kp_rank, KpError, Rank};
use mlogic::medvedev::{persistence_check, valid_on, Frame, SearchMode, UpSet, Valuation, DEFAULT_BUDGET};
use proptest::prelude::*;
use proptest::sample::select;

fn formula(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => select(atoms).prop_map(Formula::atom),
        1 => Just(Formula::Bot),
        1 => Just(Formula::Top),
    ];
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

/// `|`, `&`, `->` over leaves `~g`.
fn finite_rank(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = formula(&["p", "q"], 2).prop_map(Formula::neg);
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

/// A valuation on `M_n` over `p, q, r` from raw world masks, closed upward.
fn valuation(n: u32) -> impl Strategy<Value = Valuation> {
    let worlds = prop::collection::vec(1u32..(1 << n), 0..4);
    (worlds.clone(), worlds.clone(), worlds).prop_map(move |(a, b, c)| {
        let frame = Frame::new(n).unwrap();
        let mut v = Valuation::new(frame);
        for (atom, ws) in [("p", a), ("q", b), ("r", c)] {
            let ws = ws.into_iter().map(|m| mlogic::medvedev::World::from_mask(m).unwrap());
            v.insert(atom, UpSet::closure_of(&frame, ws).unwrap()).unwrap();
        }
        v
    })
}

/// Replace the body under every `~` leaf of a rank skeleton.
fn mutate_bodies(f: &Formula, body: &Formula) -> Formula {
    match f {
        Formula::Neg(_) => Formula::neg(body.clone()),
        Formula::And(a, b) => Formula::and(mutate_bodies(a, body), mutate_bodies(b, body)),
        Formula::Or(a, b) => Formula::or(mutate_bodies(a, body), mutate_bodies(b, body)),
        Formula::Imp(a, b) => Formula::imp(mutate_bodies(a, body), mutate_bodies(b, body)),
        other => other.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_parse_round_trip(f in formula(&["p", "q", "r", "s1"], 6)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn substitution_composes(
        f in formula(&["p", "q"], 4),
        a in formula(&["p", "q"], 2),
        b in formula(&["p", "q"], 2),
        c in formula(&["r"], 2),
    ) {
        let inner: Substitution = [("p".to_string(), a), ("q".to_string(), b)].into_iter().collect();
        let outer: Substitution = [("p".to_string(), c.clone()), ("q".to_string(), c)].into_iter().collect();
        prop_assert_eq!(outer.compose(&inner).apply(&f), outer.apply(&inner.apply(&f)));
    }

    #[test]
    fn substituted_atoms_come_from_images(f in formula(&["p", "q"], 5), a in formula(&["x", "y"], 3)) {
        let s: Substitution = [("p".to_string(), a.clone()), ("q".to_string(), Formula::Top)].into_iter().collect();
        let allowed = a.atoms();
        prop_assert!(s.apply(&f).atoms().iter().all(|x| allowed.contains(x)));
    }

    #[test]
    fn truth_sets_match_pointwise_forcing(v in valuation(3), f in formula(&["p", "q", "r"], 5)) {
        let truth = v.truth_set(&f).unwrap();
        let oracle = to_worlds(&v);
        for w in v.frame().worlds() {
            prop_assert_eq!(truth.contains(w), forces(3, &oracle, w.mask(), &f), "at {}", w);
        }
    }

    #[test]
    fn forcing_persists(v in valuation(4), f in formula(&["p", "q", "r"], 6)) {
        prop_assert!(persistence_check(&v, &f).unwrap());
    }

    #[test]
    fn ipc_theorems_hold_on_small_frames(f in formula(&["p", "q"], 4)) {
        if ipc_provable(&f).unwrap() {
            for n in 1..=3 {
                let frame = Frame::new(n).unwrap();
                let verdict = valid_on(&frame, &f, SearchMode::Exhaustive, DEFAULT_BUDGET).unwrap();
                prop_assert!(verdict.is_established(), "{} fails on M_{}", f, n);
            }
        }
    }

    #[test]
    fn negations_agree_with_classical_logic(f in formula(&["p", "q", "r"], 5)) {
        let g = Formula::neg(f);
        prop_assert_eq!(ipc_provable(&g).unwrap(), classically_valid(&g).unwrap());
    }

    #[test]
    fn normal_form_length_is_rank(f in finite_rank(4)) {
        if let Ok(Rank::Finite(k)) = kp_rank(&f) {
            prop_assert_eq!(kp_normalize(&f).unwrap().len() as u64, k);
        }
    }

    #[test]
    fn rank_ignores_bodies(f in finite_rank(4), body in formula(&["x"], 3)) {
        let g = mutate_bodies(&f, &body);
        prop_assert_eq!(kp_rank(&f), kp_rank(&g));
        if let (Ok(a), Ok(b)) = (kp_normalize(&f), kp_normalize(&g)) {
            prop_assert_eq!(a.len(), b.len());
        }
    }

    #[test]
    fn universal_substitution_has_finite_rank(v in valuation(3), f in formula(&["p", "q", "r"], 4)) {
        let sigma = universal_subst(&v).unwrap();
        for (_, image) in sigma.iter() {
            prop_assert!(kp_rank(image).unwrap().is_finite());
        }
        // every atom now sits under a finite-rank image, so only the cap can stop it
        match kp_rank(&sigma.apply(&f)) {
            Ok(r) => prop_assert!(r.is_finite()),
            Err(e) => {
                let overflow = matches!(e, KpError::Overflow { .. });
                prop_assert!(overflow);
            }
        }
    }
}
