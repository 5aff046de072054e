//! Seeded random formulas for tests and sampling-based checks.

use rand::Rng;

use crate::formula::Formula;
use crate::kpform::{kp_rank, Rank};

/// A random formula over `atoms` of depth at most `depth`. Leaves are atoms,
/// with the occasional `F` or `T`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, atoms: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng, atoms);
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => Formula::neg(random_formula(rng, atoms, d)),
        1 => Formula::and(random_formula(rng, atoms, d), random_formula(rng, atoms, d)),
        2 => Formula::or(random_formula(rng, atoms, d), random_formula(rng, atoms, d)),
        _ => Formula::imp(random_formula(rng, atoms, d), random_formula(rng, atoms, d)),
    }
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, atoms: &[String]) -> Formula {
    match rng.gen_range(0..12) {
        0 => Formula::Bot,
        1 => Formula::Top,
        _ if atoms.is_empty() => Formula::Top,
        _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())].clone()),
    }
}

/// A random formula of finite Kreisel-Putnam rank: a skeleton of `|`, `&`
/// and `->` of depth at most `depth` over leaves `~g`, with `g` random of
/// depth at most `body_depth`. Resamples until the rank is at most
/// `max_rank`.
pub fn random_finite_rank<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[String],
    depth: usize,
    body_depth: usize,
    max_rank: u64,
) -> Formula {
    loop {
        let f = skeleton(rng, atoms, depth, body_depth);
        if let Ok(Rank::Finite(k)) = kp_rank(&f) {
            if k <= max_rank {
                return f;
            }
        }
    }
}

fn skeleton<R: Rng + ?Sized>(rng: &mut R, atoms: &[String], depth: usize, body_depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..20) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => Formula::neg(random_formula(rng, atoms, body_depth)),
        };
    }
    let d = depth - 1;
    let (a, b) = (
        skeleton(rng, atoms, d, body_depth),
        skeleton(rng, atoms, d, body_depth),
    );
    match rng.gen_range(0..3) {
        0 => Formula::or(a, b),
        1 => Formula::and(a, b),
        _ => Formula::imp(a, b),
    }
}

pub fn atom_names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn depth_and_rank_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let atoms = atom_names("q", 3);
        for _ in 0..200 {
            assert!(random_formula(&mut rng, &atoms, 5).depth() <= 5);
            let f = random_finite_rank(&mut rng, &atoms, 3, 2, 16);
            let k = kp_rank(&f).unwrap().finite().unwrap();
            assert!((1..=16).contains(&k));
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let atoms = atom_names("p", 2);
        let a = random_formula(&mut ChaCha8Rng::seed_from_u64(4), &atoms, 6);
        let b = random_formula(&mut ChaCha8Rng::seed_from_u64(4), &atoms, 6);
        assert_eq!(a, b);
    }
}
