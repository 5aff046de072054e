//! The α-formulas: `n` formulas over `p1..pm` (`m = ⌈log₂ n⌉`) that are
//! pairwise inconsistent, weakly exhaustive, and pinned to the maximal
//! worlds of `M_n` by the universal valuation `u_n`.
//!
//! For `n = 2^m` the formulas are the `2^m` literal conjunctions. Index `i`
//! reads the bit pattern `2^m - i`, most significant bit for `p1`, a set bit
//! giving the positive literal; so `α_1 = p1 & … & pm` and `α_n` is all
//! negative. For smaller `n` the last `2^m - n + 1` conjunctions are joined
//! into one disjunction.

use std::fmt;


use crate::formula::{big_and, big_or, Formula, Substitution};
use crate::ipc::{classically_valid, ipc_provable};
use crate::medvedev::{Frame, UpSet, Valuation, World};
use crate::Error;

pub const MAX_ALPHA_N: usize = 1024;

/// Largest `n` for which [`u_valuation`] model-checks the full membership
/// law over all pairs `(I, J)`.
pub const MEMBERSHIP_CHECK_MAX_N: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlphaError {
    #[error("alpha family size {n} is outside 1..={max}", max = MAX_ALPHA_N)]
    FamilySize { n: usize },
    #[error("alpha index set must be non-empty")]
    EmptyIndexSet,
    #[error("alpha index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("valuation is on M_{found}, expected M_{expected}")]
    FrameMismatch { expected: usize, found: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaFamily {
    n: usize,
    m: u32,
    formulas: Vec<Formula>,
}

pub fn atom_name(j: u32) -> String {
    format!("p{j}")
}

fn ceil_log2(n: usize) -> u32 {
    usize::BITS - (n - 1).leading_zeros()
}

pub fn alpha_formulas(n: usize) -> Result<AlphaFamily, AlphaError> {
    if n == 0 || n > MAX_ALPHA_N {
        return Err(AlphaError::FamilySize { n });
    }
    let m = ceil_log2(n);
    let conj = |pattern: u32| {
        big_and((1..=m).map(|j| {
            let p = Formula::atom(atom_name(j));
            if pattern >> (m - j) & 1 == 1 {
                p
            } else {
                Formula::neg(p)
            }
        }))
    };
    let formulas = if n == 1 {
        vec![Formula::Top]
    } else {
        let top = 1u32 << m;
        let mut out: Vec<Formula> = (1..n as u32).map(|i| conj(top - i)).collect();
        out.push(big_or((0..=top - n as u32).rev().map(conj)));
        out
    };
    Ok(AlphaFamily { n, m, formulas })
}

impl AlphaFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of atoms `p1..pm`.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    /// `α_i`, 1-based.
    pub fn get(&self, i: usize) -> Result<&Formula, AlphaError> {
        self.check_index(i)?;
        Ok(&self.formulas[i - 1])
    }

    pub fn atoms(&self) -> Vec<String> {
        (1..=self.m).map(atom_name).collect()
    }

    /// The literal pattern read at the maximal world `i`: `2^m - i`, or the
    /// first pattern of the combined last formula.
    pub fn pattern(&self, i: usize) -> Result<u32, AlphaError> {
        self.check_index(i)?;
        Ok((1u32 << self.m) - i as u32)
    }

    fn check_index(&self, i: usize) -> Result<(), AlphaError> {
        if i == 0 || i > self.n {
            return Err(AlphaError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(())
    }

    /// `α_I = ~~(α_i1 | … | α_ik)` over `I` in ascending order.
    pub fn alpha_set(&self, indices: &[usize]) -> Result<Formula, AlphaError> {
        if indices.is_empty() {
            return Err(AlphaError::EmptyIndexSet);
        }
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let parts = sorted
            .iter()
            .map(|&i| self.get(i).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Formula::neg(Formula::neg(big_or(parts))))
    }

    /// `α_I` for the generator set of a world.
    pub fn alpha_world(&self, w: World) -> Result<Formula, AlphaError> {
        self.alpha_set(&w.generators())
    }
}

/// `u_n` together with its family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalValuation {
    family: AlphaFamily,
    valuation: Valuation,
}

impl UniversalValuation {
    pub fn n(&self) -> usize {
        self.family.n
    }

    pub fn family(&self) -> &AlphaFamily {
        &self.family
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn frame(&self) -> Frame {
        self.valuation.frame()
    }
}

/// `u_n(p_j) = {⋀I : I ⊆ S_j}` where `S_j` collects the maximal worlds whose
/// pattern sets `p_j`. Condition (iii) is model-checked before returning,
/// and for `n <= MEMBERSHIP_CHECK_MAX_N` the full membership law too.
pub fn u_valuation(n: u32) -> Result<UniversalValuation, Error> {
    let frame = Frame::new(n)?;
    let family = alpha_formulas(n as usize)?;
    let mut valuation = Valuation::new(frame);
    for j in 1..=family.m {
        let mut s = 0u32;
        for i in 1..=n as usize {
            if family.pattern(i)? >> (family.m - j) & 1 == 1 {
                s |= 1 << (i - 1);
            }
        }
        let worlds = frame.worlds().filter(|w| w.mask() & !s == 0);
        valuation.insert(atom_name(j), UpSet::from_worlds(&frame, worlds)?)?;
    }
    let u = UniversalValuation { family, valuation };

    if let Some((i, j)) = condition_iii_violations(&u)?.first() {
        return Err(Error::SelfCheck(format!(
            "u_{n}: maximal world {i} disagrees on alpha_{j}"
        )));
    }
    if n <= MEMBERSHIP_CHECK_MAX_N {
        if let Some((w, j)) = membership_violations(&u)?.first() {
            return Err(Error::SelfCheck(format!(
                "u_{n}: membership law fails at {w} for J = {j:?}"
            )));
        }
    }
    Ok(u)
}

/// Pairs `(i, j)` of maximal world and index where `i ⊩ α_j` disagrees with
/// `i = j`.
pub fn condition_iii_violations(u: &UniversalValuation) -> Result<Vec<(usize, usize)>, Error> {
    let frame = u.frame();
    let mut out = Vec::new();
    for (j0, alpha) in u.family.formulas.iter().enumerate() {
        let truth = u.valuation.truth_set(alpha)?;
        for w in frame.maximal_worlds() {
            let i = w.generators()[0];
            if truth.contains(w) != (i == j0 + 1) {
                out.push((i, j0 + 1));
            }
        }
    }
    Ok(out)
}

/// Pairs `(⋀I, J)` where `⋀I ⊩ α_J` disagrees with `I ⊆ J`.
pub fn membership_violations(u: &UniversalValuation) -> Result<Vec<(World, Vec<usize>)>, Error> {
    let frame = u.frame();
    let mut out = Vec::new();
    for jw in frame.worlds() {
        let truth = u.valuation.truth_set(&u.family.alpha_world(jw)?)?;
        for iw in frame.worlds() {
            if truth.contains(iw) != (iw.mask() & !jw.mask() == 0) {
                out.push((iw, jw.generators()));
            }
        }
    }
    Ok(out)
}

/// `σ(p) = ⋁ {α_I : ⋀I ∈ v(p)}` for each atom of `v`, worlds in ascending
/// mask order; an empty truth set gives `~T`.
pub fn universal_subst(v: &Valuation) -> Result<Substitution, AlphaError> {
    let family = alpha_formulas(v.frame().n() as usize)?;
    universal_subst_with(&family, v)
}

pub fn universal_subst_with(family: &AlphaFamily, v: &Valuation) -> Result<Substitution, AlphaError> {
    if v.frame().n() as usize != family.n {
        return Err(AlphaError::FrameMismatch {
            expected: family.n,
            found: v.frame().n(),
        });
    }
    let mut sigma = Substitution::new();
    for (atom, set) in v.iter() {
        let parts = set
            .worlds()
            .map(|w| family.alpha_world(w))
            .collect::<Result<Vec<_>, _>>()?;
        sigma.insert(atom.clone(), big_or(parts));
    }
    Ok(sigma)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaMismatch {
    pub formula: Formula,
    pub world: World,
    /// Whether `v` forces the formula at `world`; `u_n` says the opposite
    /// about its image.
    pub under_v: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub n: u32,
    pub checked: usize,
    pub mismatches: Vec<LemmaMismatch>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare `v(φ)` with `u_n(σ(φ))` world by world. Atoms outside `v`'s
/// domain are false under `v` and sent to `~T` by `σ`.
pub fn verify_lemma(v: &Valuation, formulas: &[Formula]) -> Result<LemmaReport, Error> {
    let n = v.frame().n();
    let u = u_valuation(n)?;
    let sigma = universal_subst_with(&u.family, v)?;
    let lenient = v.clone().lenient();
    let mut mismatches = Vec::new();
    for f in formulas {
        let left = lenient.truth_set(f)?;
        let right = u.valuation.truth_set(&sigma.apply(f))?;
        for w in v.frame().worlds() {
            if left.contains(w) != right.contains(w) {
                mismatches.push(LemmaMismatch {
                    formula: f.clone(),
                    world: w,
                    under_v: left.contains(w),
                });
            }
        }
    }
    Ok(LemmaReport {
        n,
        checked: formulas.len(),
        mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck {
    pub label: String,
    pub formula: Formula,
    pub ipc: bool,
    pub classical: bool,
}

/// Conditions (i) and (ii) checked by the intuitionistic prover and by truth
/// tables. On negated formulas the two must agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub n: usize,
    pub checks: Vec<ConditionCheck>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ipc && c.classical)
    }

    pub fn agree(&self) -> bool {
        self.checks.iter().all(|c| c.ipc == c.classical)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
            writeln!(
                f,
                "{}: ipc {}, classical {}",
                c.label,
                mark(c.ipc),
                mark(c.classical)
            )?;
        }
        write!(f, "conditions (i)-(ii): {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

pub fn check_conditions(family: &AlphaFamily) -> Result<ConditionReport, Error> {
    let mut checks = Vec::new();
    let mut push = |label: String, formula: Formula| -> Result<(), Error> {
        let ipc = ipc_provable(&formula)?;
        let classical = classically_valid(&formula)?;
        checks.push(ConditionCheck {
            label,
            formula,
            ipc,
            classical,
        });
        Ok(())
    };
    let fs = &family.formulas;
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let f = Formula::neg(Formula::and(fs[i].clone(), fs[j].clone()));
            push(format!("(i) alpha_{} , alpha_{}", i + 1, j + 1), f)?;
        }
    }
    let all = Formula::neg(Formula::neg(big_or(fs.iter().cloned())));
    push("(ii)".to_string(), all)?;
    Ok(ConditionReport {
        n: family.n,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kpform::{kp_rank, Rank};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn family_examples() {
        assert_eq!(alpha_formulas(1).unwrap().formulas(), &[Formula::Top]);
        assert_eq!(alpha_formulas(2).unwrap().formulas(), &[f("p1"), f("~p1")]);
        assert_eq!(
            alpha_formulas(3).unwrap().formulas(),
            &[f("p1 & p2"), f("p1 & ~p2"), f("(~p1 & p2) | (~p1 & ~p2)")]
        );
        let four = alpha_formulas(4).unwrap();
        assert_eq!(four.m(), 2);
        assert_eq!(four.get(4).unwrap(), &f("~p1 & ~p2"));
        assert_eq!(alpha_formulas(5).unwrap().m(), 3);
        assert_eq!(alpha_formulas(1024).unwrap().m(), 10);
        assert!(alpha_formulas(0).is_err());
        assert!(alpha_formulas(1025).is_err());
    }

    #[test]
    fn alpha_sets() {
        let fam = alpha_formulas(2).unwrap();
        assert_eq!(fam.alpha_set(&[1]).unwrap(), f("~~p1"));
        assert_eq!(fam.alpha_set(&[2, 1]).unwrap(), f("~~(p1 | ~p1)"));
        assert_eq!(fam.alpha_set(&[]), Err(AlphaError::EmptyIndexSet));
        assert!(fam.alpha_set(&[3]).is_err());
        assert_eq!(kp_rank(&fam.alpha_set(&[1, 2]).unwrap()).unwrap(), Rank::Finite(1));
    }

    #[test]
    fn universal_valuation_small() {
        let u = u_valuation(2).unwrap();
        assert_eq!(u.valuation().to_map()["p1"], vec![vec![1]]);
        let frame = u.frame();
        let (w1, w2) = (frame.world(&[1]).unwrap(), frame.world(&[2]).unwrap());
        let v = u.valuation();
        assert!(v.forces(w1, &f("p1")).unwrap());
        assert!(v.forces(w2, &f("~p1")).unwrap());
        assert!(!v.forces(frame.bottom(), &f("p1")).unwrap());
        assert!(!v.forces(frame.bottom(), &f("~p1")).unwrap());

        let u3 = u_valuation(3).unwrap();
        let w12 = u3.frame().world(&[1, 2]).unwrap();
        let fam = u3.family();
        assert!(u3.valuation().forces(w12, &fam.alpha_set(&[1, 2, 3]).unwrap()).unwrap());
        assert!(!u3.valuation().forces(w12, &fam.alpha_set(&[1]).unwrap()).unwrap());

        let u1 = u_valuation(1).unwrap();
        assert!(u1.valuation().forces(u1.frame().bottom(), &Formula::Top).unwrap());
    }

    #[test]
    fn universal_valuation_larger_frames_pass_self_checks() {
        for n in 4..=10 {
            u_valuation(n).unwrap();
        }
    }

    #[test]
    fn substitution_examples() {
        let m2 = Frame::new(2).unwrap();
        let v = Valuation::new(m2)
            .with("p", UpSet::from_worlds(&m2, [m2.world(&[1]).unwrap()]).unwrap())
            .unwrap()
            .with("q", UpSet::empty(&m2))
            .unwrap();
        let s = universal_subst(&v).unwrap();
        assert_eq!(s.get("p"), Some(&f("~~p1")));
        assert_eq!(s.get("q"), Some(&f("~T")));

        let m1 = Frame::new(1).unwrap();
        let v1 = Valuation::new(m1).with("q", UpSet::full(&m1)).unwrap();
        assert_eq!(universal_subst(&v1).unwrap().get("q"), Some(&f("~~T")));
    }

    #[test]
    fn lemma_on_simple_formulas() {
        let m2 = Frame::new(2).unwrap();
        let v = Valuation::new(m2)
            .with("p", UpSet::from_worlds(&m2, [m2.world(&[1]).unwrap()]).unwrap())
            .unwrap();
        let report = verify_lemma(&v, &[f("p"), f("p | ~p"), f("T"), f("~~p -> p")]).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
    }

    #[test]
    fn conditions_hold() {
        for n in 1..=6 {
            let report = check_conditions(&alpha_formulas(n).unwrap()).unwrap();
            assert!(report.passed() && report.agree(), "n = {n}");
        }
    }
}
