//! Kreisel-Putnam rank and the normal form `~ψ_1 | … | ~ψ_k`.
//!
//! The rank of `~a` is 1; `|`, `&` and `->` add, multiply and exponentiate
//! (`a -> b` has rank `rank(b)^rank(a)`); atoms have rank ∞. `F` and `T` are
//! read as `~T` and `~F` and get rank 1.
//!
//! Normalization follows the same recursion and produces exactly `rank`
//! bodies:
//!
//! * `~a` gives `[a]`, `F` gives `[T]`, `T` gives `[F]`;
//! * `|` concatenates;
//! * `&` takes `ψ_i | χ_j` for every pair, row-major, since
//!   `~ψ & ~χ ≡ ~(ψ | χ)`;
//! * `->` takes, for every choice function `g` in lexicographic order, the
//!   body `(~ψ_1 & χ_g(1)) | … | (~ψ_m & χ_g(m))`, using
//!   `~ψ -> ~χ ≡ ~(~ψ & χ)`. Only this case needs the weak Kreisel-Putnam
//!   axiom, to distribute `~ψ -> (~χ_1 | ~χ_2)`.

use std::fmt;


use crate::formula::{big_or, Formula};
use crate::ipc::{ipc_provable_with_budget, IpcError};
use crate::medvedev::{valid_on, Frame, SearchOptions, Verdict};
use crate::Error;

pub const DEFAULT_RANK_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub fn finite(self) -> Option<u64> {
        match self {
            Rank::Finite(k) => Some(k),
            Rank::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(k) => write!(f, "{k}"),
            Rank::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum KpError {
    #[error("Kreisel-Putnam rank of `{subformula}` exceeds the cap {cap}")]
    Overflow { subformula: String, cap: u64 },
    #[error("`{0}` has infinite Kreisel-Putnam rank and no normal form")]
    InfiniteRank(String),
}

pub fn kp_rank(f: &Formula) -> Result<Rank, KpError> {
    kp_rank_with_cap(f, DEFAULT_RANK_CAP)
}

pub fn kp_rank_with_cap(f: &Formula, cap: u64) -> Result<Rank, KpError> {
    let overflow = || KpError::Overflow {
        subformula: f.to_string(),
        cap,
    };
    let (a, b) = match f {
        Formula::Neg(_) | Formula::Bot | Formula::Top => return Ok(Rank::Finite(1)),
        Formula::Atom(_) => return Ok(Rank::Infinite),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => (a, b),
    };
    let ra = kp_rank_with_cap(a, cap);
    let rb = kp_rank_with_cap(b, cap);
    // ∞ absorbs, even next to an overflowing sibling
    if matches!(ra, Ok(Rank::Infinite)) || matches!(rb, Ok(Rank::Infinite)) {
        return Ok(Rank::Infinite);
    }
    let (Rank::Finite(m), Rank::Finite(n)) = (ra?, rb?) else {
        unreachable!()
    };
    let value = match f {
        Formula::Or(..) => m.checked_add(n),
        Formula::And(..) => m.checked_mul(n),
        Formula::Imp(..) => checked_pow_capped(n, m, cap),
        _ => unreachable!(),
    };
    match value {
        Some(v) if v <= cap => Ok(Rank::Finite(v)),
        _ => Err(overflow()),
    }
}

fn checked_pow_capped(base: u64, exp: u64, cap: u64) -> Option<u64> {
    if base <= 1 {
        return Some(base);
    }
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > cap {
            return None;
        }
    }
    Some(acc)
}

/// `~bodies[0] | … | ~bodies[k-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegDisjunction {
    pub bodies: Vec<Formula>,
}

impl NegDisjunction {
    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn to_formula(&self) -> Formula {
        big_or(self.bodies.iter().cloned().map(Formula::neg))
    }
}

pub fn kp_normalize(f: &Formula) -> Result<NegDisjunction, KpError> {
    kp_normalize_with_cap(f, DEFAULT_RANK_CAP)
}

pub fn kp_normalize_with_cap(f: &Formula, cap: u64) -> Result<NegDisjunction, KpError> {
    match kp_rank_with_cap(f, cap)? {
        Rank::Infinite => Err(KpError::InfiniteRank(f.to_string())),
        Rank::Finite(_) => Ok(NegDisjunction {
            bodies: bodies(f),
        }),
    }
}

fn bodies(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::Neg(a) => vec![(**a).clone()],
        Formula::Bot => vec![Formula::Top],
        Formula::Top => vec![Formula::Bot],
        Formula::Or(a, b) => {
            let mut out = bodies(a);
            out.extend(bodies(b));
            out
        }
        Formula::And(a, b) => {
            let (left, right) = (bodies(a), bodies(b));
            let mut out = Vec::with_capacity(left.len() * right.len());
            for psi in &left {
                for chi in &right {
                    out.push(Formula::or(psi.clone(), chi.clone()));
                }
            }
            out
        }
        Formula::Imp(a, b) => {
            let (psis, chis) = (bodies(a), bodies(b));
            let (m, n) = (psis.len(), chis.len());
            let mut out = Vec::new();
            // choice functions g: {1..m} -> {1..n} as odometer digits, g(1) most significant
            let mut g = vec![0usize; m];
            loop {
                out.push(big_or(psis.iter().zip(&g).map(|(psi, &j)| {
                    Formula::and(Formula::neg(psi.clone()), chis[j].clone())
                })));
                let mut pos = m;
                loop {
                    if pos == 0 {
                        return out;
                    }
                    pos -= 1;
                    g[pos] += 1;
                    if g[pos] < n {
                        break;
                    }
                    g[pos] = 0;
                }
            }
        }
        Formula::Atom(_) => unreachable!("rank checked finite before normalizing"),
    }
}

/// One construction step of the normal form, identified by connective and
/// the ranks of its operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Negation,
    Falsum,
    Verum,
    Or { m: u64, n: u64 },
    And { m: u64, n: u64 },
    Imp { m: u64, n: u64 },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Negation => f.write_str("~"),
            Step::Falsum => f.write_str("F as ~T"),
            Step::Verum => f.write_str("T as ~F"),
            Step::Or { m, n } => write!(f, "| ({m}, {n})"),
            Step::And { m, n } => write!(f, "& ({m}, {n})"),
            Step::Imp { m, n } => write!(f, "-> ({m}, {n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepStatus {
    /// The schematic equivalence is an intuitionistic theorem.
    Intuitionistic,
    /// Needs the weak Kreisel-Putnam axiom; covered by the frame checks.
    WeakKpOnly,
    Skipped(String),
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCheck {
    pub step: Step,
    pub status: StepStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameCheck {
    pub n: u32,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Check `M_1..=M_bound`.
    pub bound: u32,
    pub search: SearchOptions,
    /// Sequent budget for each schematic step check.
    pub prover_budget: u64,
    /// Schematic step checks larger than this many bodies are skipped.
    pub max_step_bodies: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            bound: 3,
            search: SearchOptions {
                strategy: crate::medvedev::Strategy::Auto {
                    count: 1000,
                    seed: 0,
                },
                ..SearchOptions::default()
            },
            prover_budget: crate::ipc::DEFAULT_BUDGET,
            max_step_bodies: 16,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormalFormReport {
    pub formula: Formula,
    pub rank: u64,
    pub frame_checks: Vec<FrameCheck>,
    pub step_checks: Vec<StepCheck>,
    /// `F`/`T` occur in the rank skeleton and were read as `~T`/`~F`.
    pub constants_as_negations: bool,
}

impl NormalFormReport {
    pub fn passed(&self) -> bool {
        self.frame_checks.iter().all(|c| !c.verdict.is_refuted())
            && self.step_checks.iter().all(|c| c.status != StepStatus::Failed)
    }

    pub fn needs_weak_kp(&self) -> bool {
        self.step_checks
            .iter()
            .any(|c| c.status == StepStatus::WeakKpOnly)
    }
}

impl fmt::Display for NormalFormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank: {}", self.rank)?;
        for c in &self.frame_checks {
            let what = match &c.verdict {
                Verdict::Valid => "equivalent (exhaustive)".to_string(),
                Verdict::NoCounterexample { samples, seed } => {
                    format!("no counterexample in {samples} samples (seed {seed})")
                }
                Verdict::Refuted(w) => format!("NOT equivalent at {}", w.world()),
            };
            writeln!(f, "M_{}: {what}", c.n)?;
        }
        for c in &self.step_checks {
            let status = match &c.status {
                StepStatus::Intuitionistic => "intuitionistic".to_string(),
                StepStatus::WeakKpOnly => "wKP-only".to_string(),
                StepStatus::Skipped(why) => format!("skipped ({why})"),
                StepStatus::Failed => "FAILED".to_string(),
            };
            writeln!(f, "step {}: {status}", c.step)?;
        }
        if self.constants_as_negations {
            writeln!(f, "note: F and T were given rank 1 as ~T and ~F")?;
        }
        write!(f, "verdict: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

fn collect_steps(f: &Formula, out: &mut Vec<Step>) -> u64 {
    let (step, rank) = match f {
        Formula::Neg(_) => (Step::Negation, 1),
        Formula::Bot => (Step::Falsum, 1),
        Formula::Top => (Step::Verum, 1),
        Formula::Or(a, b) => {
            let (m, n) = (collect_steps(a, out), collect_steps(b, out));
            (Step::Or { m, n }, m + n)
        }
        Formula::And(a, b) => {
            let (m, n) = (collect_steps(a, out), collect_steps(b, out));
            (Step::And { m, n }, m * n)
        }
        Formula::Imp(a, b) => {
            let (m, n) = (collect_steps(a, out), collect_steps(b, out));
            (Step::Imp { m, n }, n.saturating_pow(m as u32))
        }
        Formula::Atom(_) => unreachable!("rank checked finite"),
    };
    if !out.contains(&step) {
        out.push(step);
    }
    rank
}

fn schematic(prefix: &str, k: u64) -> Formula {
    big_or((1..=k).map(|i| Formula::neg(Formula::atom(format!("{prefix}{i}")))))
}

/// Check one construction step on fresh atoms `a_i`, `b_j` standing for the
/// operand bodies.
fn check_step(step: Step, opts: &VerifyOptions) -> StepStatus {
    let (lhs, size) = match step {
        Step::Negation => (Formula::neg(Formula::atom("a1")), 1),
        Step::Falsum => (Formula::Bot, 1),
        Step::Verum => (Formula::Top, 1),
        Step::Or { m, n } => (Formula::or(schematic("a", m), schematic("b", n)), m + n),
        Step::And { m, n } => (Formula::and(schematic("a", m), schematic("b", n)), m * n),
        Step::Imp { n, .. } if n >= 2 => return StepStatus::WeakKpOnly,
        Step::Imp { m, n } => (Formula::imp(schematic("a", m), schematic("b", n)), n.pow(m as u32)),
    };
    if size > opts.max_step_bodies {
        return StepStatus::Skipped(format!("{size} bodies exceeds {}", opts.max_step_bodies));
    }
    let Ok(nd) = kp_normalize(&lhs) else {
        return StepStatus::Failed;
    };
    let claim = Formula::iff(lhs, nd.to_formula());
    match ipc_provable_with_budget(&claim, opts.prover_budget) {
        Ok(true) => StepStatus::Intuitionistic,
        Ok(false) => StepStatus::Failed,
        Err(IpcError::BudgetExceeded { .. }) => StepStatus::Skipped("prover budget exhausted".into()),
    }
}

/// Check `f <-> ~ψ_1 | … | ~ψ_k` on `M_1..=M_bound` and every construction
/// step schematically with the intuitionistic prover.
pub fn verify_normal_form(
    f: &Formula,
    nd: &NegDisjunction,
    opts: &VerifyOptions,
) -> Result<NormalFormReport, Error> {
    let rank = kp_rank(f)?
        .finite()
        .ok_or_else(|| KpError::InfiniteRank(f.to_string()))?;

    let mut steps = Vec::new();
    collect_steps(f, &mut steps);
    steps.sort();
    let constants_as_negations = steps.iter().any(|s| matches!(s, Step::Falsum | Step::Verum));
    let step_checks = steps
        .into_iter()
        .map(|step| StepCheck {
            step,
            status: check_step(step, opts),
        })
        .collect();

    let claim = Formula::iff(f.clone(), nd.to_formula());
    let atoms = claim.atoms().len();
    let mut frame_checks = Vec::new();
    for n in 1..=opts.bound {
        let frame = Frame::new(n)?;
        let Some(mode) = opts.search.mode_for(&frame, atoms) else {
            break;
        };
        let verdict = valid_on(&frame, &claim, mode, opts.search.budget)?;
        frame_checks.push(FrameCheck { n, verdict });
    }

    Ok(NormalFormReport {
        formula: f.clone(),
        rank,
        frame_checks,
        step_checks,
        constants_as_negations,
    })
}
