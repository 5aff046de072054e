use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alpha::{alpha_formulas, UniversalValuation};
use crate::formula::{Formula, Substitution};
use crate::gen::random_formula;
use crate::medvedev::{Frame, FrameError, Valuation, World};
use crate::Error;

/// A map from the worlds of `M_m` to the worlds of `M_n`, stored as a table
/// indexed by source mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphism {
    source: Frame,
    target: Frame,
    table: Vec<u32>,
}

impl PMorphism {
    /// `f(⋀I) = ⋀ f[I]` from the images of the maximal worlds, given as
    /// 1-based target generators.
    pub fn from_generator_map(source: Frame, target: Frame, gens: &[usize]) -> Result<PMorphism, FrameError> {
        if gens.len() != source.n() as usize {
            return Err(FrameError::SelfCheck(format!(
                "generator map has {} entries, M_{} has {} maximal worlds",
                gens.len(),
                source.n(),
                source.n()
            )));
        }
        let images = gens
            .iter()
            .map(|&g| target.world(&[g]).map(|w| w.mask()))
            .collect::<Result<Vec<u32>, _>>()?;
        let mut table = vec![0u32; source.world_count() + 1];
        for w in source.worlds() {
            table[w.mask() as usize] = (0..source.n())
                .filter(|i| w.mask() >> i & 1 == 1)
                .fold(0, |acc, i| acc | images[i as usize]);
        }
        Ok(PMorphism {
            source,
            target,
            table,
        })
    }

    /// An arbitrary world map, e.g. for negative controls. Every source
    /// world must be mapped.
    pub fn from_world_map(
        source: Frame,
        target: Frame,
        pairs: impl IntoIterator<Item = (World, World)>,
    ) -> Result<PMorphism, FrameError> {
        let mut table = vec![0u32; source.world_count() + 1];
        for (from, to) in pairs {
            source.check(from)?;
            target.check(to)?;
            table[from.mask() as usize] = to.mask();
        }
        if let Some(w) = source.worlds().find(|w| table[w.mask() as usize] == 0) {
            return Err(FrameError::SelfCheck(format!("world map leaves {w} unmapped")));
        }
        Ok(PMorphism {
            source,
            target,
            table,
        })
    }

    pub fn source(&self) -> Frame {
        self.source
    }

    pub fn target(&self) -> Frame {
        self.target
    }

    pub fn apply(&self, w: World) -> World {
        World::from_mask(self.table[w.mask() as usize]).expect("every source world is mapped")
    }

    /// `f(⋀{i})` for `i = 1..m`, as target generator lists.
    pub fn generator_images(&self) -> Vec<Vec<usize>> {
        self.source.maximal_worlds().map(|w| self.apply(w).generators()).collect()
    }

    pub fn to_json(&self) -> PMorphismJson {
        PMorphismJson {
            source: self.source.n(),
            target: self.target.n(),
            generators: None,
            worlds: Some(
                self.source
                    .worlds()
                    .map(|w| WorldPair {
                        from: w.generators(),
                        to: self.apply(w).generators(),
                    })
                    .collect(),
            ),
            valuation: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldPair {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
}

/// A map given by one of: `generators` (images of the maximal worlds),
/// `worlds` (the full table), or `valuation` (a valuation of `M_source`
/// over `p1..pm`, turned into a map by [`alpha_pmorphism`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PMorphismJson {
    pub source: u32,
    pub target: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worlds: Option<Vec<WorldPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<crate::medvedev::ValuationMap>,
}

impl PMorphismJson {
    pub fn build(&self) -> Result<PMorphism, Error> {
        let source = Frame::new(self.source)?;
        let target = Frame::new(self.target)?;
        match (&self.generators, &self.worlds, &self.valuation) {
            (Some(gens), None, None) => Ok(PMorphism::from_generator_map(source, target, gens)?),
            (None, Some(pairs), None) => {
                let pairs = pairs
                    .iter()
                    .map(|p| Ok((source.world(&p.from)?, target.world(&p.to)?)))
                    .collect::<Result<Vec<_>, FrameError>>()?;
                Ok(PMorphism::from_world_map(source, target, pairs)?)
            }
            (None, None, Some(map)) => {
                let w = Valuation::from_map(source, map)?;
                alpha_pmorphism(self.target as usize, &w)
            }
            _ => Err(Error::SelfCheck(
                "exactly one of `generators`, `worlds`, `valuation` must be given".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `x ≤ y` but `f(x) ≰ f(y)`.
    NotMonotone { x: World, y: World, fx: World, fy: World },
    /// `f(x) ≤ y`, and the candidate `⋀(I ∩ f⁻¹[J'])` is empty or does not
    /// map to `y`.
    Back { x: World, y: World, candidate: Option<World> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotMonotone { x, y, fx, fy } => {
                write!(f, "not monotone: {x} <= {y} but f({x}) = {fx}, f({y}) = {fy}")
            }
            Violation::Back { x, y, candidate: None } => {
                write!(f, "back condition: f({x}) <= {y} and no generator of {x} maps into {y}")
            }
            Violation::Back {
                x,
                y,
                candidate: Some(c),
            } => write!(f, "back condition: f({x}) <= {y} but candidate {c} does not map to {y}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphismReport {
    pub pairs_checked: u64,
    pub violation: Option<Violation>,
}

impl PMorphismReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Check monotonicity on all comparable pairs and the back condition with
/// the explicit candidate `x' = ⋀(I ∩ f⁻¹[J'])`. Stops at the first
/// violation.
pub fn check_pmorphism(f: &PMorphism) -> PMorphismReport {
    let mut pairs_checked = 0u64;
    let report = |pairs_checked, violation| PMorphismReport {
        pairs_checked,
        violation: Some(violation),
    };
    for x in f.source.worlds() {
        let fx = f.apply(x);
        for y in f.source.above(x) {
            pairs_checked += 1;
            let fy = f.apply(y);
            if !fx.is_below(fy) {
                return report(pairs_checked, Violation::NotMonotone { x, y, fx, fy });
            }
        }
    }
    for x in f.source.worlds() {
        for y in f.target.above(f.apply(x)) {
            pairs_checked += 1;
            let cand = (0..f.source.n())
                .filter(|i| x.mask() >> i & 1 == 1)
                .filter(|&i| {
                    let img = f.table[1usize << i];
                    img & !y.mask() == 0
                })
                .fold(0u32, |acc, i| acc | 1 << i);
            let candidate = World::from_mask(cand).ok();
            if candidate.map(|c| f.apply(c)) != Some(y) {
                return report(pairs_checked, Violation::Back { x, y, candidate });
            }
        }
    }
    PMorphismReport {
        pairs_checked,
        violation: None,
    }
}

/// Indices `j` with `α_j` forced at world `x` under `w`.
pub fn forced_alphas(n: usize, w: &Valuation, x: World) -> Result<Vec<usize>, Error> {
    let family = alpha_formulas(n)?;
    let mut out = Vec::new();
    for (j, a) in family.formulas().iter().enumerate() {
        if w.forces(x, a)? {
            out.push(j + 1);
        }
    }
    Ok(out)
}

/// `f(i)` = the unique `j` with `i ⊩ α_j` under `w`, extended to all worlds
/// by meets. Atoms `p1..pm` missing from `w` are false everywhere.
pub fn alpha_pmorphism(n: usize, w: &Valuation) -> Result<PMorphism, Error> {
    let source = w.frame();
    let target = Frame::new(n as u32)?;
    let family = alpha_formulas(n)?;
    let w = w.clone().lenient();
    let truths = family
        .formulas()
        .iter()
        .map(|a| w.truth_set(a))
        .collect::<Result<Vec<_>, _>>()?;
    let mut gens = Vec::with_capacity(source.n() as usize);
    for x in source.maximal_worlds() {
        let forced: Vec<usize> = (0..n).filter(|&j| truths[j].contains(x)).map(|j| j + 1).collect();
        match forced[..] {
            [j] => gens.push(j),
            _ => {
                return Err(Error::SelfCheck(format!(
                    "maximal world {x} forces alphas {forced:?}, expected exactly one"
                )))
            }
        }
    }
    let f = PMorphism::from_generator_map(source, target, &gens)?;
    if let Some(v) = check_pmorphism(&f).violation {
        return Err(Error::SelfCheck(format!("alpha map is not a p-morphism: {v}")));
    }
    Ok(f)
}

/// Pairs `(x, I)` where `f(x) ⊩ α_I` under `u` disagrees with `x ⊩ α_I`
/// under `w`.
pub fn alpha_transfer_violations(
    f: &PMorphism,
    u: &UniversalValuation,
    w: &Valuation,
) -> Result<Vec<(World, Vec<usize>)>, Error> {
    let w = w.clone().lenient();
    let mut out = Vec::new();
    for i in f.target.worlds() {
        let a = u.family().alpha_world(i)?;
        let (left, right) = (u.valuation().truth_set(&a)?, w.truth_set(&a)?);
        for x in f.source.worlds() {
            if left.contains(f.apply(x)) != right.contains(x) {
                out.push((x, i.generators()));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMismatch {
    pub formula: Formula,
    pub world: World,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub checked: usize,
    pub mismatches: Vec<TransferMismatch>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// For every `χ` and world `x` of `M_m`: `f(x) ⊩ σ(χ)` under `u` iff
/// `x ⊩ σ(χ)` under `w`.
pub fn transfer_check(
    f: &PMorphism,
    sigma: &Substitution,
    u: &UniversalValuation,
    w: &Valuation,
    formulas: &[Formula],
) -> Result<TransferReport, Error> {
    let w = w.clone().lenient();
    let uv = u.valuation().clone().lenient();
    let mut mismatches = Vec::new();
    for chi in formulas {
        let image = sigma.apply(chi);
        let (left, right) = (uv.truth_set(&image)?, w.truth_set(&image)?);
        for x in f.source.worlds() {
            if left.contains(f.apply(x)) != right.contains(x) {
                mismatches.push(TransferMismatch {
                    formula: chi.clone(),
                    world: x,
                });
            }
        }
    }
    Ok(TransferReport {
        checked: formulas.len(),
        mismatches,
    })
}

/// Subformulas of the rule plus `count` random formulas of depth at most 4
/// over `atoms`.
pub fn default_transfer_formulas(rule: &[&Formula], atoms: &[String], count: usize, seed: u64) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for r in rule {
        for s in r.subformulas() {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.extend((0..count).map(|_| random_formula(&mut rng, atoms, 4)));
    out
}
