use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sigma_json;
use crate::alpha::{u_valuation, universal_subst};
use crate::formula::{Formula, Substitution};
use crate::kpform::FrameCheck;
use crate::medvedev::bits;
use crate::medvedev::{
    generated_subframe, search_valuations, valid_on, Frame, RefutationWitness, SearchOptions,
    Strategy, Valuation, World, WitnessJson,
};
use crate::Error;

#[derive(Clone, Debug)]
pub struct AdmissibilityOptions {
    pub search: SearchOptions,
    /// `σ(φ)` is checked on `M_1..=validity_bound`.
    pub validity_bound: u32,
    pub validity_search: SearchOptions,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        AdmissibilityOptions {
            search: SearchOptions::default(),
            validity_bound: 4,
            validity_search: SearchOptions {
                strategy: Strategy::Auto {
                    count: 1000,
                    seed: 0,
                },
                budget: 10_000_000,
            },
        }
    }
}

/// A substitution `σ` with `σ(φ)` valid in Medvedev's logic and `σ(ψ)` not,
/// showing that the rule `φ / ψ` is not admissible.
///
/// `σ(ψ)` is refuted under `u_k` at the bottom of `M_k`. Validity of `σ(φ)`
/// holds on every frame because any valuation of `M_m` factors through
/// `u_k` by a p-morphism; [`AdmissibilityWitness::validity_evidence`] only
/// re-checks it on small frames.
#[derive(Clone, Debug)]
pub struct AdmissibilityWitness {
    pub premise: Formula,
    pub conclusion: Formula,
    /// Frame on which the search found `w ⊩ φ`, `w ⊮ ψ`.
    pub found_on: u32,
    pub found_world: World,
    /// `v` restricted to `↑w ≅ M_k`: `φ` holds everywhere, `ψ` fails at the bottom.
    pub valuation: Valuation,
    pub sigma: Substitution,
    pub refutation: RefutationWitness,
    pub validity_evidence: Vec<FrameCheck>,
}

impl AdmissibilityWitness {
    pub fn k(&self) -> u32 {
        self.valuation.frame().n()
    }

    pub fn sigma_premise(&self) -> Formula {
        self.sigma.apply(&self.premise)
    }

    pub fn to_json(&self) -> AdmissibilityJson {
        AdmissibilityJson {
            witness: self.refutation.to_json(),
            premise: self.premise.to_string(),
            conclusion: self.conclusion.to_string(),
            rule_valuation: self.valuation.to_map(),
            sigma: sigma_json(&self.sigma),
        }
    }
}

/// The witness format for `σ(ψ)` under `u_k`, plus the rule, the restricted
/// valuation and `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityJson {
    #[serde(flatten)]
    pub witness: WitnessJson,
    pub premise: String,
    pub conclusion: String,
    pub rule_valuation: crate::medvedev::ValuationMap,
    pub sigma: BTreeMap<String, String>,
}

/// Least world in the frame order among `set`: most generators first, then
/// lowest mask.
fn least_world(set: &[u64]) -> Option<u32> {
    bits::iter_masks(set).max_by_key(|&m| (m.count_ones(), std::cmp::Reverse(m)))
}

/// Search `M_1..=max_n` for a world forcing `φ` but not `ψ` and turn the
/// first hit into a substitution witness. `None` is inconclusive beyond the
/// bound.
pub fn admissibility_witness(
    premise: &Formula,
    conclusion: &Formula,
    max_n: u32,
    opts: &AdmissibilityOptions,
) -> Result<Option<AdmissibilityWitness>, Error> {
    let mut atoms = premise.atoms();
    for a in conclusion.atoms() {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    let mut found = None;
    for n in 1..=max_n {
        let frame = Frame::new(n)?;
        let Some(mode) = opts.search.mode_for(&frame, atoms.len()) else {
            break;
        };
        let hit = search_valuations(&frame, &[premise, conclusion], mode, opts.search.budget, |t, full| {
            let cand: Vec<u64> = t[0].iter().zip(t[1]).zip(full).map(|((a, b), f)| a & !b & f).collect();
            least_world(&cand)
        })?;
        if let Some((v, w)) = hit {
            found = Some((frame, v, w));
            break;
        }
    }
    let Some((frame, v, w)) = found else {
        return Ok(None);
    };

    let (sub, reindex) = generated_subframe(&frame, w)?;
    let valuation = reindex.restrict(&v)?;
    if !valuation.validates(premise)? {
        return Err(Error::SelfCheck(format!("`{premise}` is not global on ↑{w}")));
    }
    if valuation.forces(sub.bottom(), conclusion)? {
        return Err(Error::SelfCheck(format!("`{conclusion}` holds at the bottom of ↑{w}")));
    }

    let k = sub.n();
    let sigma = universal_subst(&valuation)?;
    let u = u_valuation(k)?;
    let image = sigma.apply(conclusion);
    let refutation = RefutationWitness::new(u.valuation().clone(), sub.bottom(), image)
        .map_err(|e| Error::SelfCheck(format!("u_{k} does not refute the image of the conclusion: {e}")))?;

    let sigma_phi = sigma.apply(premise);
    let sigma_atoms = sigma_phi.atoms().len();
    let mut validity_evidence = Vec::new();
    for m in 1..=opts.validity_bound {
        let frame = Frame::new(m)?;
        let Some(mode) = opts.validity_search.mode_for(&frame, sigma_atoms) else {
            break;
        };
        let verdict = valid_on(&frame, &sigma_phi, mode, opts.validity_search.budget)?;
        if let Some(r) = verdict.witness() {
            return Err(Error::SelfCheck(format!(
                "`{sigma_phi}` refuted on M_{m} at {}",
                r.world()
            )));
        }
        validity_evidence.push(FrameCheck { n: m, verdict });
    }

    Ok(Some(AdmissibilityWitness {
        premise: premise.clone(),
        conclusion: conclusion.clone(),
        found_on: frame.n(),
        found_world: w,
        valuation,
        sigma,
        refutation,
        validity_evidence,
    }))
}
