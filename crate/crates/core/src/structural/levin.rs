use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sigma_json;
use crate::alpha::{u_valuation, universal_subst};
use crate::formula::{Formula, Substitution};
use crate::ipc::{classical_countermodel_with_limit, classical_eval, Assignment, DEFAULT_ATOM_LIMIT};
use crate::kpform::{kp_normalize_with_cap, kp_rank_with_cap, FrameCheck, Rank, DEFAULT_RANK_CAP};
use crate::medvedev::{refute, valid_on, Frame, RefutationWitness, SearchOptions, WitnessJson};
use crate::Error;

#[derive(Clone, Debug)]
pub struct LevinOptions {
    pub search: SearchOptions,
    pub rank_cap: u64,
    pub classical_limit: usize,
    /// The normal form is checked against `σ(φ)` on `M_1..=equivalence_bound`.
    pub equivalence_bound: u32,
}

impl Default for LevinOptions {
    fn default() -> Self {
        LevinOptions {
            search: SearchOptions::default(),
            rank_cap: DEFAULT_RANK_CAP,
            classical_limit: DEFAULT_ATOM_LIMIT,
            equivalence_bound: 3,
        }
    }
}

/// A non-theorem `φ`, its refutation on `M_n`, the universal substitution
/// `σ`, and `σ(φ) ≡ ~ψ_1 | … | ~ψ_k` with one classical model of each `ψ_i`.
/// Since every consistent extension of intuitionistic logic proves the same
/// negations as classical logic, each model shows `~ψ_i` is unprovable there.
#[derive(Clone, Debug)]
pub struct LevinDecomposition {
    pub source: Formula,
    pub refutation: RefutationWitness,
    pub sigma: Substitution,
    pub image: Formula,
    pub bodies: Vec<Formula>,
    /// `countermodels[i]` satisfies `bodies[i]`, refuting `~bodies[i]`.
    pub countermodels: Vec<Assignment>,
    pub equivalence: Vec<FrameCheck>,
}

impl LevinDecomposition {
    pub fn n(&self) -> u32 {
        self.refutation.n()
    }

    pub fn k(&self) -> usize {
        self.bodies.len()
    }

    pub fn to_json(&self) -> LevinJson {
        LevinJson {
            witness: self.refutation.to_json(),
            sigma: sigma_json(&self.sigma),
            bodies: self.bodies.iter().map(|b| b.to_string()).collect(),
            countermodels: self.countermodels.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevinJson {
    #[serde(flatten)]
    pub witness: WitnessJson,
    pub sigma: BTreeMap<String, String>,
    pub bodies: Vec<String>,
    pub countermodels: Vec<Assignment>,
}

/// `None` when no refutation of `φ` exists on `M_1..=max_n`.
pub fn levin_decomposition(
    phi: &Formula,
    max_n: u32,
    opts: &LevinOptions,
) -> Result<Option<LevinDecomposition>, Error> {
    let Some(refutation) = refute(phi, max_n, &opts.search)? else {
        return Ok(None);
    };
    let n = refutation.n();
    let sigma = universal_subst(refutation.valuation())?;
    let image = sigma.apply(phi);

    // σ(φ) fails under u_n exactly where φ fails under v
    let u = u_valuation(n)?;
    if u.valuation().forces(refutation.world(), &image)? {
        return Err(Error::SelfCheck(format!(
            "u_{n} forces `{image}` at {}",
            refutation.world()
        )));
    }

    let rank = kp_rank_with_cap(&image, opts.rank_cap)?;
    if rank == Rank::Infinite {
        return Err(Error::SelfCheck(format!("`{image}` has infinite rank")));
    }
    let bodies = kp_normalize_with_cap(&image, opts.rank_cap)?.bodies;

    let mut countermodels = Vec::with_capacity(bodies.len());
    for body in &bodies {
        let neg = Formula::neg(body.clone());
        let model = classical_countermodel_with_limit(&neg, opts.classical_limit)?
            .ok_or_else(|| Error::SelfCheck(format!("`{neg}` is a classical tautology")))?;
        if !classical_eval(body, &model) {
            return Err(Error::SelfCheck(format!("countermodel does not satisfy `{body}`")));
        }
        countermodels.push(model);
    }

    let claim = Formula::iff(
        image.clone(),
        crate::kpform::NegDisjunction {
            bodies: bodies.clone(),
        }
        .to_formula(),
    );
    let atoms = claim.atoms().len();
    let mut equivalence = Vec::new();
    for m in 1..=opts.equivalence_bound {
        let frame = Frame::new(m)?;
        let Some(mode) = opts.search.mode_for(&frame, atoms) else {
            break;
        };
        let verdict = valid_on(&frame, &claim, mode, opts.search.budget)?;
        if let Some(w) = verdict.witness() {
            return Err(Error::SelfCheck(format!(
                "normal form differs from `{image}` on M_{m} at {}",
                w.world()
            )));
        }
        equivalence.push(FrameCheck { n: m, verdict });
    }

    Ok(Some(LevinDecomposition {
        source: phi.clone(),
        refutation,
        sigma,
        image,
        bodies,
        countermodels,
        equivalence,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::medvedev::Verdict;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn excluded_middle() {
        let d = levin_decomposition(&f("p | ~p"), 2, &LevinOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.sigma.get("p"), Some(&f("~~p1")));
        assert_eq!(d.image, f("~~p1 | ~~~p1"));
        assert_eq!(d.bodies, vec![f("~p1"), f("~~p1")]);
        let expect: Vec<Assignment> = vec![
            BTreeMap::from([("p1".to_string(), false)]),
            BTreeMap::from([("p1".to_string(), true)]),
        ];
        assert_eq!(d.countermodels, expect);
        assert_eq!(d.equivalence.len(), 3);
        assert!(d.equivalence.iter().all(|c| c.verdict == Verdict::Valid));
    }

    #[test]
    fn weak_excluded_middle_has_two_bodies() {
        let d = levin_decomposition(&f("~p | ~~p"), 4, &LevinOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(d.k(), 2);
        assert_eq!(d.countermodels.len(), 2);
    }

    #[test]
    fn kreisel_putnam_is_not_refuted() {
        let kp = f("(~p -> q | r) -> (~p -> q) | (~p -> r)");
        assert!(levin_decomposition(&kp, 3, &LevinOptions::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn json_extends_witness_format() {
        let d = levin_decomposition(&f("p | ~p"), 2, &LevinOptions::default())
            .unwrap()
            .unwrap();
        let text = serde_json::to_string(&d.to_json()).unwrap();
        assert!(text.starts_with(r#"{"n":2,"valuation":{"p":[[1]]},"world":[1,2],"formula":"p | ~p","#));
        assert!(text.contains(r#""sigma":{"p":"~~p1"}"#));
        assert!(text.contains(r#""countermodels":[{"p1":false},{"p1":true}]"#));
    }
}
