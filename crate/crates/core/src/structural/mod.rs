//! Certificates behind the structural results for Medvedev's logic: the
//! decomposition of a non-theorem into classically refutable negations,
//! substitution witnesses for non-derivable rules, and the p-morphisms that
//! pull validity back along the universal valuation.

mod admissibility;
mod levin;
mod pmorphism;

use std::collections::BTreeMap;

use crate::formula::Substitution;

pub use admissibility::{admissibility_witness, AdmissibilityOptions, AdmissibilityWitness, AdmissibilityJson};
pub use levin::{levin_decomposition, LevinDecomposition, LevinJson, LevinOptions};
pub use pmorphism::{
    alpha_pmorphism, alpha_transfer_violations, check_pmorphism, default_transfer_formulas,
    forced_alphas, transfer_check, PMorphism, PMorphismJson, PMorphismReport, TransferMismatch,
    TransferReport, Violation,
};

/// `{atom: formula}` as written into the JSON certificates.
pub fn sigma_json(sigma: &Substitution) -> BTreeMap<String, String> {
    sigma.iter().map(|(a, f)| (a.clone(), f.to_string())).collect()
}
