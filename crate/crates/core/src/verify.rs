//! Numerical soundness certificates: compare a claimed bound with the
//! smallest value of the bounded entropy expression found by state search.

use serde::{Deserialize, Serialize};

use crate::bounds::{
    maassen_uffink_bound, mixed_pvm_bound, single_povm_minentropy_bound, strengthened_pair_bound,
    strengthened_single_bound, uncorrected_from, BoundMethod, BoundReport,
};
use crate::error::{Error, Result};
use crate::io::{to_amplitudes, Amplitudes};
use crate::measurement::{mixed_pvm_povm, Pvm, Rank1Povm};
use crate::optimize::{minimize_entropy_over_states, state_from_params, OptimizerConfig};

/// A margin below `-MARGIN_TOL` counts as a violation.
pub const MARGIN_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoundnessCertificate {
    pub method: BoundMethod,
    pub bound_bits: f64,
    pub min_entropy_found_bits: f64,
    pub margin: f64,
    /// Number of state-search restarts.
    pub trials: usize,
    pub violated: bool,
    pub argmin_state: Amplitudes,
}

impl SoundnessCertificate {
    pub fn is_consistent(&self) -> bool {
        self.violated == (self.margin < -MARGIN_TOL)
    }
}

/// The measurements a bound is about.
#[derive(Clone, Copy, Debug)]
pub enum Instance<'a> {
    Single(&'a Rank1Povm),
    Pair(&'a Rank1Povm, &'a Rank1Povm),
    Mixed(&'a Pvm, &'a Pvm),
}

fn wrong_instance(method: BoundMethod) -> Error {
    Error::InvalidConfig(format!("method `{}` does not apply to this input", method.cli_name()))
}

pub fn compute_bound(method: BoundMethod, instance: Instance<'_>, cfg: &OptimizerConfig) -> Result<BoundReport> {
    use BoundMethod::*;
    match (method, instance) {
        (Mu, Instance::Pair(m, n)) => maassen_uffink_bound(m, n),
        (StrengthenedPair, Instance::Pair(m, n)) => strengthened_pair_bound(m, n, cfg),
        (UncorrectedPair, Instance::Pair(m, n)) => uncorrected_from(&strengthened_pair_bound(m, n, cfg)?),
        (StrengthenedSingle, Instance::Single(m)) => strengthened_single_bound(m, cfg),
        (UncorrectedSingle, Instance::Single(m)) => uncorrected_from(&strengthened_single_bound(m, cfg)?),
        (SingleMinentropy, Instance::Single(m)) => Ok(single_povm_minentropy_bound(m)),
        (MixedPvm, Instance::Mixed(a, b)) => mixed_pvm_bound(a, b),
        (method, _) => Err(wrong_instance(method)),
    }
}

/// POVMs whose entropies are summed by the inequality.
pub fn entropy_terms(instance: Instance<'_>) -> Result<Vec<Rank1Povm>> {
    Ok(match instance {
        Instance::Single(m) => vec![m.clone()],
        Instance::Pair(m, n) => vec![m.clone(), n.clone()],
        Instance::Mixed(a, b) => vec![mixed_pvm_povm(a, b)?],
    })
}

/// Minimizes the entropy expression over states and compares with `bound_bits`.
pub fn certify(method: BoundMethod, bound_bits: f64, terms: &[Rank1Povm], cfg: &OptimizerConfig) -> Result<SoundnessCertificate> {
    let refs: Vec<&Rank1Povm> = terms.iter().collect();
    let search = minimize_entropy_over_states(&refs, cfg)?;
    let margin = search.best_value - bound_bits;
    Ok(SoundnessCertificate {
        method,
        bound_bits,
        min_entropy_found_bits: search.best_value,
        margin,
        trials: cfg.restarts,
        violated: margin < -MARGIN_TOL,
        argmin_state: to_amplitudes(state_from_params(&search.best_params)?.ket()),
    })
}

/// Computes the bound, multiplies it by `inflate` (1.0 for honest use) and
/// certifies it.
pub fn verify_bound(
    method: BoundMethod,
    instance: Instance<'_>,
    cfg: &OptimizerConfig,
    inflate: f64,
) -> Result<(BoundReport, SoundnessCertificate)> {
    let report = compute_bound(method, instance, cfg)?;
    let cert = certify(method, inflate * report.value_bits, &entropy_terms(instance)?, cfg)?;
    Ok((report, cert))
}
