//! Built-in instances with their bounds, state-search minima and reports.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::{
    maassen_uffink_bound, mixed_pvm_bound, robertson_report, single_povm_minentropy_bound, strengthened_pair_bound,
    strengthened_single_bound, uncorrected_from, Observable, RobertsonReport,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexVector;
use crate::measurement::{entropy_identity_check, mixed_pvm_povm, PureState, Pvm, Rank1Povm};
use crate::naimark::{dilate, overlap_matrix, AncillaUnitary};
use crate::optimize::{grid_search_phase, minimize_entropy_over_states, OptimizerConfig};

pub const DEMO_NAMES: [&str; 4] = ["trine", "mub", "larsen", "mixed"];

/// Grid resolution of the one-parameter oracle.
pub const GRID_POINTS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrineDemo {
    pub minentropy_bound_bits: f64,
    pub uncorrected_bits: f64,
    pub corrected_bits: f64,
    pub witness_theta: f64,
    pub grid_oracle_bits: f64,
    pub grid_oracle_theta: f64,
    pub min_entropy_found_bits: f64,
}

pub fn trine(cfg: &OptimizerConfig) -> Result<TrineDemo> {
    let t = Rank1Povm::trine();
    let corrected = strengthened_single_bound(&t, cfg)?;
    let uncorrected = uncorrected_from(&corrected)?;
    let ext = dilate(&t)?;
    let grid = grid_search_phase(
        |theta| {
            overlap_matrix(&ext, &ext, &AncillaUnitary::phase(theta))
                .map(|o| o.entries().iter().map(|z| z.norm()).fold(0.0, f64::max))
                .unwrap_or(f64::INFINITY)
        },
        GRID_POINTS,
    )?;
    Ok(TrineDemo {
        minentropy_bound_bits: single_povm_minentropy_bound(&t).value_bits,
        uncorrected_bits: uncorrected.value_bits,
        corrected_bits: corrected.value_bits,
        witness_theta: corrected.witness.map(|w| w.theta_params[0]).unwrap_or(0.0),
        grid_oracle_bits: -grid.best_value.log2(),
        grid_oracle_theta: grid.best_params[0],
        min_entropy_found_bits: minimize_entropy_over_states(&[&t], cfg)?.best_value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MubDemo {
    pub mu_bits: f64,
    pub strengthened_pair_bits: f64,
    pub min_pair_entropy_bits: f64,
    pub mixed_bits: f64,
    pub min_mixed_entropy_bits: f64,
}

pub fn mub(cfg: &OptimizerConfig) -> Result<MubDemo> {
    let (z, x) = (Pvm::pauli_z(), Pvm::pauli_x());
    let union = mixed_pvm_povm(&z, &x)?;
    Ok(MubDemo {
        mu_bits: maassen_uffink_bound(z.as_povm(), x.as_povm())?.value_bits,
        strengthened_pair_bits: strengthened_pair_bound(z.as_povm(), x.as_povm(), cfg)?.value_bits,
        min_pair_entropy_bits: minimize_entropy_over_states(&[z.as_povm(), x.as_povm()], cfg)?.best_value,
        mixed_bits: mixed_pvm_bound(&z, &x)?.value_bits,
        min_mixed_entropy_bits: minimize_entropy_over_states(&[&union], cfg)?.best_value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LarsenDemo {
    pub robertson: RobertsonReport,
    pub eigenbasis_mu_bits: f64,
    pub min_pair_entropy_bits: f64,
}

/// `(|0⟩ + e^{iπ/4}|1⟩)/√2`.
pub fn larsen_state() -> PureState {
    PureState::new(
        ComplexVector::new(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0),
        ])
        .expect("finite"),
    )
    .expect("unit norm")
}

pub fn larsen(cfg: &OptimizerConfig) -> Result<LarsenDemo> {
    let (a, b) = (Observable::pauli_x(), Observable::pauli_y());
    let (ea, eb) = (a.eigenbasis()?, b.eigenbasis()?);
    Ok(LarsenDemo {
        robertson: robertson_report(&a, &b, &larsen_state())?,
        eigenbasis_mu_bits: maassen_uffink_bound(ea.as_povm(), eb.as_povm())?.value_bits,
        min_pair_entropy_bits: minimize_entropy_over_states(&[ea.as_povm(), eb.as_povm()], cfg)?.best_value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedDemo {
    pub mu_bits: f64,
    pub mixed_bits: f64,
    pub min_mixed_entropy_bits: f64,
    /// `(H(M), 1 + ½[H(A)+H(B)])` on |0⟩, |+⟩ and the Larsen state.
    pub identity_samples: Vec<(f64, f64)>,
    pub union_minentropy_bits: f64,
    pub union_strengthened_single_bits: f64,
}

pub fn mixed(cfg: &OptimizerConfig) -> Result<MixedDemo> {
    let (z, x) = (Pvm::pauli_z(), Pvm::pauli_x());
    let union = mixed_pvm_povm(&z, &x)?;
    let plus = PureState::from_unnormalized(&ComplexVector::from_real(&[1.0, 1.0])?)?;
    let identity_samples = [PureState::basis(2, 0), plus, larsen_state()]
        .iter()
        .map(|s| entropy_identity_check(&z, &x, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(MixedDemo {
        mu_bits: maassen_uffink_bound(z.as_povm(), x.as_povm())?.value_bits,
        mixed_bits: mixed_pvm_bound(&z, &x)?.value_bits,
        min_mixed_entropy_bits: minimize_entropy_over_states(&[&union], cfg)?.best_value,
        identity_samples,
        union_minentropy_bits: single_povm_minentropy_bound(&union).value_bits,
        union_strengthened_single_bits: strengthened_single_bound(&union, cfg)?.value_bits,
    })
}

/// Human-readable report for a named demo.
pub fn run_demo(name: &str, cfg: &OptimizerConfig) -> Result<String> {
    let mut s = String::new();
    match name {
        "trine" => {
            let r = trine(cfg)?;
            writeln!(s, "trine POVM: kets sqrt(2/3)(cos k*pi/3, sin k*pi/3), k = 0, 1, 2 (d = 2, K = 3, ancilla 1)").ok();
            writeln!(s, "  min-entropy bound         -log2 max|m_k|^2 = {:.6} bits", r.minentropy_bound_bits).ok();
            writeln!(s, "  uncorrected single bound  {:.6} bits", r.uncorrected_bits).ok();
            writeln!(s, "  corrected single bound    {:.6} bits (theta = {:.6})", r.corrected_bits, r.witness_theta).ok();
            writeln!(s, "  grid oracle ({GRID_POINTS} pts)   {:.6} bits (theta = {:.6})", r.grid_oracle_bits, r.grid_oracle_theta).ok();
            writeln!(s, "  state-search min H(M)     {:.6} bits", r.min_entropy_found_bits).ok();
        }
        "mub" => {
            let r = mub(cfg)?;
            writeln!(s, "qubit mutually unbiased bases: Z = {{|0>, |1>}}, X = {{|+>, |->}}").ok();
            writeln!(s, "  Maassen-Uffink bound      {:.6} bits", r.mu_bits).ok();
            writeln!(s, "  strengthened pair bound   {:.6} bits (no ancilla)", r.strengthened_pair_bits).ok();
            writeln!(s, "  state-search min H(Z)+H(X) {:.6} bits", r.min_pair_entropy_bits).ok();
            writeln!(s, "  union POVM bound          {:.6} bits", r.mixed_bits).ok();
            writeln!(s, "  state-search min H(union) {:.6} bits", r.min_mixed_entropy_bits).ok();
        }
        "larsen" => {
            let r = larsen(cfg)?;
            writeln!(s, "observables A = X, B = Y on (|0> + e^(i pi/4)|1>)/sqrt(2)").ok();
            writeln!(s, "  Delta A                   {:.6}", r.robertson.std_dev_a).ok();
            writeln!(s, "  Delta B                   {:.6}", r.robertson.std_dev_b).ok();
            writeln!(s, "  Robertson bound |<[A,B]>|/2 = {:.6} (satisfied: {})", r.robertson.robertson_bound, r.robertson.satisfied).ok();
            writeln!(s, "  both variances positive, Robertson bound vanishes").ok();
            writeln!(s, "  Maassen-Uffink bound on eigenbases {:.6} bits", r.eigenbasis_mu_bits).ok();
            writeln!(s, "  state-search min H(A)+H(B) {:.6} bits", r.min_pair_entropy_bits).ok();
        }
        "mixed" => {
            let r = mixed(cfg)?;
            writeln!(s, "union POVM {{|a_k><a_k|/2}} u {{|b_l><b_l|/2}} with A = Z, B = X").ok();
            writeln!(s, "  Maassen-Uffink bound for A, B  {:.6} bits", r.mu_bits).ok();
            writeln!(s, "  union bound 1 + MU/2           {:.6} bits", r.mixed_bits).ok();
            writeln!(s, "  state-search min H(union)      {:.6} bits", r.min_mixed_entropy_bits).ok();
            for (lhs, rhs) in &r.identity_samples {
                writeln!(s, "  H(M) = {lhs:.6}   1 + (H(A)+H(B))/2 = {rhs:.6}").ok();
            }
            writeln!(s, "  min-entropy bound of union     {:.6} bits", r.union_minentropy_bits).ok();
            writeln!(s, "  corrected single bound (union) {:.6} bits", r.union_strengthened_single_bits).ok();
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown demo `{other}`; available: {}",
                DEMO_NAMES.join(", ")
            )))
        }
    }
    Ok(s)
}
