//! Entropic uncertainty bounds for rank-1 POVMs and the Robertson relation.
//!
//! All entropic bounds are in bits. The strengthened bounds maximize a
//! Maassen–Uffink style bound over the ancilla unitary `W` of the Naimark
//! extension (see [`crate::naimark`]):
//!
//! * pair:   `H(M) + H(N) ≥ −2 log₂ min_W max_kl |⟨m̃_k|(I ⊕ W)|ñ_l⟩|`
//! * single: `H(M) ≥ −log₂ min_W max_kl |⟨m̃_k|(I ⊕ W)|m̃_l⟩|`
//!
//! The historical (uncorrected) forms are exactly half of these and are
//! only produced for comparison.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, hermitian_eigen, tol, ComplexMatrix};
use crate::measurement::{PureState, Pvm, Rank1Povm};
use crate::naimark::{dilate, param_count, NaimarkExtension};
use crate::optimize::{minimize_max_overlap, OptimizerConfig, OverlapKernel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundMethod {
    Mu,
    StrengthenedPair,
    StrengthenedSingle,
    UncorrectedPair,
    UncorrectedSingle,
    SingleMinentropy,
    MixedPvm,
}

impl BoundMethod {
    pub fn is_strengthened(self) -> bool {
        matches!(
            self,
            Self::StrengthenedPair | Self::StrengthenedSingle | Self::UncorrectedPair | Self::UncorrectedSingle
        )
    }

    /// Whether the bound constrains `H(M) + H(N)` rather than `H(M)`.
    pub fn is_pair(self) -> bool {
        matches!(self, Self::Mu | Self::StrengthenedPair | Self::UncorrectedPair)
    }

    pub const ALL: [BoundMethod; 7] = [
        Self::Mu,
        Self::StrengthenedPair,
        Self::StrengthenedSingle,
        Self::UncorrectedPair,
        Self::UncorrectedSingle,
        Self::SingleMinentropy,
        Self::MixedPvm,
    ];

    /// Command-line spelling, e.g. `strengthened-pair`.
    pub fn cli_name(self) -> &'static str {
        match self {
            Self::Mu => "mu",
            Self::StrengthenedPair => "strengthened-pair",
            Self::StrengthenedSingle => "strengthened-single",
            Self::UncorrectedPair => "uncorrected-pair",
            Self::UncorrectedSingle => "uncorrected-single",
            Self::SingleMinentropy => "min-entropy",
            Self::MixedPvm => "mixed-pvm",
        }
    }
}

impl std::str::FromStr for BoundMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.cli_name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Hermitian generator parameters of `W = exp(iH)`; empty without ancilla.
    pub theta_params: Vec<f64>,
    /// Outcome pair `(k, l)` attaining the maximal overlap.
    pub argmax: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub value_bits: f64,
    pub baseline_bits: f64,
    pub witness: Option<Witness>,
    /// False when the optimizer hit its iteration cap or failed outright.
    #[serde(default = "default_true")]
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncorrected_bits: Option<f64>,
}

fn default_true() -> bool {
    true
}

impl BoundReport {
    fn exact(method: BoundMethod, value_bits: f64, argmax: (usize, usize)) -> Self {
        Self {
            method,
            value_bits,
            baseline_bits: value_bits,
            witness: Some(Witness {
                theta_params: Vec::new(),
                argmax: [argmax.0, argmax.1],
            }),
            converged: true,
            uncorrected_bits: None,
        }
    }

    /// Attaches the halved historical value for side-by-side reporting.
    pub fn with_comparison(mut self) -> Self {
        if matches!(self.method, BoundMethod::StrengthenedPair | BoundMethod::StrengthenedSingle) {
            self.uncorrected_bits = Some(0.5 * self.value_bits);
        }
        self
    }
}

fn check_dims(m: &Rank1Povm, n: &Rank1Povm) -> Result<()> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: n.dim(),
        });
    }
    Ok(())
}

/// `−log₂ c`, clamped at zero against rounding of `c` slightly above 1.
fn neg_log2(c: f64) -> f64 {
    (-c.log2()).max(0.0)
}

fn max_overlap_with_arg(m: &Rank1Povm, n: &Rank1Povm) -> Result<(f64, (usize, usize))> {
    check_dims(m, n)?;
    let mut best = (f64::NEG_INFINITY, (0, 0));
    for (k, a) in m.kets().iter().enumerate() {
        for (l, b) in n.kets().iter().enumerate() {
            let c = dot(a.entries(), b.entries()).norm();
            if c > best.0 {
                best = (c, (k, l));
            }
        }
    }
    Ok(best)
}

/// `max_kl |⟨m_k|n_l⟩|`.
pub fn max_overlap(m: &Rank1Povm, n: &Rank1Povm) -> Result<f64> {
    Ok(max_overlap_with_arg(m, n)?.0)
}

/// `H(M) + H(N) ≥ −log₂ max_kl |⟨m_k|n_l⟩|²`.
pub fn maassen_uffink_bound(m: &Rank1Povm, n: &Rank1Povm) -> Result<BoundReport> {
    let (c, arg) = max_overlap_with_arg(m, n)?;
    Ok(BoundReport::exact(BoundMethod::Mu, 2.0 * neg_log2(c), arg))
}

/// Shared machinery of the two strengthened bounds. `scale` is 2 for the
/// pair bound and 1 for the single-POVM bound.
fn strengthened(
    method: BoundMethod,
    ext_m: &NaimarkExtension,
    ext_n: &NaimarkExtension,
    scale: f64,
    cfg: &OptimizerConfig,
) -> Result<BoundReport> {
    let kernel = OverlapKernel::new(ext_m, ext_n)?;
    let identity_params = vec![0.0; param_count(kernel.ancilla_dim())];
    let (base_c, base_arg) = kernel.max_overlap(&identity_params);
    let baseline_bits = scale * neg_log2(base_c);

    let fallback = |converged: bool| BoundReport {
        method,
        value_bits: baseline_bits,
        baseline_bits,
        witness: Some(Witness {
            theta_params: identity_params.clone(),
            argmax: [base_arg.0, base_arg.1],
        }),
        converged,
        uncorrected_bits: None,
    };

    let opt = match minimize_max_overlap(ext_m, ext_n, cfg) {
        Ok(opt) => opt,
        Err(Error::InvalidConfig(msg)) => return Err(Error::InvalidConfig(msg)),
        Err(_) => return Ok(fallback(false)),
    };
    if !opt.best_value.is_finite() || opt.best_value > base_c {
        return Ok(fallback(false));
    }
    let (c, arg) = kernel.max_overlap(&opt.best_params);
    Ok(BoundReport {
        method,
        value_bits: scale * neg_log2(c),
        baseline_bits,
        witness: Some(Witness {
            theta_params: opt.best_params,
            argmax: [arg.0, arg.1],
        }),
        converged: opt.converged,
        uncorrected_bits: None,
    })
}

/// Corrected pair bound, maximized over the ancilla unitary. POVMs with
/// different outcome counts are padded with zero kets to a common `K`.
pub fn strengthened_pair_bound(m: &Rank1Povm, n: &Rank1Povm, cfg: &OptimizerConfig) -> Result<BoundReport> {
    check_dims(m, n)?;
    let k = m.outcomes().max(n.outcomes());
    let ext_m = dilate(&m.pad(k)?)?;
    let ext_n = dilate(&n.pad(k)?)?;
    strengthened(BoundMethod::StrengthenedPair, &ext_m, &ext_n, 2.0, cfg)
}

/// Corrected single-POVM bound from two extensions of the same POVM.
pub fn strengthened_single_bound(m: &Rank1Povm, cfg: &OptimizerConfig) -> Result<BoundReport> {
    let ext = dilate(m)?;
    strengthened(BoundMethod::StrengthenedSingle, &ext, &ext, 1.0, cfg)
}

/// The historical form of a strengthened bound: half the corrected value at
/// the same witness.
pub fn uncorrected_from(corrected: &BoundReport) -> Result<BoundReport> {
    let method = match corrected.method {
        BoundMethod::StrengthenedPair => BoundMethod::UncorrectedPair,
        BoundMethod::StrengthenedSingle => BoundMethod::UncorrectedSingle,
        other => return Err(Error::InvalidConfig(format!("{other:?} has no uncorrected form"))),
    };
    Ok(BoundReport {
        method,
        value_bits: 0.5 * corrected.value_bits,
        baseline_bits: 0.5 * corrected.baseline_bits,
        witness: corrected.witness.clone(),
        converged: corrected.converged,
        uncorrected_bits: None,
    })
}

pub fn uncorrected_pair_bound(m: &Rank1Povm, n: &Rank1Povm, cfg: &OptimizerConfig) -> Result<BoundReport> {
    uncorrected_from(&strengthened_pair_bound(m, n, cfg)?)
}

pub fn uncorrected_single_bound(m: &Rank1Povm, cfg: &OptimizerConfig) -> Result<BoundReport> {
    uncorrected_from(&strengthened_single_bound(m, cfg)?)
}

/// `H(M) ≥ −log₂ max_k ‖m_k‖²`, since every `p_k ≤ ‖m_k‖²`.
pub fn single_povm_minentropy_bound(m: &Rank1Povm) -> BoundReport {
    let (k, n2) = m
        .kets()
        .iter()
        .map(|k| k.norm_sqr())
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, v)| if v > b.1 { (i, v) } else { b });
    BoundReport::exact(BoundMethod::SingleMinentropy, neg_log2(n2), (k, k))
}

/// Bound for the union POVM `{½|a_k⟩⟨a_k|} ∪ {½|b_l⟩⟨b_l|}`:
/// `H(M) ≥ 1 − ½ log₂ max_kl |⟨a_k|b_l⟩|²`.
pub fn mixed_pvm_bound(a: &Pvm, b: &Pvm) -> Result<BoundReport> {
    let mu = maassen_uffink_bound(a.as_povm(), b.as_povm())?;
    let value = 1.0 + 0.5 * mu.value_bits;
    Ok(BoundReport {
        method: BoundMethod::MixedPvm,
        value_bits: value,
        baseline_bits: value,
        witness: mu.witness,
        converged: true,
        uncorrected_bits: None,
    })
}

/// A Hermitian operator on `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > tol::EXACT {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix })
    }

    fn pauli(entries: [Complex64; 4]) -> Self {
        Self {
            matrix: ComplexMatrix::new(2, 2, entries.to_vec()).expect("2x2"),
        }
    }

    pub fn pauli_x() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self::pauli([z, o, o, z])
    }

    pub fn pauli_y() -> Self {
        let (i, z) = (Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
        Self::pauli([z, -i, i, z])
    }

    pub fn pauli_z() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self::pauli([o, z, z, -o])
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `⟨ψ|X|ψ⟩` as a complex number (real for Hermitian `X`).
    fn expect(matrix: &ComplexMatrix, state: &PureState) -> Result<Complex64> {
        let v = matrix.mul_vec(state.ket())?;
        Ok(dot(state.ket().entries(), v.entries()))
    }

    pub fn expectation(&self, state: &PureState) -> Result<f64> {
        Ok(Self::expect(&self.matrix, state)?.re)
    }

    /// `√(⟨X²⟩ − ⟨X⟩²)`.
    pub fn std_dev(&self, state: &PureState) -> Result<f64> {
        let mean = self.expectation(state)?;
        let sq = Self::expect(&self.matrix.matmul(&self.matrix)?, state)?.re;
        Ok((sq - mean * mean).max(0.0).sqrt())
    }

    /// Measurement in the eigenbasis (eigenvalues ascending).
    pub fn eigenbasis(&self) -> Result<Pvm> {
        let (_, vectors) = hermitian_eigen(&self.matrix)?;
        Pvm::try_from_povm(Rank1Povm::from_basis_columns(&vectors)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobertsonReport {
    pub std_dev_a: f64,
    pub std_dev_b: f64,
    /// `½ |⟨[A, B]⟩|`.
    pub robertson_bound: f64,
    pub satisfied: bool,
}

/// Evaluates `ΔA·ΔB ≥ ½|⟨[A,B]⟩|` on `state`.
pub fn robertson_report(a: &Observable, b: &Observable, state: &PureState) -> Result<RobertsonReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if a.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: state.dim(),
        });
    }
    let commutator = a.matrix.matmul(&b.matrix)?.sub(&b.matrix.matmul(&a.matrix)?)?;
    let robertson_bound = 0.5 * Observable::expect(&commutator, state)?.norm();
    let std_dev_a = a.std_dev(state)?;
    let std_dev_b = b.std_dev(state)?;
    Ok(RobertsonReport {
        std_dev_a,
        std_dev_b,
        robertson_bound,
        satisfied: std_dev_a * std_dev_b >= robertson_bound - 1e-12,
    })
}
