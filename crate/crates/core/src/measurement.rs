//! Pure states, rank-1 POVMs, Born-rule distributions and Shannon entropy.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, haar_random_unitary, ComplexMatrix, ComplexVector};

/// Completeness tolerance, Frobenius norm of `Σ|m⟩⟨m| − I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Slack allowed on sub-normalization of POVM kets.
pub const KET_NORM_TOL: f64 = 1e-12;
/// Orthonormality tolerance for PVMs and unit-norm tolerance for states.
pub const ORTHO_TOL: f64 = 1e-10;
/// Probabilities within this distance outside `[0,1]` are clamped.
pub const PROB_CLAMP_TOL: f64 = 1e-12;
/// Normalization tolerance for outcome distributions.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// A unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    ket: ComplexVector,
}

impl PureState {
    pub fn new(ket: ComplexVector) -> Result<Self> {
        let n = ket.norm();
        if (n - 1.0).abs() > ORTHO_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { ket })
    }

    /// Normalizes `ket` first.
    pub fn from_unnormalized(ket: &ComplexVector) -> Result<Self> {
        Ok(Self { ket: ket.normalized()? })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Self {
            ket: ComplexVector::basis(dim, index),
        }
    }

    pub fn ket(&self) -> &ComplexVector {
        &self.ket
    }

    pub fn dim(&self) -> usize {
        self.ket.dim()
    }
}

/// A POVM whose elements are the rank-1 operators `|m_k⟩⟨m_k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Povm {
    kets: Vec<ComplexVector>,
    dim: usize,
}

impl Rank1Povm {
    pub fn new(kets: Vec<ComplexVector>) -> Result<Self> {
        let dim = kets.first().ok_or(Error::Empty("POVM ket list"))?.dim();
        if let Some(bad) = kets.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        if kets.len() < dim {
            return Err(Error::TooFewOutcomes {
                outcomes: kets.len(),
                dim,
            });
        }
        for (index, k) in kets.iter().enumerate() {
            let norm = k.norm();
            if norm > 1.0 + KET_NORM_TOL {
                return Err(Error::KetNormTooLarge { index, norm });
            }
        }
        let povm = Self { kets, dim };
        let dev = povm.completeness_deviation();
        if dev >= COMPLETENESS_TOL {
            return Err(Error::Incomplete(dev));
        }
        Ok(povm)
    }

    /// Measurement in the orthonormal basis formed by the columns of `u`.
    pub fn from_basis_columns(u: &ComplexMatrix) -> Result<Self> {
        Self::new((0..u.cols()).map(|j| u.column(j)).collect())
    }

    pub fn kets(&self) -> &[ComplexVector] {
        &self.kets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.kets.len()
    }

    /// `Σ_k |m_k⟩⟨m_k|`.
    pub fn effect_sum(&self) -> ComplexMatrix {
        let d = self.dim;
        ComplexMatrix::from_fn(d, d, |i, j| self.kets.iter().map(|k| k[i] * k[j].conj()).sum())
    }

    pub fn completeness_deviation(&self) -> f64 {
        self.effect_sum()
            .sub(&ComplexMatrix::identity(self.dim))
            .expect("square")
            .frobenius_norm()
    }

    /// Appends zero kets up to `outcomes` in total.
    pub fn pad(&self, outcomes: usize) -> Result<Self> {
        if outcomes < self.outcomes() {
            return Err(Error::TooFewOutcomes {
                outcomes,
                dim: self.outcomes(),
            });
        }
        let mut kets = self.kets.clone();
        kets.resize(outcomes, ComplexVector::zeros(self.dim));
        Ok(Self { kets, dim: self.dim })
    }

    /// The qubit basis `{|0⟩, |1⟩}`.
    pub fn pauli_z() -> Self {
        Pvm::pauli_z().into_povm()
    }

    /// The qubit basis `{|+⟩, |−⟩}`.
    pub fn pauli_x() -> Self {
        Pvm::pauli_x().into_povm()
    }

    /// Three real kets `√(2/3)(cos kπ/3, sin kπ/3)`, `k = 0, 1, 2`.
    pub fn trine() -> Self {
        let r = (2.0f64 / 3.0).sqrt();
        let kets = (0..3)
            .map(|k| {
                let a = k as f64 * PI / 3.0;
                ComplexVector::from_real(&[r * a.cos(), r * a.sin()]).expect("finite")
            })
            .collect();
        Self::new(kets).expect("trine is complete")
    }
}

/// A non-degenerate projective measurement: an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Pvm(Rank1Povm);

impl Pvm {
    pub fn new(kets: Vec<ComplexVector>) -> Result<Self> {
        let povm = Rank1Povm::new(kets)?;
        Self::try_from_povm(povm)
    }

    pub fn try_from_povm(povm: Rank1Povm) -> Result<Self> {
        if povm.outcomes() != povm.dim() {
            return Err(Error::DimensionMismatch {
                expected: povm.dim(),
                found: povm.outcomes(),
            });
        }
        let mut dev: f64 = 0.0;
        for (i, a) in povm.kets().iter().enumerate() {
            for (j, b) in povm.kets().iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((dot(a.entries(), b.entries()) - Complex64::new(target, 0.0)).norm());
            }
        }
        if dev > ORTHO_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self(povm))
    }

    pub fn pauli_z() -> Self {
        Self::new(vec![ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)]).expect("orthonormal")
    }

    pub fn pauli_x() -> Self {
        let s = FRAC_1_SQRT_2;
        Self::new(vec![
            ComplexVector::from_real(&[s, s]).expect("finite"),
            ComplexVector::from_real(&[s, -s]).expect("finite"),
        ])
        .expect("orthonormal")
    }

    pub fn pauli_y() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, FRAC_1_SQRT_2);
        Self::new(vec![
            ComplexVector::new(vec![s, i]).expect("finite"),
            ComplexVector::new(vec![s, -i]).expect("finite"),
        ])
        .expect("orthonormal")
    }

    pub fn as_povm(&self) -> &Rank1Povm {
        &self.0
    }

    pub fn into_povm(self) -> Rank1Povm {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// A normalized probability vector.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    /// Clamps floating dust into `[0,1]` and checks normalization.
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Empty("distribution"));
        }
        let mut clamped = Vec::with_capacity(probabilities.len());
        for p in probabilities {
            if !p.is_finite() || !(-PROB_CLAMP_TOL..=1.0 + PROB_CLAMP_TOL).contains(&p) {
                return Err(Error::InvalidDistribution(format!("probability {p} out of range")));
            }
            clamped.push(p.clamp(0.0, 1.0));
        }
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { probabilities: clamped })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// Born rule: `p_k = |⟨m_k|ψ⟩|²`.
pub fn outcome_distribution(povm: &Rank1Povm, state: &PureState) -> Result<OutcomeDistribution> {
    if povm.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: state.dim(),
        });
    }
    OutcomeDistribution::new(
        povm.kets()
            .iter()
            .map(|m| dot(m.entries(), state.ket().entries()).norm_sqr())
            .collect(),
    )
}

/// Shannon entropy in bits, with `0·log 0 = 0`.
pub fn shannon_entropy(p: &OutcomeDistribution) -> f64 {
    entropy_bits(p.probabilities().iter().copied())
}

pub(crate) fn entropy_bits(p: impl Iterator<Item = f64>) -> f64 {
    let h: f64 = p.filter(|&x| x > 0.0).map(|x| -x * x.log2()).sum();
    h.max(0.0)
}

/// Entropy of `povm` on the (not necessarily normalized) vector `psi`,
/// normalizing on the fly. Skips validation; used in inner loops.
pub(crate) fn entropy_on_raw(povm: &Rank1Povm, psi: &[Complex64]) -> f64 {
    let n2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    entropy_bits(povm.kets().iter().map(|m| (dot(m.entries(), psi).norm_sqr() / n2).min(1.0)))
}

/// `H(M)` for a state.
pub fn entropy_of(povm: &Rank1Povm, state: &PureState) -> Result<f64> {
    Ok(shannon_entropy(&outcome_distribution(povm, state)?))
}

/// The POVM obtained by performing `a` or `b` with probability ½ each:
/// `{½|a_k⟩⟨a_k|} ∪ {½|b_l⟩⟨b_l|}`.
pub fn mixed_pvm_povm(a: &Pvm, b: &Pvm) -> Result<Rank1Povm> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let kets = a
        .as_povm()
        .kets()
        .iter()
        .chain(b.as_povm().kets())
        .map(|k| k.scale(s))
        .collect();
    Rank1Povm::new(kets)
}

/// Returns `(H(M), 1 + ½[H(A) + H(B)])` for `M = mixed_pvm_povm(a, b)`.
pub fn entropy_identity_check(a: &Pvm, b: &Pvm, state: &PureState) -> Result<(f64, f64)> {
    let mixed = mixed_pvm_povm(a, b)?;
    let lhs = entropy_of(&mixed, state)?;
    let rhs = 1.0 + 0.5 * (entropy_of(a.as_povm(), state)? + entropy_of(b.as_povm(), state)?);
    Ok((lhs, rhs))
}

/// Random rank-1 POVM: kets are the conjugated rows of the first `d`
/// columns of a Haar-random `K×K` unitary.
pub fn random_rank1_povm(dim: usize, outcomes: usize, seed: u64) -> Result<Rank1Povm> {
    if dim == 0 {
        return Err(Error::Empty("POVM dimension"));
    }
    if outcomes < dim {
        return Err(Error::TooFewOutcomes { outcomes, dim });
    }
    let u = haar_random_unitary(outcomes, seed);
    let kets = (0..outcomes)
        .map(|k| ComplexVector::new((0..dim).map(|i| u[(k, i)].conj()).collect()))
        .collect::<Result<Vec<_>>>()?;
    Rank1Povm::new(kets)
}

pub fn random_pvm(dim: usize, seed: u64) -> Result<Pvm> {
    Pvm::try_from_povm(random_rank1_povm(dim, dim, seed)?)
}

/// Haar-random pure state (first column of a Haar unitary).
pub fn random_state(dim: usize, seed: u64) -> PureState {
    let u = haar_random_unitary(dim, seed);
    PureState::from_unnormalized(&u.column(0)).expect("unit column")
}
