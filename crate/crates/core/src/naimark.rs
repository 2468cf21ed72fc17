//! Minimal Naimark extensions of rank-1 POVMs.
//!
//! A POVM with `K` outcomes on `C^d` is realized as an orthonormal basis
//! `{|m̃_k⟩}` of `C^K = C^d ⊕ C^(K−d)`. Coordinates `0..d` hold the system
//! block (equal to the POVM ket `|m_k⟩`), coordinates `d..K` the ancilla block
//! `|m′_k⟩`. The remaining freedom in the extension is a unitary `W` acting on
//! the ancilla block only, i.e. the operator `I_d ⊕ W`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary_with_tol, dot, exp_i_hermitian, tol, ComplexMatrix, ComplexVector};
use crate::measurement::{Rank1Povm, COMPLETENESS_TOL};

/// Orthonormal basis of `C^K` whose system blocks reproduce a POVM.
#[derive(Clone, Debug, PartialEq)]
pub struct NaimarkExtension {
    basis: Vec<ComplexVector>,
    system_dim: usize,
}

impl NaimarkExtension {
    /// Validates orthonormality of `basis` and wraps it.
    pub fn new(basis: Vec<ComplexVector>, system_dim: usize) -> Result<Self> {
        let k = basis.len();
        if let Some(bad) = basis.iter().find(|v| v.dim() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: bad.dim(),
            });
        }
        if system_dim == 0 || system_dim > k {
            return Err(Error::TooFewOutcomes {
                outcomes: k,
                dim: system_dim,
            });
        }
        let ext = Self { basis, system_dim };
        let dev = ext.gram_deviation();
        if dev > tol::EXACT {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(ext)
    }

    pub fn basis(&self) -> &[ComplexVector] {
        &self.basis
    }

    /// Total dimension `K`, equal to the number of outcomes.
    pub fn outcomes(&self) -> usize {
        self.basis.len()
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn ancilla_dim(&self) -> usize {
        self.outcomes() - self.system_dim
    }

    pub fn system_block(&self, k: usize) -> &[Complex64] {
        &self.basis[k].entries()[..self.system_dim]
    }

    pub fn ancilla_block(&self, k: usize) -> &[Complex64] {
        &self.basis[k].entries()[self.system_dim..]
    }

    /// `max |⟨m̃_k|m̃_l⟩ − δ_kl|`.
    pub fn gram_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (k, a) in self.basis.iter().enumerate() {
            for (l, b) in self.basis.iter().enumerate() {
                let target = if k == l { 1.0 } else { 0.0 };
                dev = dev.max((dot(a.entries(), b.entries()) - Complex64::new(target, 0.0)).norm());
            }
        }
        dev
    }

    /// Largest entrywise distance between the system blocks and `povm`'s kets.
    pub fn restriction_error(&self, povm: &Rank1Povm) -> f64 {
        if povm.outcomes() != self.outcomes() || povm.dim() != self.system_dim {
            return f64::INFINITY;
        }
        povm.kets()
            .iter()
            .enumerate()
            .flat_map(|(k, m)| {
                self.system_block(k)
                    .iter()
                    .zip(m.entries())
                    .map(|(a, b)| (a - b).norm())
            })
            .fold(0.0, f64::max)
    }

    /// The POVM obtained by restricting to the system block.
    pub fn restrict(&self) -> Result<Rank1Povm> {
        Rank1Povm::new(
            (0..self.outcomes())
                .map(|k| ComplexVector::new(self.system_block(k).to_vec()))
                .collect::<Result<_>>()?,
        )
    }
}

/// A unitary `W` on the ancilla space; acts on the extended space as `I_d ⊕ W`.
#[derive(Clone, Debug, PartialEq)]
pub struct AncillaUnitary {
    w: ComplexMatrix,
}

impl AncillaUnitary {
    pub fn new(w: ComplexMatrix) -> Result<Self> {
        let dev = w.unitarity_deviation();
        if dev > tol::EXACT {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { w })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            w: ComplexMatrix::identity(dim),
        }
    }

    /// Scalar phase `e^{iθ}` for a one-dimensional ancilla.
    pub fn phase(theta: f64) -> Self {
        Self {
            w: ComplexMatrix::diagonal(&[Complex64::from_polar(1.0, theta)]),
        }
    }

    /// `W = exp(iH)` with `H` built by [`hermitian_from_params`].
    pub fn from_params(dim: usize, params: &[f64]) -> Result<Self> {
        let h = hermitian_from_params(dim, params)?;
        Ok(Self { w: exp_i_hermitian(&h)? })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.rows()
    }

    /// The full operator `I_d ⊕ W`.
    pub fn full_operator(&self, system_dim: usize) -> ComplexMatrix {
        let m = self.dim();
        ComplexMatrix::from_fn(system_dim + m, system_dim + m, |i, j| match (i < system_dim, j < system_dim) {
            (true, true) if i == j => Complex64::new(1.0, 0.0),
            (false, false) => self.w[(i - system_dim, j - system_dim)],
            _ => Complex64::new(0.0, 0.0),
        })
    }
}

/// Number of real parameters describing an `m×m` Hermitian matrix.
pub fn param_count(dim: usize) -> usize {
    dim * dim
}

/// Hermitian matrix from `m²` reals: the first `m` are the diagonal, then
/// each upper-triangular entry `(i, j)`, `i < j`, takes a (re, im) pair in
/// row-major order.
pub fn hermitian_from_params(dim: usize, params: &[f64]) -> Result<ComplexMatrix> {
    if params.len() != param_count(dim) {
        return Err(Error::DimensionMismatch {
            expected: param_count(dim),
            found: params.len(),
        });
    }
    let mut h = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let mut p = dim;
    for i in 0..dim {
        for j in i + 1..dim {
            let z = Complex64::new(params[p], params[p + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            p += 2;
        }
    }
    Ok(h)
}

/// Builds the canonical minimal extension: the `K×d` matrix with entries
/// `conj(m_k[i])` has orthonormal columns by completeness; its unitary
/// completion's conjugated rows are the extended basis vectors.
pub fn dilate(povm: &Rank1Povm) -> Result<NaimarkExtension> {
    let dev = povm.completeness_deviation();
    if dev >= COMPLETENESS_TOL {
        return Err(Error::Incomplete(dev));
    }
    let k = povm.outcomes();
    let d = povm.dim();
    let isometry = ComplexMatrix::from_fn(k, d, |row, col| povm.kets()[row][col].conj());
    let u = complete_to_unitary_with_tol(&isometry, COMPLETENESS_TOL)?;
    let basis = (0..k)
        .map(|row| ComplexVector::new(u.row(row).iter().map(|z| z.conj()).collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(NaimarkExtension { basis, system_dim: d })
}

/// Maps every basis vector by `I_d ⊕ W`.
pub fn apply_ancilla_unitary(ext: &NaimarkExtension, w: &AncillaUnitary) -> Result<NaimarkExtension> {
    if w.dim() != ext.ancilla_dim() {
        return Err(Error::DimensionMismatch {
            expected: ext.ancilla_dim(),
            found: w.dim(),
        });
    }
    let d = ext.system_dim();
    let m = ext.ancilla_dim();
    let basis = (0..ext.outcomes())
        .map(|k| {
            let anc = ext.ancilla_block(k);
            let mut v = ext.system_block(k).to_vec();
            v.extend((0..m).map(|a| (0..m).map(|b| w.matrix()[(a, b)] * anc[b]).sum::<Complex64>()));
            ComplexVector::new(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NaimarkExtension { basis, system_dim: d })
}

/// Entry `(k, l)` is `⟨m̃_k|(I_d ⊕ W)|ñ_l⟩`.
pub fn overlap_matrix(ext_m: &NaimarkExtension, ext_n: &NaimarkExtension, w: &AncillaUnitary) -> Result<ComplexMatrix> {
    if ext_m.outcomes() != ext_n.outcomes() {
        return Err(Error::DimensionMismatch {
            expected: ext_m.outcomes(),
            found: ext_n.outcomes(),
        });
    }
    if ext_m.system_dim() != ext_n.system_dim() {
        return Err(Error::DimensionMismatch {
            expected: ext_m.system_dim(),
            found: ext_n.system_dim(),
        });
    }
    let rotated = apply_ancilla_unitary(ext_n, w)?;
    let k = ext_m.outcomes();
    Ok(ComplexMatrix::from_fn(k, k, |r, c| {
        dot(ext_m.basis()[r].entries(), rotated.basis()[c].entries())
    }))
}

/// Appends zero kets so that `povm` has `outcomes` elements.
pub fn pad_povm(povm: &Rank1Povm, outcomes: usize) -> Result<Rank1Povm> {
    povm.pad(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{random_rank1_povm, random_state, Pvm};
    use std::f64::consts::PI;

    #[test]
    fn pvm_extension_is_itself() {
        let x = Rank1Povm::pauli_x();
        let ext = dilate(&x).unwrap();
        assert_eq!(ext.ancilla_dim(), 0);
        assert_eq!(ext.basis(), x.kets());
    }

    #[test]
    fn trine_extension() {
        let trine = Rank1Povm::trine();
        let ext = dilate(&trine).unwrap();
        assert_eq!(ext.outcomes(), 3);
        assert_eq!(ext.ancilla_dim(), 1);
        assert!(ext.gram_deviation() < 1e-10);
        assert!(ext.restriction_error(&trine) < 1e-10);
        for k in 0..3 {
            assert!((ext.ancilla_block(k)[0].norm_sqr() - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_extension_invariants() {
        let povm = random_rank1_povm(2, 4, 8).unwrap();
        let ext = dilate(&povm).unwrap();
        assert_eq!(ext.ancilla_dim(), 2);
        assert!(ext.gram_deviation() < 1e-10);
        assert!(ext.restriction_error(&povm) < 1e-10);
        assert_eq!(ext.restrict().unwrap().outcomes(), 4);
    }

    #[test]
    fn identity_rotation_is_noop() {
        let ext = dilate(&Rank1Povm::trine()).unwrap();
        assert_eq!(apply_ancilla_unitary(&ext, &AncillaUnitary::identity(1)).unwrap(), ext);
    }

    #[test]
    fn pi_phase_negates_ancilla() {
        let ext = dilate(&Rank1Povm::trine()).unwrap();
        let rotated = apply_ancilla_unitary(&ext, &AncillaUnitary::phase(PI)).unwrap();
        for k in 0..3 {
            assert_eq!(rotated.system_block(k), ext.system_block(k));
            assert!((rotated.ancilla_block(k)[0] + ext.ancilla_block(k)[0]).norm() < 1e-15);
        }
    }

    #[test]
    fn haar_rotation_preserves_orthonormality() {
        let povm = random_rank1_povm(2, 5, 21).unwrap();
        let ext = dilate(&povm).unwrap();
        let w = AncillaUnitary::new(crate::linalg::haar_random_unitary(3, 4)).unwrap();
        let rotated = apply_ancilla_unitary(&ext, &w).unwrap();
        assert!(rotated.gram_deviation() < 1e-10);
        assert!(rotated.restriction_error(&povm) < 1e-10);
    }

    #[test]
    fn apply_rejects_wrong_size() {
        let ext = dilate(&Rank1Povm::trine()).unwrap();
        assert!(apply_ancilla_unitary(&ext, &AncillaUnitary::identity(2)).is_err());
        let not_unitary = ComplexMatrix::diagonal(&[Complex64::new(2.0, 0.0)]);
        assert!(matches!(AncillaUnitary::new(not_unitary), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn ancilla_rotation_never_changes_probabilities() {
        let povm = random_rank1_povm(3, 5, 2).unwrap();
        let ext = dilate(&povm).unwrap();
        let w = AncillaUnitary::new(crate::linalg::haar_random_unitary(2, 77)).unwrap();
        let rotated = apply_ancilla_unitary(&ext, &w).unwrap();
        let psi = random_state(3, 9);
        let mut embedded = psi.ket().entries().to_vec();
        embedded.extend([Complex64::new(0.0, 0.0); 2]);
        for k in 0..5 {
            let p_ext = dot(rotated.basis()[k].entries(), &embedded).norm_sqr();
            let p_sys = dot(povm.kets()[k].entries(), psi.ket().entries()).norm_sqr();
            assert!((p_ext - p_sys).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_of_extension_with_itself_is_identity() {
        let ext = dilate(&random_rank1_povm(2, 4, 3).unwrap()).unwrap();
        let o = overlap_matrix(&ext, &ext, &AncillaUnitary::identity(2)).unwrap();
        assert!(o.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
    }

    #[test]
    fn overlap_of_pvms_is_gram_matrix() {
        let z = Pvm::pauli_z();
        let x = Pvm::pauli_x();
        let ez = dilate(z.as_povm()).unwrap();
        let ex = dilate(x.as_povm()).unwrap();
        let o = overlap_matrix(&ez, &ex, &AncillaUnitary::identity(0)).unwrap();
        for k in 0..2 {
            for l in 0..2 {
                let g = dot(z.as_povm().kets()[k].entries(), x.as_povm().kets()[l].entries());
                assert!((o[(k, l)] - g).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn trine_self_overlap_with_phase() {
        let ext = dilate(&Rank1Povm::trine()).unwrap();
        for &theta in &[0.3, 2.0 * PI / 3.0, 4.0] {
            let o = overlap_matrix(&ext, &ext, &AncillaUnitary::phase(theta)).unwrap();
            let expected = Complex64::new(2.0 / 3.0, 0.0) + Complex64::from_polar(1.0 / 3.0, theta);
            let off = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta)).norm() / 3.0;
            for k in 0..3 {
                assert!((o[(k, k)] - expected).norm() < 1e-12);
                for l in 0..3 {
                    if k != l {
                        assert!((o[(k, l)].norm() - off).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn overlap_size_mismatch() {
        let a = dilate(&Rank1Povm::trine()).unwrap();
        let b = dilate(&Rank1Povm::pauli_z()).unwrap();
        assert!(overlap_matrix(&a, &b, &AncillaUnitary::identity(1)).is_err());
    }

    #[test]
    fn padding_examples() {
        let trine = Rank1Povm::trine();
        assert_eq!(pad_povm(&trine, 3).unwrap(), trine);
        let padded = pad_povm(&trine, 4).unwrap();
        let ext = dilate(&padded).unwrap();
        assert_eq!(ext.ancilla_dim(), 2);
        assert!(ext.gram_deviation() < 1e-10);
        assert!(ext.restriction_error(&padded) < 1e-10);
        assert!(pad_povm(&trine, 2).is_err());
    }

    #[test]
    fn params_give_hermitian_and_unitary() {
        let params = [0.1, -0.4, 0.9, 0.3, -0.2, 0.5, 0.7, -1.1, 0.25];
        let h = hermitian_from_params(3, &params).unwrap();
        assert!(h.is_hermitian(0.0));
        let w = AncillaUnitary::from_params(3, &params).unwrap();
        assert!(w.matrix().unitarity_deviation() < 1e-10);
        assert!(hermitian_from_params(2, &params).is_err());
    }

    #[test]
    fn full_operator_is_block_diagonal() {
        let w = AncillaUnitary::phase(1.0);
        let full = w.full_operator(2);
        assert_eq!(full.rows(), 3);
        assert_eq!(full[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(full[(0, 2)], Complex64::new(0.0, 0.0));
        assert_eq!(full[(2, 2)], Complex64::from_polar(1.0, 1.0));
    }
}
