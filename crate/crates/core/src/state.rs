//! Validated two-qubit density matrices.

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, SortOrder, SpectralDecomposition, C64, ONE, ZERO};

pub const DEFAULT_TRACE_TOL: f64 = 1e-8;
pub const DEFAULT_PSD_TOL: f64 = 1e-8;

/// A 4×4 Hermitian, unit-trace, positive-semidefinite operator.
///
/// `trace_tol` and `psd_tol` record the tolerances the state was accepted
/// under; integrator output carries a looser positivity floor than states
/// built directly.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    trace_tol: f64,
    psd_tol: f64,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, DEFAULT_TRACE_TOL, DEFAULT_PSD_TOL)
    }

    pub fn with_tolerances(matrix: ComplexMatrix, trace_tol: f64, psd_tol: f64) -> Result<Self> {
        if matrix.dim() != 4 {
            return Err(Error::Dimension(matrix.dim()));
        }
        let asymmetry = matrix.hermiticity_defect();
        if asymmetry > linalg::HERMITIAN_TOL {
            return Err(Error::NotHermitian { asymmetry });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > trace_tol {
            return Err(Error::Trace {
                trace,
                tol: trace_tol,
            });
        }
        let eig = linalg::hermitian_eigen(&matrix, SortOrder::Ascending)?;
        if eig.values[0] < -psd_tol {
            return Err(Error::NotPositive {
                min_eigenvalue: eig.values[0],
            });
        }
        Ok(DensityMatrix {
            matrix,
            trace_tol,
            psd_tol,
        })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        if psi.len() != 4 {
            return Err(Error::Dimension(psi.len()));
        }
        let norm = linalg::vector_norm(psi);
        if norm == 0.0 {
            return Err(Error::Validation("zero state vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&v)?)
    }

    /// Computational basis state `|k⟩`, `k` in `0..4` (`|00⟩, |01⟩, |10⟩, |11⟩`).
    pub fn basis(k: usize) -> Self {
        let mut v = vec![ZERO; 4];
        v[k] = ONE;
        Self::pure(&v).expect("basis state")
    }

    pub fn maximally_mixed() -> Self {
        Self::new(ComplexMatrix::identity(4).scale_real(0.25)).expect("1/4")
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell_phi_plus() -> Self {
        Self::pure(&[ONE, ZERO, ZERO, ONE]).expect("Bell state")
    }

    /// `ρ_A ⊗ ρ_B` from two single-qubit states.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        if a.dim() != 2 || b.dim() != 2 {
            return Err(Error::Validation("product state needs two 2x2 factors".into()));
        }
        Self::new(a.kron(b))
    }

    /// `w·|Φ⁺⟩⟨Φ⁺| + (1 − w)·𝟙/4`.
    pub fn werner(w: f64) -> Result<Self> {
        let bell = Self::bell_phi_plus();
        let mixed = ComplexMatrix::identity(4).scale_real(0.25 * (1.0 - w));
        Self::new(&bell.matrix.scale_real(w) + &mixed)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace_tol(&self) -> f64 {
        self.trace_tol
    }

    pub fn psd_tol(&self) -> f64 {
        self.psd_tol
    }

    pub fn spectrum(&self, order: SortOrder) -> SpectralDecomposition {
        linalg::hermitian_eigen(&self.matrix, order).expect("validated Hermitian")
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// `⟨O⟩ = Tr[ρ O]`, real part.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        self.matrix.trace_product(op).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_states() {
        let m = ComplexMatrix::from_diag(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::Trace { .. })));
        let m = ComplexMatrix::from_diag(&[1.2, -0.2, 0.0, 0.0]).unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositive { .. })));
        let m = ComplexMatrix::from_diag(&[0.5, 0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::Dimension(2))));
    }

    #[test]
    fn looser_positivity_floor_is_recorded() {
        let m = ComplexMatrix::from_diag(&[1.0 + 5e-7, -5e-7, 0.0, 0.0]).unwrap();
        assert!(DensityMatrix::new(m.clone()).is_err());
        let rho = DensityMatrix::with_tolerances(m, 1e-8, 1e-6).unwrap();
        assert_eq!(rho.psd_tol(), 1e-6);
    }

    #[test]
    fn werner_is_valid_across_range() {
        for k in 0..=10 {
            let w = k as f64 / 10.0;
            let rho = DensityMatrix::werner(w).unwrap();
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        }
    }
}
