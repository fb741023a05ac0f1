use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on Hermiticity and unit trace at construction.
pub const STATE_TOLERANCE: f64 = 1e-12;
/// Most negative eigenvalue accepted as round-off.
pub const EIGEN_TOLERANCE: f64 = 1e-9;

/// Hermitian, unit-trace, positive semi-definite state over a discrete basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::domain("density matrix must be square and non-empty"));
        }
        let state = DensityMatrix { matrix };
        let herm = state.hermiticity_residual();
        if herm > STATE_TOLERANCE {
            return Err(Error::domain(format!("density matrix not Hermitian: residual {herm:e}")));
        }
        let trace = state.trace();
        if (trace.re - 1.0).abs() > STATE_TOLERANCE || trace.im.abs() > STATE_TOLERANCE {
            return Err(Error::domain(format!("density matrix trace {trace} != 1")));
        }
        let min = state.min_eigenvalue();
        if min < -EIGEN_TOLERANCE {
            return Err(Error::domain(format!(
                "density matrix not positive: eigenvalue {min:e}"
            )));
        }
        Ok(state)
    }

    /// Wrap an evolved matrix without validation.
    pub(crate) fn from_evolved(matrix: DMatrix<Complex64>) -> Self {
        DensityMatrix { matrix }
    }

    /// |j><j|
    pub fn pure_basis(dim: usize, j: usize) -> Result<Self> {
        if j >= dim {
            return Err(Error::domain(format!("basis index {j} out of range for dimension {dim}")));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(j, j)] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { matrix: m })
    }

    /// I / N
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        let value = Complex64::new(1.0 / dim as f64, 0.0);
        Ok(DensityMatrix {
            matrix: DMatrix::from_diagonal_element(dim, dim, value),
        })
    }

    /// |psi><psi| / <psi|psi>
    pub fn from_state_vector(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::domain("state vector must have finite non-zero norm"));
        }
        let n = psi.len();
        let m = DMatrix::from_fn(n, n, |r, c| psi[r] * psi[c].conj() / norm2);
        Ok(DensityMatrix { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// max |rho - rho^dagger|
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for c in 0..n {
            for r in c..n {
                worst = worst.max((self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|c| c.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_produce_valid_states() {
        let p = DensityMatrix::pure_basis(4, 2).unwrap();
        assert_eq!(p.populations(), vec![0.0, 0.0, 1.0, 0.0]);
        assert!(DensityMatrix::new(p.matrix().clone()).is_ok());
        let mixed = DensityMatrix::maximally_mixed(5).unwrap();
        assert!((mixed.trace().re - 1.0).abs() < 1e-15);
        assert!((mixed.min_eigenvalue() - 0.2).abs() < 1e-15);
        let psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let s = DensityMatrix::new(DensityMatrix::from_state_vector(&psi).unwrap().into_matrix()).unwrap();
        assert!((s.matrix()[(0, 1)] - Complex64::new(0.0, -0.4)).norm() < 1e-15);
        assert!(DensityMatrix::pure_basis(3, 3).is_err());
    }

    #[test]
    fn invalid_matrices_rejected() {
        let mut m = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 0)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(m.clone()).is_ok());
        m[(0, 0)] = Complex64::new(0.6, 0.0);
        assert!(DensityMatrix::new(m).is_err());
        let neg = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.5, 0.0),
            Complex64::new(-0.5, 0.0),
        ]));
        assert!(DensityMatrix::new(neg).is_err());
    }
}
