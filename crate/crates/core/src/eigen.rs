//! Hermitian eigendecomposition.
//!
//! The heavy lifting is done by nalgebra's symmetric/Hermitian QR solver; this
//! module converts to and from [`ComplexMatrix`], sorts the spectrum in
//! descending order and checks the input is Hermitian.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Hermiticity tolerance accepted by [`hermitian_eigensystem`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[j]` pairs with `eigenvalues[j]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ_j η_j |Ψ_j⟩⟨Ψ_j|`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (&eta, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..d {
                let vi = v[i] * eta;
                for j in 0..d {
                    m[(i, j)] += vi * v[j].conj();
                }
            }
        }
        m
    }
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

/// Eigenvalues of a Hermitian matrix, sorted descending, without vectors.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let mut values: Vec<f64> = to_nalgebra(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<EigenSystem> {
    check_hermitian(m)?;
    let eig = nalgebra::SymmetricEigen::new(to_nalgebra(m));
    let d = m.rows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let eigenvectors = order
        .iter()
        .map(|&j| {
            let col = eig.eigenvectors.column(j);
            let nrm = col.norm();
            col.iter().map(|z| z / nrm).collect()
        })
        .collect();
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            actual: m.cols(),
        });
    }
    let deviation = m.hermiticity_defect();
    if deviation > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}
