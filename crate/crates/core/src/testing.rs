//! Random fixtures shared by unit tests, integration tests and benches.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::linalg::ComplexMatrix;
use crate::sampling::haar_unitary;
use crate::state::{DensityOperator, ProductBasis};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries = (0..rows * cols)
        .map(|_| {
            let a: f64 = StandardNormal.sample(rng);
            let b: f64 = StandardNormal.sample(rng);
            Complex64::new(a, b)
        })
        .collect();
    ComplexMatrix::from_row_major(rows, cols, entries).expect("shape")
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random full-rank mixed state `G G† / tr(G G†)`.
pub fn random_density(rng: &mut ChaCha8Rng, num_qubits: usize) -> DensityOperator {
    let d = 1 << num_qubits;
    let g = gaussian_matrix(rng, d, d);
    let mut m = &g * &g.adjoint();
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    // enforce exact Hermiticity after rounding
    let m = (&m + &m.adjoint()).scale_real(0.5);
    DensityOperator::new(num_qubits, m).expect("valid random state")
}

/// Random single-qubit mixed state with eigenvalues `(1±r)/2`.
pub fn random_qubit_state(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let u = haar_unitary(rng, 2);
    let l0 = Uniform::new(0.5, 1.0).expect("range").sample(rng);
    let d = ComplexMatrix::real_diagonal(&[l0, 1.0 - l0]);
    &(&u * &d) * &u.adjoint()
}

pub fn random_product_basis(rng: &mut ChaCha8Rng, num_qubits: usize) -> ProductBasis {
    ProductBasis::new((0..num_qubits).map(|_| haar_unitary(rng, 2)).collect()).expect("unitary")
}
