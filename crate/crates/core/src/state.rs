//! Density operators and the state-level primitives built on them.
//!
//! Qubits are numbered from 1. Qubit 1 is the leftmost tensor factor, i.e.
//! the most significant bit of a basis index.

use num_complex::Complex64;

use crate::eigen::{hermitian_eigenvalues, EigenSystem};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DEFAULT_TOLERANCE};

/// Eigenvalues in `[-CLIP_WINDOW, 0)` are treated as zero in entropies.
pub const CLIP_WINDOW: f64 = 1e-10;

/// Unitarity tolerance for [`apply_unitary`].
pub const UNITARY_TOLERANCE: f64 = 1e-8;

/// Bit mask of qubit `q` (1-based) in an `n`-qubit basis index.
#[inline]
pub(crate) fn qubit_mask(n: usize, q: usize) -> usize {
    1 << (n - q)
}

pub(crate) fn check_qubit(n: usize, q: usize) -> Result<()> {
    if q == 0 || q > n {
        return Err(Error::QubitIndex {
            index: q,
            num_qubits: n,
        });
    }
    Ok(())
}

fn dim_of(num_qubits: usize) -> Result<usize> {
    if num_qubits >= usize::BITS as usize / 2 {
        return Err(Error::InvalidArgument(format!(
            "{num_qubits} qubits is not representable"
        )));
    }
    Ok(1usize << num_qubits)
}

#[derive(Debug, Clone)]
pub struct DensityOperator {
    num_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity (all at 1e-10).
    pub fn new(num_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(num_qubits, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Checks only the shape. For states produced by trusted constructions.
    pub fn from_matrix_unchecked(num_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        let d = dim_of(num_qubits)?;
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: matrix.rows().max(matrix.cols()),
            });
        }
        Ok(Self { num_qubits, matrix })
    }

    pub fn pure(num_qubits: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let nrm = crate::linalg::norm(amplitudes);
        if (nrm - 1.0).abs() > DEFAULT_TOLERANCE {
            return Err(Error::InvalidDensity(format!("state vector norm {nrm}")));
        }
        Self::new(num_qubits, ComplexMatrix::outer(amplitudes))
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        let d = dim_of(num_qubits)?;
        Ok(Self {
            num_qubits,
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.matrix.hermiticity_defect();
        if herm > DEFAULT_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (defect {herm:e})"
            )));
        }
        let tr = self.matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DEFAULT_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = self.eigenvalues()?.last().copied().unwrap_or(0.0);
        if min < -DEFAULT_TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn eigensystem(&self) -> Result<EigenSystem> {
        crate::eigen::hermitian_eigensystem(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            num_qubits: self.num_qubits + other.num_qubits,
            matrix: crate::linalg::tensor_product(&self.matrix, &other.matrix),
        }
    }
}

/// The phase generator `G = Σ_i |1_i⟩⟨1_i|`, stored as its diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingGenerator {
    num_qubits: usize,
    diagonal: Vec<u32>,
}

impl HammingGenerator {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument(
                "generator needs at least one qubit".into(),
            ));
        }
        let d = dim_of(num_qubits)?;
        Ok(Self {
            num_qubits,
            diagonal: (0..d).map(|k| k.count_ones()).collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn diagonal(&self) -> &[u32] {
        &self.diagonal
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let d: Vec<f64> = self.diagonal.iter().map(|&w| w as f64).collect();
        ComplexMatrix::real_diagonal(&d)
    }
}

/// A locally orthonormal basis `{U_1 ⊗ … ⊗ U_N |k⟩}`.
#[derive(Debug, Clone)]
pub struct ProductBasis {
    local_unitaries: Vec<ComplexMatrix>,
}

impl ProductBasis {
    pub fn new(local_unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        for u in &local_unitaries {
            if u.rows() != 2 || u.cols() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    actual: u.rows().max(u.cols()),
                });
            }
            let deviation = u.unitarity_defect();
            if deviation > DEFAULT_TOLERANCE {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { local_unitaries })
    }

    pub fn computational(num_qubits: usize) -> Self {
        Self {
            local_unitaries: vec![ComplexMatrix::identity(2); num_qubits],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.local_unitaries.len()
    }

    pub fn local_unitaries(&self) -> &[ComplexMatrix] {
        &self.local_unitaries
    }

    /// The full `2^N` basis-change matrix; column k is basis vector k.
    pub fn to_unitary(&self) -> ComplexMatrix {
        self.local_unitaries
            .iter()
            .fold(ComplexMatrix::identity(1), |acc, u| {
                crate::linalg::tensor_product(&acc, u)
            })
    }
}

/// `M ← A_q M` where `A_q` acts as the 2×2 matrix `a` on qubit `q`.
pub(crate) fn apply_local_left(m: &mut ComplexMatrix, n: usize, q: usize, a: &ComplexMatrix) {
    let mask = qubit_mask(n, q);
    let d = m.rows();
    let cols = m.cols();
    let (a00, a01, a10, a11) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let e = m.entries_mut();
    for i in (0..d).filter(|i| i & mask == 0) {
        let k = i | mask;
        for j in 0..cols {
            let x = e[i * cols + j];
            let y = e[k * cols + j];
            e[i * cols + j] = a00 * x + a01 * y;
            e[k * cols + j] = a10 * x + a11 * y;
        }
    }
}

/// `M ← M B_q` where `B_q` acts as the 2×2 matrix `b` on qubit `q`.
pub(crate) fn apply_local_right(m: &mut ComplexMatrix, n: usize, q: usize, b: &ComplexMatrix) {
    let mask = qubit_mask(n, q);
    let rows = m.rows();
    let d = m.cols();
    let (b00, b01, b10, b11) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
    let e = m.entries_mut();
    for i in 0..rows {
        let row = &mut e[i * d..(i + 1) * d];
        for j in (0..d).filter(|j| j & mask == 0) {
            let k = j | mask;
            let x = row[j];
            let y = row[k];
            row[j] = x * b00 + y * b10;
            row[k] = x * b01 + y * b11;
        }
    }
}

/// `U ρ U†`.
pub fn apply_unitary(rho: &DensityOperator, u: &ComplexMatrix) -> Result<DensityOperator> {
    if u.rows() != rho.dim() || u.cols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: u.rows().max(u.cols()),
        });
    }
    let deviation = u.unitarity_defect();
    if deviation > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary { deviation });
    }
    let out = &(u * rho.matrix()) * &u.adjoint();
    DensityOperator::from_matrix_unchecked(rho.num_qubits(), out)
}

/// Transposes the tensor indices of the qubits in `subset` (1-based).
pub fn partial_transpose(rho: &DensityOperator, subset: &[usize]) -> Result<ComplexMatrix> {
    let n = rho.num_qubits();
    let mut mask = 0usize;
    for &q in subset {
        check_qubit(n, q)?;
        mask |= qubit_mask(n, q);
    }
    Ok(partial_transpose_mask(rho.matrix(), mask))
}

pub(crate) fn partial_transpose_mask(m: &ComplexMatrix, mask: usize) -> ComplexMatrix {
    let d = m.rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let ii = (i & !mask) | (j & mask);
            let jj = (j & !mask) | (i & mask);
            out[(ii, jj)] = m[(i, j)];
        }
    }
    out
}

/// `σ = U† ρ U` for a product basis `U`, via local updates.
fn rotate_into_basis(rho: &DensityOperator, basis: &ProductBasis) -> Result<ComplexMatrix> {
    let n = rho.num_qubits();
    if basis.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: basis.num_qubits(),
        });
    }
    let mut sigma = rho.matrix().clone();
    for (idx, u) in basis.local_unitaries().iter().enumerate() {
        apply_local_left(&mut sigma, n, idx + 1, &u.adjoint());
        apply_local_right(&mut sigma, n, idx + 1, u);
    }
    Ok(sigma)
}

/// Outcome probabilities `⟨k|ρ|k⟩` of a measurement in `basis`.
pub fn basis_populations(rho: &DensityOperator, basis: &ProductBasis) -> Result<Vec<f64>> {
    Ok(rotate_into_basis(rho, basis)?
        .diag()
        .iter()
        .map(|z| z.re)
        .collect())
}

/// `Σ_k |k⟩⟨k| ρ |k⟩⟨k|` in the product basis.
pub fn dephase(rho: &DensityOperator, basis: &ProductBasis) -> Result<DensityOperator> {
    let n = rho.num_qubits();
    let pops = basis_populations(rho, basis)?;
    let mut chi = ComplexMatrix::real_diagonal(&pops);
    for (idx, u) in basis.local_unitaries().iter().enumerate() {
        apply_local_left(&mut chi, n, idx + 1, u);
        apply_local_right(&mut chi, n, idx + 1, &u.adjoint());
    }
    DensityOperator::from_matrix_unchecked(n, chi)
}

/// `-x log2 x` with `h(0) = 0`.
pub fn binary_h(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "h(x) needs x in [0, 1], got {x}"
        )));
    }
    Ok(neg_xlog2x(x))
}

#[inline]
pub(crate) fn neg_xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon/von Neumann entropy (bits) of a spectrum, with eigenvalue clipping.
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in values {
        if v < -CLIP_WINDOW {
            return Err(Error::NegativeEigenvalue { value: v });
        }
        s += neg_xlog2x(v.max(0.0));
    }
    Ok(s.max(0.0))
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    entropy_of_spectrum(&rho.eigenvalues()?)
}

/// `S(χ_B)` without forming `χ_B`: the entropy of the outcome distribution.
pub fn dephased_entropy(rho: &DensityOperator, basis: &ProductBasis) -> Result<f64> {
    entropy_of_spectrum(&basis_populations(rho, basis)?)
}

/// Relative entropy `S(ρ‖χ_B) = -S(ρ) - tr(ρ log2 χ_B)`, evaluated in the
/// dephasing basis where `χ_B` is diagonal. Outcomes with zero weight in
/// `χ_B` also carry zero weight in `ρ`'s diagonal there.
pub fn relative_entropy_to_dephased(rho: &DensityOperator, basis: &ProductBasis) -> Result<f64> {
    let pops = basis_populations(rho, basis)?;
    // tr(ρ log χ) = Σ_k ⟨k|ρ|k⟩ log χ_k and ⟨k|ρ|k⟩ = χ_k
    let cross: f64 = pops
        .iter()
        .map(|&p| if p > 0.0 { p * p.log2() } else { 0.0 })
        .sum();
    Ok(-von_neumann_entropy(rho)? - cross)
}
