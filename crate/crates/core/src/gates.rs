//! Gates as full `2^N` matrices, plus a bit-indexed path that applies the
//! same circuits to a density operator without materializing them.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{re, tensor_product, ComplexMatrix};
use crate::state::{apply_local_left, apply_local_right, check_qubit, qubit_mask, DensityOperator};

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    ])
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// `I ⊗ … ⊗ a ⊗ … ⊗ I` with `a` on qubit `q`.
pub fn embed_single(n: usize, q: usize, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_qubit(n, q)?;
    let id = ComplexMatrix::identity(2);
    Ok((1..=n).fold(ComplexMatrix::identity(1), |acc, k| {
        tensor_product(&acc, if k == q { a } else { &id })
    }))
}

pub fn gate_hadamard_all(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::QubitIndex {
            index: 0,
            num_qubits: 0,
        });
    }
    Ok(crate::linalg::tensor_power(&hadamard(), n))
}

pub fn gate_hadamard_on(n: usize, q: usize) -> Result<ComplexMatrix> {
    embed_single(n, q, &hadamard())
}

pub fn gate_cnot(n: usize, control: usize, target: usize) -> Result<ComplexMatrix> {
    check_qubit(n, control)?;
    check_qubit(n, target)?;
    if control == target {
        return Err(Error::SameControlTarget(control));
    }
    let d = 1 << n;
    let (cm, tm) = (qubit_mask(n, control), qubit_mask(n, target));
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        let out = if k & cm != 0 { k ^ tm } else { k };
        u[(out, k)] = re(1.0);
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Hadamard(usize),
    Cnot { control: usize, target: usize },
}

/// A gate sequence in application order (first element acts first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        match gate {
            Gate::Hadamard(q) => check_qubit(self.num_qubits, q)?,
            Gate::Cnot { control, target } => {
                check_qubit(self.num_qubits, control)?;
                check_qubit(self.num_qubits, target)?;
                if control == target {
                    return Err(Error::SameControlTarget(control));
                }
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn hadamard_all(&mut self) -> &mut Self {
        for q in 1..=self.num_qubits {
            self.gates.push(Gate::Hadamard(q));
        }
        self
    }

    /// `Π_{i=2..N} CNOT(1 → i)`
    pub fn star_cnots(&mut self) -> &mut Self {
        for t in 2..=self.num_qubits {
            self.gates.push(Gate::Cnot {
                control: 1,
                target: t,
            });
        }
        self
    }

    /// Dense product of all gates.
    pub fn to_unitary(&self) -> ComplexMatrix {
        let n = self.num_qubits;
        self.gates
            .iter()
            .fold(ComplexMatrix::identity(1 << n), |acc, g| {
                let m = match *g {
                    Gate::Hadamard(q) => gate_hadamard_on(n, q),
                    Gate::Cnot { control, target } => gate_cnot(n, control, target),
                }
                .expect("validated on push");
                &m * &acc
            })
    }

    /// `U ρ U†` through local updates and index permutations.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let n = self.num_qubits;
        if rho.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: rho.num_qubits(),
            });
        }
        let h = hadamard();
        let mut m = rho.matrix().clone();
        for g in &self.gates {
            match *g {
                Gate::Hadamard(q) => {
                    apply_local_left(&mut m, n, q, &h);
                    apply_local_right(&mut m, n, q, &h);
                }
                Gate::Cnot { control, target } => {
                    let (cm, tm) = (qubit_mask(n, control), qubit_mask(n, target));
                    let perm = |k: usize| if k & cm != 0 { k ^ tm } else { k };
                    let d = m.rows();
                    let mut out = ComplexMatrix::zeros(d, d);
                    for i in 0..d {
                        let pi = perm(i);
                        for j in 0..d {
                            out[(pi, perm(j))] = m[(i, j)];
                        }
                    }
                    m = out;
                }
            }
        }
        DensityOperator::from_matrix_unchecked(n, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{random_density, rng};

    fn basis(n: usize, bits: usize) -> Vec<num_complex::Complex64> {
        let mut v = vec![re(0.0); 1 << n];
        v[bits] = re(1.0);
        v
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let u = gate_cnot(2, 1, 2).unwrap();
        assert_eq!(u.mul_vec(&basis(2, 0b10)).unwrap(), basis(2, 0b11));
        let u = gate_cnot(3, 1, 3).unwrap();
        assert_eq!(u.mul_vec(&basis(3, 0b101)).unwrap(), basis(3, 0b100));
        assert_eq!(u.mul_vec(&basis(3, 0b001)).unwrap(), basis(3, 0b001));
    }

    #[test]
    fn hadamard_is_involution() {
        let h = gate_hadamard_on(2, 1).unwrap();
        assert!((&h * &h).approx_eq(&ComplexMatrix::identity(4), 1e-15));
    }

    #[test]
    fn hadamard_maps_computational_to_x_basis() {
        let h = hadamard();
        let plus = h.mul_vec(&basis(1, 0)).unwrap();
        let minus = h.mul_vec(&basis(1, 1)).unwrap();
        assert!((plus[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((minus[1].re + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn index_errors() {
        assert!(matches!(
            gate_cnot(2, 1, 3),
            Err(Error::QubitIndex { index: 3, .. })
        ));
        assert!(matches!(
            gate_cnot(2, 2, 2),
            Err(Error::SameControlTarget(2))
        ));
        assert!(gate_hadamard_on(3, 0).is_err());
        assert!(gate_hadamard_on(3, 4).is_err());
        assert!(Circuit::new(2)
            .push(Gate::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
    }

    #[test]
    fn hadamard_all_is_product() {
        let dense = gate_hadamard_all(3).unwrap();
        let mut c = Circuit::new(3);
        c.hadamard_all();
        assert!(dense.approx_eq(&c.to_unitary(), 1e-15));
    }

    #[test]
    fn fast_path_agrees_with_dense() {
        let mut r = rng(21);
        for n in 2..=4 {
            let rho = random_density(&mut r, n);
            let mut c = Circuit::new(n);
            c.star_cnots()
                .push(Gate::Hadamard(1))
                .unwrap()
                .star_cnots()
                .hadamard_all()
                .push(Gate::Cnot {
                    control: n,
                    target: 1,
                })
                .unwrap();
            let fast = c.apply(&rho).unwrap();
            let dense = crate::state::apply_unitary(&rho, &c.to_unitary()).unwrap();
            assert!(fast.matrix().approx_eq(dense.matrix(), 1e-12), "n = {n}");
        }
    }
}
