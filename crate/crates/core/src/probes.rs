//! The four probe-state families.
//!
//! Each probe is available three ways, so every representation can check the
//! others:
//!
//! * [`prepare_probe`] runs the preparation circuit on `ρ^{⊗N}`;
//! * [`closed_form_density`] assembles the block matrices directly;
//! * [`closed_form_eigensystem`] lists the labeled eigenvalue families and
//!   generates their eigenvectors on demand.
//!
//! Every state starts from `N` copies of `ρ = λ0|0⟩⟨0| + λ1|1⟩⟨1|` with
//! `λ0 = (1+p)/2`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{hadamard, pauli_x, Circuit, Gate};
use crate::linalg::{re, tensor_power, tensor_product, ComplexMatrix};
use crate::numeric::binomial;
use crate::state::DensityOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyId {
    /// Independent qubits, Hadamard on each.
    S,
    /// Classically correlated (zero discord).
    Cl,
    /// GHZ-diagonal, GHZ circuit applied to `ρ^{⊗N}`.
    Q1,
    /// GHZ-diagonal with populations pre-shifted by a C-Not layer.
    Q2,
}

impl StrategyId {
    pub const ALL: [StrategyId; 4] = [
        StrategyId::S,
        StrategyId::Cl,
        StrategyId::Q1,
        StrategyId::Q2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyId::S => "S",
            StrategyId::Cl => "Cl",
            StrategyId::Q1 => "Q1",
            StrategyId::Q2 => "Q2",
        }
    }

    pub fn min_qubits(self) -> usize {
        match self {
            StrategyId::S => 1,
            _ => 2,
        }
    }

    pub fn check_qubits(self, n: usize) -> Result<()> {
        if n < self.min_qubits() {
            return Err(Error::TooFewQubits {
                strategy: self,
                n,
                min: self.min_qubits(),
            });
        }
        Ok(())
    }

    /// The preparation circuit, in application order.
    pub fn circuit(self, n: usize) -> Result<Circuit> {
        self.check_qubits(n)?;
        let mut c = Circuit::new(n);
        match self {
            StrategyId::S => {
                c.hadamard_all();
            }
            StrategyId::Cl => {
                c.star_cnots().hadamard_all();
            }
            StrategyId::Q1 => {
                c.push(Gate::Hadamard(1))?.star_cnots();
            }
            StrategyId::Q2 => {
                c.star_cnots().push(Gate::Hadamard(1))?.star_cnots();
            }
        }
        Ok(c)
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "S" => Ok(StrategyId::S),
            "CL" => Ok(StrategyId::Cl),
            "Q1" => Ok(StrategyId::Q1),
            "Q2" => Ok(StrategyId::Q2),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixednessParams {
    p: f64,
    lambda0: f64,
    lambda1: f64,
}

impl MixednessParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidMixedness(p));
        }
        let lambda0 = (1.0 + p) / 2.0;
        Ok(Self {
            p,
            lambda0,
            lambda1: 1.0 - lambda0,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    /// `λ0^a λ1^b`
    #[inline]
    pub fn weight(&self, zeros: usize, ones: usize) -> f64 {
        self.lambda0.powi(zeros as i32) * self.lambda1.powi(ones as i32)
    }

    /// Entropy of the single-qubit state, in bits.
    pub fn qubit_entropy(&self) -> f64 {
        crate::state::neg_xlog2x(self.lambda0) + crate::state::neg_xlog2x(self.lambda1)
    }

    pub fn qubit_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::real_diagonal(&[self.lambda0, self.lambda1])
    }
}

pub fn initial_qubit(p: f64) -> Result<DensityOperator> {
    let mp = MixednessParams::new(p)?;
    DensityOperator::from_matrix_unchecked(1, mp.qubit_matrix())
}

/// `ρ^{⊗N}`
pub fn initial_register(n: usize, p: f64) -> Result<DensityOperator> {
    let mp = MixednessParams::new(p)?;
    DensityOperator::from_matrix_unchecked(n, tensor_power(&mp.qubit_matrix(), n))
}

/// Runs the strategy's preparation circuit on `ρ^{⊗N}`.
pub fn prepare_probe(strategy: StrategyId, n: usize, p: f64) -> Result<DensityOperator> {
    let circuit = strategy.circuit(n)?;
    circuit.apply(&initial_register(n, p)?)
}

/// Same as [`prepare_probe`] but multiplies out the dense circuit unitary.
pub fn prepare_probe_dense(strategy: StrategyId, n: usize, p: f64) -> Result<DensityOperator> {
    let circuit = strategy.circuit(n)?;
    crate::state::apply_unitary(&initial_register(n, p)?, &circuit.to_unitary())
}

fn block(
    tl: &ComplexMatrix,
    tr: &ComplexMatrix,
    bl: &ComplexMatrix,
    br: &ComplexMatrix,
) -> ComplexMatrix {
    let h = tl.rows();
    let mut m = ComplexMatrix::zeros(2 * h, 2 * h);
    for i in 0..h {
        for j in 0..h {
            m[(i, j)] = tl[(i, j)];
            m[(i, j + h)] = tr[(i, j)];
            m[(i + h, j)] = bl[(i, j)];
            m[(i + h, j + h)] = br[(i, j)];
        }
    }
    m
}

/// Assembles the probe's published block-matrix form directly.
pub fn closed_form_density(strategy: StrategyId, n: usize, p: f64) -> Result<DensityOperator> {
    strategy.check_qubits(n)?;
    let mp = MixednessParams::new(p)?;
    let (l0, l1) = (mp.lambda0(), mp.lambda1());
    let rho = mp.qubit_matrix();
    let h = hadamard();
    let x = pauli_x();
    let hrh = &(&h * &rho) * &h;

    let m = match strategy {
        StrategyId::S => tensor_power(&hrh, n),
        StrategyId::Cl => {
            let s = FRAC_1_SQRT_2;
            let plus = ComplexMatrix::outer(&[re(s), re(s)]);
            let minus = ComplexMatrix::outer(&[re(s), re(-s)]);
            let hxrxh = &(&(&h * &x) * &(&rho * &x)) * &h;
            let a = tensor_product(&plus, &tensor_power(&hrh, n - 1)).scale_real(l0);
            let b = tensor_product(&minus, &tensor_power(&hxrxh, n - 1)).scale_real(l1);
            &a + &b
        }
        StrategyId::Q1 | StrategyId::Q2 => {
            let k = n - 1;
            let a = tensor_power(&rho, k);
            let b = tensor_power(&(&rho * &x), k);
            let b_adj = tensor_power(&(&x * &rho), k);
            let d = tensor_power(&(&(&x * &rho) * &x), k);
            if strategy == StrategyId::Q1 {
                block(&a, &b.scale_real(p), &b_adj.scale_real(p), &d).scale_real(0.5)
            } else {
                let first = block(&a, &b, &b_adj, &d).scale_real(l0 / 2.0);
                let second = block(&d, &b_adj.scale_real(-1.0), &b.scale_real(-1.0), &a)
                    .scale_real(l1 / 2.0);
                &first + &second
            }
        }
    };
    DensityOperator::from_matrix_unchecked(n, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VectorFamily {
    /// x-basis product states with `m` qubits in `|−⟩` among all `n`.
    XProduct,
    /// x-basis product states, qubit 1 fixed to `|+⟩` (false) or `|−⟩`
    /// (true), `m` of the remaining `n − 1` qubits in `|−⟩`.
    XProductLeading(bool),
    /// `(|0,χ⟩ ± |1,χ̄⟩)/√2` with `χ` of Hamming weight `m` on `n − 1` bits.
    Ghz { minus: bool },
}

/// One degenerate eigenvalue family.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub m: usize,
    pub branch: Branch,
    pub eigenvalue: f64,
    pub multiplicity: f64,
    num_qubits: usize,
    family: VectorFamily,
}

/// Integers below `2^width` with exactly `weight` set bits, increasing.
pub fn fixed_weight_bitstrings(width: usize, weight: usize) -> impl Iterator<Item = usize> {
    let limit = 1usize << width;
    let first = if weight > width {
        limit
    } else {
        (1usize << weight) - 1
    };
    std::iter::successors(Some(first), move |&v| {
        if v == 0 {
            return None;
        }
        // Gosper's hack
        let c = v & v.wrapping_neg();
        let r = v + c;
        Some((((r ^ v) >> 2) / c) | r)
    })
    .take_while(move |&v| v < limit)
}

fn x_product_vector(n: usize, minus_bits: usize) -> Vec<Complex64> {
    let d = 1usize << n;
    let amp = (d as f64).sqrt().recip();
    (0..d)
        .map(|k| {
            if (k & minus_bits).count_ones().is_multiple_of(2) {
                re(amp)
            } else {
                re(-amp)
            }
        })
        .collect()
}

fn ghz_vector(n: usize, chi: usize, minus: bool) -> Vec<Complex64> {
    let d = 1usize << n;
    let rest = (1usize << (n - 1)) - 1;
    let mut v = vec![re(0.0); d];
    v[chi] = re(FRAC_1_SQRT_2);
    let flipped = (1usize << (n - 1)) | (!chi & rest);
    v[flipped] = re(if minus { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 });
    v
}

impl SpectrumEntry {
    /// Generates every eigenvector of this family, χ in lexicographic order.
    pub fn eigenvectors(&self) -> Box<dyn Iterator<Item = Vec<Complex64>> + '_> {
        let n = self.num_qubits;
        match self.family {
            VectorFamily::XProduct => {
                Box::new(fixed_weight_bitstrings(n, self.m).map(move |s| x_product_vector(n, s)))
            }
            VectorFamily::XProductLeading(lead_minus) => {
                let lead = if lead_minus { 1usize << (n - 1) } else { 0 };
                Box::new(
                    fixed_weight_bitstrings(n - 1, self.m)
                        .map(move |s| x_product_vector(n, lead | s)),
                )
            }
            VectorFamily::Ghz { minus } => Box::new(
                fixed_weight_bitstrings(n - 1, self.m).map(move |chi| ghz_vector(n, chi, minus)),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSpectrum {
    pub strategy: StrategyId,
    pub num_qubits: usize,
    pub entries: Vec<SpectrumEntry>,
}

impl LabeledSpectrum {
    /// `Σ eigenvalue × multiplicity`
    pub fn total_weight(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.eigenvalue * e.multiplicity)
            .sum()
    }

    pub fn total_multiplicity(&self) -> f64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// All eigenvalues with multiplicity, sorted descending.
    pub fn expanded_eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.eigenvalue, e.multiplicity as usize))
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// Closed-form eigenvalue families with binomial multiplicities.
///
/// * `S`: `m` counts `|−⟩` factors among all `N` qubits, multiplicity `C(N, m)`.
/// * `Cl`, `Q1`, `Q2`: `m` is the Hamming weight of `χ` on qubits `2..N`,
///   multiplicity `C(N−1, m)`, one `Plus` and one `Minus` family per `m`.
pub fn closed_form_eigensystem(strategy: StrategyId, n: usize, p: f64) -> Result<LabeledSpectrum> {
    strategy.check_qubits(n)?;
    let mp = MixednessParams::new(p)?;
    let entry = |m, branch, eigenvalue, multiplicity, family| SpectrumEntry {
        m,
        branch,
        eigenvalue,
        multiplicity,
        num_qubits: n,
        family,
    };
    let entries = match strategy {
        StrategyId::S => (0..=n)
            .map(|m| {
                entry(
                    m,
                    Branch::None,
                    mp.weight(n - m, m),
                    binomial(n, m),
                    VectorFamily::XProduct,
                )
            })
            .collect(),
        _ => (0..n)
            .flat_map(|m| {
                let mult = binomial(n - 1, m);
                let (plus, minus, plus_family, minus_family) = match strategy {
                    StrategyId::Cl => (
                        mp.weight(n - m, m),
                        mp.weight(m, n - m),
                        VectorFamily::XProductLeading(false),
                        VectorFamily::XProductLeading(true),
                    ),
                    StrategyId::Q1 => (
                        mp.weight(n - m, m),
                        mp.weight(n - m - 1, m + 1),
                        VectorFamily::Ghz { minus: false },
                        VectorFamily::Ghz { minus: true },
                    ),
                    _ => (
                        mp.weight(n - m, m),
                        mp.weight(m, n - m),
                        VectorFamily::Ghz { minus: false },
                        VectorFamily::Ghz { minus: true },
                    ),
                };
                [
                    entry(m, Branch::Plus, plus, mult, plus_family),
                    entry(m, Branch::Minus, minus, mult, minus_family),
                ]
            })
            .collect(),
    };
    Ok(LabeledSpectrum {
        strategy,
        num_qubits: n,
        entries,
    })
}

/// Sorted spectrum of `ρ^{⊗N}`, shared by every probe.
pub fn register_spectrum(n: usize, p: f64) -> Result<Vec<f64>> {
    let mp = MixednessParams::new(p)?;
    let mut v: Vec<f64> = (0..=n)
        .flat_map(|m| std::iter::repeat_n(mp.weight(n - m, m), binomial(n, m) as usize))
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v)
}
