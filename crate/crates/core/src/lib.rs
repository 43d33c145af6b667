//! Mixed-state phase estimation with partially polarized qubits.
//!
//! `N` qubits, each in `ρ = diag((1+p)/2, (1−p)/2)`, are turned into one of
//! four probe states by a short circuit of Hadamard and C-Not gates. The
//! crate computes how well each probe estimates a phase imprinted by
//! `G = Σ_i |1_i⟩⟨1_i|` (quantum Fisher information, both from the spectrum
//! and in closed form) and which correlations the probe carries
//! (partial-transpose entanglement, relative-entropy discord, classical
//! correlations).
//!
//! Closed forms are always paired with a dense density-matrix oracle; see
//! [`verify`] for the full cross-check suite.

pub mod correlations;
pub mod eigen;
pub mod error;
pub mod fisher;
pub mod gates;
pub mod linalg;
pub mod numeric;
pub mod probes;
pub mod sampling;
pub mod state;
#[doc(hidden)]
pub mod testing;
pub mod verify;

pub use correlations::{
    classical_correlations, closest_classical_state, conjectured_discord, correlation_report,
    discord_mc, entanglement_boundary, min_pt_eigenvalue_brute, min_pt_eigenvalue_closed,
    CorrelationReport, McDiscordRun, McDiscordSample,
};
pub use eigen::{hermitian_eigensystem, EigenSystem};
pub use error::{Error, Result};
pub use fisher::{
    classical_q1_crossing, phase_uncertainty, q1_leading_term, q2_leading_term, qfi_cl_approx,
    qfi_closed, qfi_spectral, quantum_advantage, QfiResult,
};
pub use gates::{gate_cnot, gate_hadamard_all, gate_hadamard_on};
pub use linalg::{tensor_product, ComplexMatrix};
pub use num_complex::Complex64;
pub use probes::{
    closed_form_density, closed_form_eigensystem, initial_qubit, prepare_probe, Branch,
    LabeledSpectrum, MixednessParams, SpectrumEntry, StrategyId,
};
pub use state::{
    apply_unitary, binary_h, dephase, partial_transpose, von_neumann_entropy, DensityOperator,
    HammingGenerator, ProductBasis,
};
