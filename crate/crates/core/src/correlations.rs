//! Entanglement boundaries, relative-entropy discord and classical
//! correlations of the correlated probes.
//!
//! All information quantities are in bits.

use rayon::prelude::*;

use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};
use crate::numeric::{binomial, bisect};
use crate::probes::{prepare_probe, MixednessParams, StrategyId};
use crate::sampling::{haar_unitary, keyed_rng};
use crate::state::{
    dephase, dephased_entropy, neg_xlog2x, partial_transpose_mask, von_neumann_entropy,
    DensityOperator, ProductBasis,
};

/// Dead zone for classifying a partial-transpose eigenvalue as negative.
pub const ENTANGLEMENT_DEAD_ZONE: f64 = 1e-10;

/// Largest register accepted by [`min_pt_eigenvalue_brute`].
pub const BRUTE_PPT_MAX_QUBITS: usize = 8;

/// Largest register accepted by [`discord_mc`].
pub const DISCORD_MC_MAX_QUBITS: usize = 6;

fn require_ghz(strategy: StrategyId) -> Result<()> {
    match strategy {
        StrategyId::Q1 | StrategyId::Q2 => Ok(()),
        other => Err(Error::UnsupportedStrategy(other)),
    }
}

fn require_two(strategy: StrategyId, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewQubits {
            strategy,
            n,
            min: 2,
        });
    }
    Ok(())
}

/// Smallest eigenvalue of the worst 2×2 partially transposed block, in the
/// doubled normalization (twice the eigenvalue of the probe's own partial
/// transpose). Only its sign is meaningful for separability.
///
/// * `Q1`: `λ1^{N−1} − p λ0^{N−1}`
/// * `Q2`: `λ0^{⌈N/2⌉}λ1^{⌊N/2⌋} + λ0^{⌊N/2⌋}λ1^{⌈N/2⌉} − λ0^N + λ1^N`;
///   for even `N` the first two terms are `2 (λ0 λ1)^{N/2}`.
pub fn min_pt_eigenvalue_closed(strategy: StrategyId, n: usize, p: f64) -> Result<f64> {
    require_ghz(strategy)?;
    require_two(strategy, n)?;
    let mp = MixednessParams::new(p)?;
    Ok(match strategy {
        StrategyId::Q1 => mp.weight(0, n - 1) - p * mp.weight(n - 1, 0),
        _ => {
            let lo = n / 2;
            let hi = n - lo;
            mp.weight(hi, lo) + mp.weight(lo, hi) - mp.weight(n, 0) + mp.weight(0, n)
        }
    })
}

/// Mixedness below which the probe is separable.
pub fn entanglement_boundary(strategy: StrategyId, n: usize) -> Result<f64> {
    require_ghz(strategy)?;
    require_two(strategy, n)?;
    bisect(
        |p| min_pt_eigenvalue_closed(strategy, n, p).expect("p in range"),
        1e-12,
        1.0,
        1e-10,
    )
}

/// Minimum eigenvalue over the partial transposes of all nontrivial
/// bipartitions (subsets of qubits `2..N`; the complement gives the same
/// spectrum).
pub fn min_pt_eigenvalue_brute(rho: &DensityOperator) -> Result<f64> {
    let n = rho.num_qubits();
    if n > BRUTE_PPT_MAX_QUBITS {
        return Err(Error::ComputeLimit {
            what: "brute-force PPT qubits",
            value: n,
            limit: BRUTE_PPT_MAX_QUBITS,
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "bipartitions need at least two qubits".into(),
        ));
    }
    let mut best = f64::INFINITY;
    for mask in 1..(1usize << (n - 1)) {
        let pt = partial_transpose_mask(rho.matrix(), mask);
        let min = *hermitian_eigenvalues(&pt)?.last().expect("non-empty");
        best = best.min(min);
    }
    Ok(best)
}

/// The probe dephased in the computational basis.
pub fn closest_classical_state(strategy: StrategyId, n: usize, p: f64) -> Result<DensityOperator> {
    require_ghz(strategy)?;
    let rho = prepare_probe(strategy, n, p)?;
    dephase(&rho, &ProductBasis::computational(n))
}

fn d_q2(mp: &MixednessParams, n: usize) -> f64 {
    let s: f64 = (0..n)
        .map(|m| binomial(n - 1, m) * neg_xlog2x((mp.weight(n - m, m) + mp.weight(m, n - m)) / 2.0))
        .sum();
    2.0 * s - n as f64 * mp.qubit_entropy()
}

/// Discord assuming the computational basis is the closest classical basis:
/// `Q1 → 1 − S(ρ)`, `Q2 → 2 Σ_m C(N−1,m) h((λ0^{N−m}λ1^m + λ0^m λ1^{N−m})/2) − N S(ρ)`.
pub fn conjectured_discord(strategy: StrategyId, n: usize, p: f64) -> Result<f64> {
    require_ghz(strategy)?;
    require_two(strategy, n)?;
    let mp = MixednessParams::new(p)?;
    Ok(match strategy {
        StrategyId::Q1 => 1.0 - mp.qubit_entropy(),
        _ => d_q2(&mp, n),
    })
}

#[derive(Debug, Clone)]
pub struct McDiscordSample {
    pub seed: u64,
    pub trial: u64,
    pub basis: ProductBasis,
    /// `S(χ_B) − S(ϱ)`
    pub value_bits: f64,
}

#[derive(Debug, Clone)]
pub struct McDiscordRun {
    pub strategy: StrategyId,
    pub num_qubits: usize,
    pub p: f64,
    pub samples: Vec<McDiscordSample>,
    pub min: f64,
    pub max: f64,
    pub conjectured: f64,
    /// `N − S(ϱ)`
    pub upper_bound: f64,
}

/// Local basis for one trial. Trial 0 is the computational basis.
pub fn trial_basis(n: usize, seed: u64, trial: u64) -> ProductBasis {
    if trial == 0 {
        return ProductBasis::computational(n);
    }
    let locals = (0..n)
        .map(|q| haar_unitary(&mut keyed_rng(seed, trial, q as u64), 2))
        .collect();
    ProductBasis::new(locals).expect("Haar samples are unitary")
}

/// Relative entropy from the probe to its dephasing in random product bases.
pub fn discord_mc(
    strategy: StrategyId,
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<McDiscordRun> {
    require_ghz(strategy)?;
    require_two(strategy, n)?;
    if n > DISCORD_MC_MAX_QUBITS {
        return Err(Error::ComputeLimit {
            what: "Monte Carlo discord qubits",
            value: n,
            limit: DISCORD_MC_MAX_QUBITS,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let rho = prepare_probe(strategy, n, p)?;
    let s_rho = von_neumann_entropy(&rho)?;

    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let basis = trial_basis(n, seed, trial);
            let value_bits = dephased_entropy(&rho, &basis)? - s_rho;
            Ok(McDiscordSample {
                seed,
                trial,
                basis,
                value_bits,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let min = samples
        .iter()
        .map(|s| s.value_bits)
        .fold(f64::INFINITY, f64::min);
    let max = samples
        .iter()
        .map(|s| s.value_bits)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(McDiscordRun {
        strategy,
        num_qubits: n,
        p,
        samples,
        min,
        max,
        conjectured: conjectured_discord(strategy, n, p)?,
        upper_bound: n as f64 - s_rho,
    })
}

/// Classical correlations for the correlated strategies.
pub fn classical_correlations(strategy: StrategyId, n: usize, p: f64) -> Result<f64> {
    if strategy == StrategyId::S {
        return Err(Error::UnsupportedStrategy(strategy));
    }
    require_two(strategy, n)?;
    let mp = MixednessParams::new(p)?;
    let (l0, l1) = (mp.lambda0(), mp.lambda1());
    let s = mp.qubit_entropy();
    let k = n as f64 - 1.0;
    Ok(match strategy {
        StrategyId::Cl => k * (neg_xlog2x(l0 * l0 + l1 * l1) + neg_xlog2x(2.0 * l0 * l1) - s),
        StrategyId::Q1 => k * (1.0 - s),
        _ => n as f64 * (1.0 - s) - d_q2(&mp, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub strategy: StrategyId,
    pub num_qubits: usize,
    pub p: f64,
    pub discord_bits: f64,
    pub classical_bits: f64,
    pub total_bits: f64,
    pub entangled: bool,
    /// Closed-form value for Q1/Q2 (doubled normalization); 0 for S and Cl.
    pub min_pt_eigenvalue: f64,
}

pub fn correlation_report(strategy: StrategyId, n: usize, p: f64) -> Result<CorrelationReport> {
    strategy.check_qubits(n)?;
    MixednessParams::new(p)?;
    let (discord_bits, classical_bits, min_pt) = match strategy {
        StrategyId::S => (0.0, 0.0, 0.0),
        StrategyId::Cl => (0.0, classical_correlations(strategy, n, p)?, 0.0),
        _ => (
            conjectured_discord(strategy, n, p)?,
            classical_correlations(strategy, n, p)?,
            min_pt_eigenvalue_closed(strategy, n, p)?,
        ),
    };
    Ok(CorrelationReport {
        strategy,
        num_qubits: n,
        p,
        discord_bits,
        classical_bits,
        total_bits: discord_bits + classical_bits,
        entangled: min_pt < -ENTANGLEMENT_DEAD_ZONE,
        min_pt_eigenvalue: min_pt,
    })
}
