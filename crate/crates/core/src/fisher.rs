//! Quantum Fisher information for phase estimation under `G = Σ_i |1_i⟩⟨1_i|`.

use crate::eigen::EigenSystem;
use crate::error::{Error, Result};
use crate::numeric::{binomial, largest_root};
use crate::probes::{MixednessParams, StrategyId};
use crate::state::HammingGenerator;

/// Eigenvalue pairs whose sum is at most this are skipped in the spectral sum.
pub const PAIR_SUM_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiResult {
    pub strategy: StrategyId,
    pub num_qubits: usize,
    pub p: f64,
    pub fisher: f64,
    pub phase_uncertainty: f64,
}

impl QfiResult {
    pub fn closed(strategy: StrategyId, n: usize, p: f64) -> Result<Self> {
        let fisher = qfi_closed(strategy, n, p)?;
        Ok(Self {
            strategy,
            num_qubits: n,
            p,
            fisher,
            phase_uncertainty: phase_uncertainty(fisher)?,
        })
    }
}

/// `4 Σ_{j>k} (η_j − η_k)² / (η_j + η_k) · |⟨Ψ_j|G|Ψ_k⟩|²`
pub fn qfi_spectral(es: &EigenSystem, g: &HammingGenerator) -> Result<f64> {
    let d = es.dim();
    if g.diagonal().len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: g.diagonal().len(),
        });
    }
    let weights: Vec<f64> = g.diagonal().iter().map(|&w| w as f64).collect();
    let gv: Vec<Vec<num_complex::Complex64>> = es
        .eigenvectors
        .iter()
        .map(|v| v.iter().zip(&weights).map(|(z, &w)| z * w).collect())
        .collect();

    let mut total = 0.0;
    for (j, (&eta_j, vj)) in es.eigenvalues.iter().zip(&es.eigenvectors).enumerate() {
        for (&eta_k, gk) in es.eigenvalues[..j].iter().zip(&gv) {
            let sum = eta_j + eta_k;
            if sum <= PAIR_SUM_FLOOR {
                continue;
            }
            let diff = eta_j - eta_k;
            if diff == 0.0 {
                continue;
            }
            let elem: num_complex::Complex64 = vj.iter().zip(gk).map(|(a, b)| a.conj() * b).sum();
            total += diff * diff / sum * elem.norm_sqr();
        }
    }
    Ok(4.0 * total)
}

/// Closed forms for each strategy.
pub fn qfi_closed(strategy: StrategyId, n: usize, p: f64) -> Result<f64> {
    strategy.check_qubits(n)?;
    let mp = MixednessParams::new(p)?;
    let nf = n as f64;
    Ok(match strategy {
        StrategyId::S => nf * p * p,
        StrategyId::Cl => nf * p * p + 1.0 - p * p - cl_harmonic_sum(&mp, n),
        StrategyId::Q1 => {
            nf * p * p + 2.0 * p.powi(3) * (nf - 1.0) + p.powi(4) * (nf * nf - 3.0 * nf + 2.0)
        }
        StrategyId::Q2 => q2_sum(&mp, n),
    })
}

/// `Σ_m C(N−1,m) · 4ab/(a+b)`, `a = λ0^m λ1^{N−m}`, `b = λ0^{N−m} λ1^m`.
fn cl_harmonic_sum(mp: &MixednessParams, n: usize) -> f64 {
    (0..n)
        .map(|m| {
            let a = mp.weight(m, n - m);
            let b = mp.weight(n - m, m);
            if a + b <= 1e-300 {
                0.0
            } else {
                binomial(n - 1, m) * 4.0 * a * b / (a + b)
            }
        })
        .sum()
}

fn q2_sum(mp: &MixednessParams, n: usize) -> f64 {
    (0..n)
        .map(|m| {
            let a = mp.weight(n - m, m);
            let b = mp.weight(m, n - m);
            if a + b <= 1e-300 {
                return 0.0;
            }
            let gap = n as f64 - 2.0 * m as f64;
            binomial(n - 1, m) * gap * gap * (a - b) * (a - b) / (a + b)
        })
        .sum()
}

/// `Np² + 1 − p² − exp(−Np²)`
pub fn qfi_cl_approx(n: usize, p: f64) -> f64 {
    let nf = n as f64;
    nf * p * p + 1.0 - p * p - (-nf * p * p).exp()
}

/// Cramér–Rao bound `1/√F`; infinite when `F = 0`.
pub fn phase_uncertainty(fisher: f64) -> Result<f64> {
    if fisher < 0.0 || fisher.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "Fisher information must be >= 0, got {fisher}"
        )));
    }
    Ok(if fisher == 0.0 {
        f64::INFINITY
    } else {
        1.0 / fisher.sqrt()
    })
}

/// `√(F_Q2 / F_S)`
pub fn quantum_advantage(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewQubits {
            strategy: StrategyId::Q2,
            n,
            min: 2,
        });
    }
    if p <= 0.0 {
        return Err(Error::InvalidArgument(
            "quantum advantage is undefined at p = 0".into(),
        ));
    }
    Ok((qfi_closed(StrategyId::Q2, n, p)? / qfi_closed(StrategyId::S, n, p)?).sqrt())
}

/// Largest `p` where `F_Cl = F_Q1`, by bisection on `(1e-6, 1)`.
pub fn classical_q1_crossing(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "crossing point needs N >= 3, got {n}"
        )));
    }
    let diff = |p: f64| {
        qfi_closed(StrategyId::Cl, n, p).expect("valid p")
            - qfi_closed(StrategyId::Q1, n, p).expect("valid p")
    };
    // At p = 1, F_Cl − F_Q1 = N − N² < 0; the top grid cell never holds a root.
    largest_root(diff, 1e-6, 1.0, 2000, 1e-10)
}

fn check_leading(n: usize, p: f64) -> Result<MixednessParams> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "leading term needs N >= 2, got {n}"
        )));
    }
    MixednessParams::new(p)
}

fn leading_term(top: f64, partner: f64, n: usize) -> f64 {
    let sum = top + partner;
    if sum == 0.0 {
        return 0.0;
    }
    (top - partner).powi(2) / sum * (n * n) as f64
}

/// Largest and smallest eigenvalue connected: `(λ0^N − λ1^N)² / (λ0^N + λ1^N) · N²`.
pub fn q2_leading_term(n: usize, p: f64) -> Result<f64> {
    let mp = check_leading(n, p)?;
    Ok(leading_term(mp.weight(n, 0), mp.weight(0, n), n))
}

/// Largest eigenvalue connected to a one-excitation partner:
/// `(λ0^N − λ0^{N−1}λ1)² / (λ0^N + λ0^{N−1}λ1) · N²`.
pub fn q1_leading_term(n: usize, p: f64) -> Result<f64> {
    let mp = check_leading(n, p)?;
    Ok(leading_term(mp.weight(n, 0), mp.weight(n - 1, 1), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::hermitian_eigensystem;
    use crate::linalg::{re, ComplexMatrix};
    use crate::probes::prepare_probe;
    use crate::state::DensityOperator;

    fn spectral(rho: &DensityOperator) -> f64 {
        let es = hermitian_eigensystem(rho.matrix()).unwrap();
        qfi_spectral(&es, &HammingGenerator::new(rho.num_qubits()).unwrap()).unwrap()
    }

    #[test]
    fn plus_state_has_unit_fisher() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::pure(1, &[re(s), re(s)]).unwrap();
        assert!((spectral(&plus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_pure_reaches_heisenberg() {
        for n in 2..=6 {
            let d = 1 << n;
            let mut v = vec![re(0.0); d];
            v[0] = re(std::f64::consts::FRAC_1_SQRT_2);
            v[d - 1] = re(std::f64::consts::FRAC_1_SQRT_2);
            let ghz = DensityOperator::pure(n, &v).unwrap();
            assert!((spectral(&ghz) - (n * n) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn maximally_mixed_has_none() {
        for n in 1..=4 {
            assert_eq!(spectral(&DensityOperator::maximally_mixed(n).unwrap()), 0.0);
        }
    }

    #[test]
    fn spectral_dimension_mismatch() {
        let es = hermitian_eigensystem(&ComplexMatrix::identity(4)).unwrap();
        assert!(qfi_spectral(&es, &HammingGenerator::new(3).unwrap()).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!((qfi_closed(StrategyId::S, 10, 0.5).unwrap() - 2.5).abs() < 1e-15);
        assert!((qfi_closed(StrategyId::Q1, 2, 1.0).unwrap() - 4.0).abs() < 1e-15);
        assert!((qfi_closed(StrategyId::Cl, 10, 1.0).unwrap() - 10.0).abs() < 1e-12);
        assert!(qfi_closed(StrategyId::Q2, 1, 0.5).is_err());
        assert!(qfi_closed(StrategyId::S, 3, 1.5).is_err());
    }

    #[test]
    fn q2_sum_single_term_reduces_to_standard() {
        // With one term (N−2m)² = 1 the Q2 sum is the single-qubit Fisher information.
        for p in [0.1, 0.5, 0.9] {
            let mp = MixednessParams::new(p).unwrap();
            assert!((q2_sum(&mp, 1) - p * p).abs() < 1e-14);
        }
    }

    #[test]
    fn cl_pure_limit_by_explicit_sum() {
        // λ1 = 0: every harmonic term has a zero factor.
        let mp = MixednessParams::new(1.0).unwrap();
        assert_eq!(cl_harmonic_sum(&mp, 10), 0.0);
    }

    #[test]
    fn cl_approx_examples() {
        assert_eq!(qfi_cl_approx(10, 0.0), 0.0);
        assert!((qfi_cl_approx(10, 1.0) - (10.0 - (-10f64).exp())).abs() < 1e-14);
        assert!((qfi_cl_approx(10, 1.0) - 9.999_954_6).abs() < 1e-7);
    }

    #[test]
    fn phase_uncertainty_examples() {
        assert!((phase_uncertainty(100.0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(phase_uncertainty(0.0).unwrap(), f64::INFINITY);
        assert!(phase_uncertainty(-1.0).is_err());
        let r = QfiResult::closed(StrategyId::Q2, 10, 1.0).unwrap();
        assert!((r.phase_uncertainty - 0.1).abs() < 1e-12);
        assert!((r.phase_uncertainty * r.fisher.sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn advantage_examples() {
        assert!((quantum_advantage(10, 1.0).unwrap() - 10f64.sqrt()).abs() < 1e-12);
        assert!(quantum_advantage(10, 0.01).unwrap() >= 10f64.sqrt() - 1e-9);
        for k in 1..=99 {
            assert!(quantum_advantage(4, k as f64 / 100.0).unwrap() >= 2.0 - 1e-12);
        }
        assert!(quantum_advantage(10, 0.0).is_err());
    }

    #[test]
    fn crossing_for_ten_qubits() {
        let p = classical_q1_crossing(10).unwrap();
        let ref_p = 1.0 / 10f64.sqrt();
        assert!(p > 0.0 && p < 1.0);
        assert!(p > ref_p / 2.0 && p < ref_p * 2.0);
        let below = p - 1e-3;
        let above = p + 1e-3;
        assert!(
            qfi_closed(StrategyId::Cl, 10, below).unwrap()
                > qfi_closed(StrategyId::Q1, 10, below).unwrap()
        );
        assert!(
            qfi_closed(StrategyId::Q1, 10, above).unwrap()
                > qfi_closed(StrategyId::Cl, 10, above).unwrap()
        );
        assert!(classical_q1_crossing(2).is_err());
    }

    #[test]
    fn leading_terms() {
        for n in 2..=8 {
            assert!((q2_leading_term(n, 1.0).unwrap() - (n * n) as f64).abs() < 1e-12);
            assert!((q1_leading_term(n, 1.0).unwrap() - (n * n) as f64).abs() < 1e-12);
            assert_eq!(q2_leading_term(n, 0.0).unwrap(), 0.0);
            assert_eq!(q1_leading_term(n, 0.0).unwrap(), 0.0);
        }
        assert!(
            q2_leading_term(6, 0.3).unwrap() <= qfi_closed(StrategyId::Q2, 6, 0.3).unwrap() + 1e-9
        );
        assert!(q1_leading_term(5, 0.4).unwrap() <= q2_leading_term(5, 0.4).unwrap());
    }

    #[test]
    fn spectral_matches_closed_spot_checks() {
        for s in StrategyId::ALL {
            for n in s.min_qubits()..=4 {
                for p in [0.0, 0.25, 0.8, 1.0] {
                    let closed = qfi_closed(s, n, p).unwrap();
                    let spec = spectral(&prepare_probe(s, n, p).unwrap());
                    assert!(
                        (spec - closed).abs() <= 1e-7 * closed.max(1.0),
                        "{s} n={n} p={p}: {spec} vs {closed}"
                    );
                }
            }
        }
    }
}
