//! Self-check suite: every closed form against its brute-force oracle.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::correlations::{
    classical_correlations, conjectured_discord, discord_mc, entanglement_boundary,
    min_pt_eigenvalue_brute, min_pt_eigenvalue_closed, ENTANGLEMENT_DEAD_ZONE,
};
use crate::eigen::hermitian_eigensystem;
use crate::error::{Error, Result};
use crate::fisher::{qfi_closed, qfi_spectral};
use crate::probes::{
    closed_form_density, closed_form_eigensystem, prepare_probe, register_spectrum,
    MixednessParams, StrategyId,
};
use crate::state::HammingGenerator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

impl VerifyLevel {
    fn max_qubits(self) -> usize {
        match self {
            VerifyLevel::Quick => 4,
            VerifyLevel::Full => 6,
        }
    }

    fn p_grid(self) -> Vec<f64> {
        let steps = match self {
            VerifyLevel::Quick => 4,
            VerifyLevel::Full => 20,
        };
        (0..=steps).map(|k| k as f64 / steps as f64).collect()
    }

    fn mc_trials(self) -> usize {
        match self {
            VerifyLevel::Quick => 100,
            VerifyLevel::Full => 1000,
        }
    }
}

impl FromStr for VerifyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(VerifyLevel::Quick),
            "full" => Ok(VerifyLevel::Full),
            other => Err(Error::InvalidArgument(format!(
                "unknown verify level '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub evaluated: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    /// `(check name, message)` for the first `limit` failures.
    pub fn first_failures(&self, limit: usize) -> Vec<(&'static str, &str)> {
        self.checks
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| (c.name, f.as_str())))
            .take(limit)
            .collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "[{tag}] {} ({} cases, {} failures)",
                c.name,
                c.evaluated,
                c.failures.len()
            )?;
        }
        if !self.passed() {
            writeln!(f, "first failures:")?;
            for (name, msg) in self.first_failures(10) {
                writeln!(f, "  {name}: {msg}")?;
            }
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all checks passed"
            } else {
                "verification FAILED"
            }
        )
    }
}

/// Closed-form Fisher information provider, swappable for mutation tests.
pub type ClosedFisher = dyn Fn(StrategyId, usize, f64) -> Result<f64> + Sync;

pub fn run_verify(level: VerifyLevel) -> VerifyReport {
    run_verify_with(level, &qfi_closed)
}

pub fn run_verify_with(level: VerifyLevel, closed: &ClosedFisher) -> VerifyReport {
    let grid = level.p_grid();
    let max_n = level.max_qubits();
    let points: Vec<(StrategyId, usize, f64)> = StrategyId::ALL
        .iter()
        .flat_map(|&s| (s.min_qubits()..=max_n).map(move |n| (s, n)))
        .flat_map(|(s, n)| grid.iter().map(move |&p| (s, n, p)))
        .collect();

    let checks = vec![
        check(
            "fisher oracle (spectral vs closed form)",
            &points,
            |&(s, n, p)| {
                let rho = prepare_probe(s, n, p)?;
                let es = hermitian_eigensystem(rho.matrix())?;
                let spectral = qfi_spectral(&es, &HammingGenerator::new(n)?)?;
                let value = closed(s, n, p)?;
                let tol = 1e-7 * value.abs().max(1.0);
                expect((spectral - value).abs() <= tol, || {
                    format!("{s} N={n} p={p}: spectral {spectral} vs closed {value}")
                })
            },
        ),
        check("probe circuit vs block matrix", &points, |&(s, n, p)| {
            let a = prepare_probe(s, n, p)?;
            let b = closed_form_density(s, n, p)?;
            let diff = a.matrix().max_abs_diff(b.matrix());
            expect(diff <= 1e-10, || {
                format!("{s} N={n} p={p}: max diff {diff:e}")
            })
        }),
        check(
            "probe spectrum equals register spectrum",
            &points,
            |&(s, n, p)| {
                let got = prepare_probe(s, n, p)?.eigenvalues()?;
                let want = register_spectrum(n, p)?;
                let worst = got
                    .iter()
                    .zip(&want)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                expect(worst <= 1e-9, || {
                    format!("{s} N={n} p={p}: deviation {worst:e}")
                })
            },
        ),
        check(
            "closed-form eigenvector residuals",
            &points,
            |&(s, n, p)| {
                let rho = prepare_probe(s, n, p)?;
                let spec = closed_form_eigensystem(s, n, p)?;
                for e in &spec.entries {
                    for v in e.eigenvectors() {
                        let rv = rho.matrix().mul_vec(&v)?;
                        let resid = rv
                            .iter()
                            .zip(&v)
                            .map(|(a, b)| (a - b * e.eigenvalue).norm_sqr())
                            .sum::<f64>()
                            .sqrt();
                        if resid > 1e-9 {
                            return Ok(Some(format!(
                                "{s} N={n} p={p} m={}: residual {resid:e}",
                                e.m
                            )));
                        }
                    }
                }
                Ok(None)
            },
        ),
        check("pure-state limits", &(2..=10).collect::<Vec<_>>(), |&n| {
            let nf = n as f64;
            let want = [
                (StrategyId::S, nf),
                (StrategyId::Cl, nf),
                (StrategyId::Q1, nf * nf),
                (StrategyId::Q2, nf * nf),
            ];
            for (s, w) in want {
                let got = closed(s, n, 1.0)?;
                if (got - w).abs() > 1e-9 {
                    return Ok(Some(format!("{s} N={n}: {got} != {w}")));
                }
            }
            Ok(None)
        }),
        check(
            "Q2 bound F >= N^2 p^2 and correlated >= standard",
            &(2..=12)
                .flat_map(|n| (0..=100).map(move |k| (n, k as f64 / 100.0)))
                .collect::<Vec<_>>(),
            |&(n, p)| {
                let q2 = closed(StrategyId::Q2, n, p)?;
                let q1 = closed(StrategyId::Q1, n, p)?;
                let s = closed(StrategyId::S, n, p)?;
                let bound = (n * n) as f64 * p * p;
                expect(
                    q2 >= bound - 1e-9 && q1 >= s - 1e-12 && q2 >= s - 1e-12,
                    || format!("N={n} p={p}: Q2 {q2} Q1 {q1} S {s} bound {bound}"),
                )
            },
        ),
        check(
            "PPT brute force vs closed-form sign",
            &[StrategyId::Q1, StrategyId::Q2]
                .iter()
                .flat_map(|&s| {
                    (2..=max_n)
                        .flat_map(move |n| level.p_grid().into_iter().map(move |p| (s, n, p)))
                })
                .collect::<Vec<_>>(),
            |&(s, n, p)| {
                let star = entanglement_boundary(s, n)?;
                if (p - star).abs() < 1e-3 {
                    return Ok(None);
                }
                let brute = min_pt_eigenvalue_brute(&prepare_probe(s, n, p)?)?;
                let closed_pt = min_pt_eigenvalue_closed(s, n, p)?;
                let a = brute < -ENTANGLEMENT_DEAD_ZONE;
                let b = closed_pt < -ENTANGLEMENT_DEAD_ZONE;
                expect(a == b, || {
                    format!("{s} N={n} p={p}: brute {brute:e} closed {closed_pt:e}")
                })
            },
        ),
        check(
            "correlation identities",
            &(2..=8)
                .flat_map(|n| (0..=20).map(move |k| (n, k as f64 / 20.0)))
                .collect::<Vec<_>>(),
            |&(n, p)| {
                let s_rho = MixednessParams::new(p)?.qubit_entropy();
                let target = n as f64 * (1.0 - s_rho);
                let t1 = conjectured_discord(StrategyId::Q1, n, p)?
                    + classical_correlations(StrategyId::Q1, n, p)?;
                let t2 = conjectured_discord(StrategyId::Q2, n, p)?
                    + classical_correlations(StrategyId::Q2, n, p)?;
                let d1 = conjectured_discord(StrategyId::Q1, n, p)?;
                let d1_two = conjectured_discord(StrategyId::Q1, 2, p)?;
                expect(
                    (t1 - target).abs() <= 1e-9
                        && (t2 - target).abs() <= 1e-9
                        && (d1 - d1_two).abs() <= 1e-12,
                    || format!("N={n} p={p}: T_Q1 {t1} T_Q2 {t2} target {target}"),
                )
            },
        ),
        check(
            "Monte Carlo discord sandwich (Q1) and upper bound (Q1, Q2)",
            &[StrategyId::Q1, StrategyId::Q2]
                .iter()
                .flat_map(|&s| {
                    (2..=max_n.min(5)).flat_map(move |n| [0.2, 0.5, 0.8].map(move |p| (s, n, p)))
                })
                .collect::<Vec<_>>(),
            |&(s, n, p)| {
                let run = discord_mc(s, n, p, level.mc_trials(), 42)?;
                let lower_ok = s != StrategyId::Q1 || run.min >= run.conjectured - 1e-9;
                expect(lower_ok && run.max <= run.upper_bound + 1e-9, || {
                    format!(
                        "{s} N={n} p={p}: min {} max {} conjectured {} upper {}",
                        run.min, run.max, run.conjectured, run.upper_bound
                    )
                })
            },
        ),
    ];
    VerifyReport { level, checks }
}

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Result<Option<String>> {
    Ok(if ok { None } else { Some(msg()) })
}

fn check<T, F>(name: &'static str, cases: &[T], f: F) -> CheckOutcome
where
    T: Sync,
    F: Fn(&T) -> Result<Option<String>> + Sync,
{
    let failures: Vec<String> = cases
        .par_iter()
        .map(|case| match f(case) {
            Ok(outcome) => outcome,
            Err(e) => Some(format!("error: {e}")),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    CheckOutcome {
        name,
        evaluated: cases.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_passes() {
        let report = run_verify(VerifyLevel::Quick);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn mutated_q1_cubic_coefficient_is_caught() {
        let mutated = |s: StrategyId, n: usize, p: f64| -> Result<f64> {
            if s == StrategyId::Q1 {
                let nf = n as f64;
                Ok(nf * p * p
                    + 3.0 * p.powi(3) * (nf - 1.0)
                    + p.powi(4) * (nf * nf - 3.0 * nf + 2.0))
            } else {
                qfi_closed(s, n, p)
            }
        };
        let report = run_verify_with(VerifyLevel::Quick, &mutated);
        assert!(!report.passed());
        let (name, _) = report.first_failures(1)[0];
        assert!(name.starts_with("fisher oracle"));
        assert!(report.first_failures(10).len() <= 10);
    }
}
