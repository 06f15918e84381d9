//! Randomized verification of the canonical anticommutation relations.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fock::basis::FockBasis;
use crate::fock::vector::FockVector;

/// A ladder-operator implementation under test.
pub type LadderFn = dyn Fn(u64, usize, bool) -> Option<(u64, f64)>;

/// Outcome of one identity class in the algebra self-test.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

/// Aggregated self-test report.
#[derive(Debug, Clone)]
pub struct AlgebraReport {
    pub mode_count: usize,
    pub checks: Vec<IdentityCheck>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_deviation)
            .fold(0.0, f64::max)
    }
}

const SELFTEST_TOL: f64 = 1e-12;

/// Verify `{c_i, c_j†} = δ_ij`, `{c_i, c_j} = 0` and `c_i² = 0` on random
/// vectors for all mode pairs below `mode_count`.
pub fn algebra_selftest(mode_count: usize) -> Result<AlgebraReport> {
    algebra_selftest_with(mode_count, &crate::fock::operator::apply_ladder)
}

/// Same identities, but against an arbitrary ladder implementation. Used to
/// prove the self-test detects broken sign conventions.
pub fn algebra_selftest_with(mode_count: usize, ladder: &LadderFn) -> Result<AlgebraReport> {
    let basis = Arc::new(FockBasis::full(mode_count)?);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f7e57);
    let trials = 4;

    let apply_one = |v: &FockVector, mode: usize, dagger: bool| -> FockVector {
        let mut out = FockVector::zeros(Arc::clone(&basis));
        let out_amps = out.amplitudes_mut();
        for (idx, &amp) in v.amplitudes().iter().enumerate() {
            if amp == Complex64::ZERO {
                continue;
            }
            if let Some((w, s)) = ladder(basis.word(idx), mode, dagger) {
                if let Some(j) = basis.index_of(w) {
                    out_amps[j] += s * amp;
                }
            }
        }
        out
    };

    let mut car_dev = 0.0f64;
    let mut ccr_dev = 0.0f64;
    let mut nil_dev = 0.0f64;

    for _ in 0..trials {
        let amps: Vec<Complex64> = (0..basis.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let v = FockVector::from_amplitudes(Arc::clone(&basis), amps)?.normalized()?;

        for i in 0..mode_count {
            // c_i c_i = 0
            let nil = apply_one(&apply_one(&v, i, false), i, false);
            nil_dev = nil_dev.max(nil.norm());

            for j in 0..mode_count {
                // {c_i, c_j†} = δ_ij
                let a = apply_one(&apply_one(&v, j, true), i, false);
                let b = apply_one(&apply_one(&v, i, false), j, true);
                let mut acc = a.add_scaled(&b, Complex64::ONE);
                if i == j {
                    acc = acc.add_scaled(&v, -Complex64::ONE);
                }
                car_dev = car_dev.max(acc.norm());

                // {c_i, c_j} = 0
                let c = apply_one(&apply_one(&v, j, false), i, false);
                let d = apply_one(&apply_one(&v, i, false), j, false);
                ccr_dev = ccr_dev.max(c.add_scaled(&d, Complex64::ONE).norm());
            }
        }
    }

    Ok(AlgebraReport {
        mode_count,
        checks: vec![
            IdentityCheck {
                name: "anticommutator {c_i, c_j_dagger} = delta_ij",
                max_deviation: car_dev,
                tolerance: SELFTEST_TOL,
            },
            IdentityCheck {
                name: "anticommutator {c_i, c_j} = 0",
                max_deviation: ccr_dev,
                tolerance: SELFTEST_TOL,
            },
            IdentityCheck {
                name: "nilpotency c_i^2 = 0",
                max_deviation: nil_dev,
                tolerance: SELFTEST_TOL,
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_holds_for_small_spaces() {
        for m in [2, 4] {
            let report = algebra_selftest(m).unwrap();
            assert!(report.passed(), "M={m}: {report:?}");
        }
    }

    #[test]
    fn algebra_holds_for_eight_modes() {
        let report = algebra_selftest(8).unwrap();
        assert!(report.passed());
        assert!(report.max_deviation() < 1e-12);
    }

    #[test]
    fn bosonic_sign_mutation_is_detected() {
        // Dropping the fermionic sign must break the anticommutators.
        let bosonic = |word: u64, mode: usize, dagger: bool| -> Option<(u64, f64)> {
            let bit = 1u64 << mode;
            let occupied = word & bit != 0;
            if dagger == occupied {
                return None;
            }
            Some((word ^ bit, 1.0))
        };
        let report = algebra_selftest_with(4, &bosonic).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn off_by_one_sign_mutation_is_detected() {
        // Counting set bits at-or-below the acted index instead of strictly
        // below flips the sign of every annihilation branch.
        let mutated = |word: u64, mode: usize, dagger: bool| -> Option<(u64, f64)> {
            let bit = 1u64 << mode;
            let occupied = word & bit != 0;
            if dagger == occupied {
                return None;
            }
            let at_or_below = (word & ((bit << 1) - 1)).count_ones();
            let sign = if at_or_below.is_multiple_of(2) { 1.0 } else { -1.0 };
            Some((word ^ bit, sign))
        };
        let report = algebra_selftest_with(4, &mutated).unwrap();
        assert!(!report.passed());
    }
}
