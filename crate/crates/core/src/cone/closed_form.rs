//! Closed-form two-state entanglement and the Shannon weight entropy.

use crate::error::{Error, Result};

/// Tolerance on the weight-sum normalization.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

/// Shannon entropy `-sum p ln p` in nats, with `0 ln 0 = 0`.
///
/// Weights must be non-negative and sum to one within 1e-10.
pub fn shannon_entropy(weights: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &p in weights {
        if p < -1e-12 || !p.is_finite() {
            return Err(Error::InvalidWeights {
                reason: format!("weight {p} is negative or non-finite"),
            });
        }
        sum += p;
    }
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::InvalidWeights {
            reason: format!("weights sum to {sum}, expected 1"),
        });
    }
    Ok(weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum())
}

/// Entropy of the unique two-state decomposition with weight ratio `alpha`:
/// `-(a/(1+a)) ln(a/(1+a)) - (1/(1+a)) ln(1/(1+a))`, continued to 0 at
/// `alpha = 0`.
pub fn e1_closed_form(alpha: f64) -> Result<f64> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::OutsideClosedFormDomain { alpha });
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let w1 = alpha / (1.0 + alpha);
    let w0 = 1.0 / (1.0 + alpha);
    Ok(-w1 * w1.ln() - w0 * w0.ln())
}

/// Outcome of the unique two-state decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionStatus {
    Ok,
    /// `alpha < 0`: the target is not a mixture of the two references.
    NegativeAlpha,
}

/// `lambda_g = (lambda_0 + alpha lambda_1) / (1 + alpha)` solved for alpha
/// and the two weights.
#[derive(Debug, Clone)]
pub struct UniqueDecomposition {
    pub alpha: f64,
    /// `(weight of lambda_0, weight of lambda_1)`; absent when alpha < 0.
    pub weights: Option<(f64, f64)>,
    pub status: DecompositionStatus,
}

use crate::cone::functional::StateFunctional;

/// Solve the unique representation of `target` over the references
/// `(lambda_0, lambda_1)` with `lambda_1(A_1) = 0`:
/// `alpha = lambda_0(A_1) / target(A_1) - 1`.
pub fn decompose_unique(
    target: &StateFunctional,
    lambda0: &StateFunctional,
    lambda1: &StateFunctional,
) -> Result<UniqueDecomposition> {
    if target.dim() < 2 || lambda0.dim() < 2 || lambda1.dim() < 2 {
        return Err(Error::InvalidParameter(
            "decomposition needs the A_1 component".into(),
        ));
    }
    if lambda1.value(1).abs() > 1e-10 {
        return Err(Error::ConeContractViolation {
            value: lambda1.value(1),
        });
    }
    let target_a1 = target.value(1);
    if target_a1 <= 0.0 {
        return Err(Error::UnnormalizableDecomposition { value: target_a1 });
    }
    let alpha = lambda0.value(1) / target_a1 - 1.0;
    if alpha < 0.0 {
        return Ok(UniqueDecomposition {
            alpha,
            weights: None,
            status: DecompositionStatus::NegativeAlpha,
        });
    }
    Ok(UniqueDecomposition {
        alpha,
        weights: Some((1.0 / (1.0 + alpha), alpha / (1.0 + alpha))),
        status: DecompositionStatus::Ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(values: Vec<f64>) -> StateFunctional {
        StateFunctional::new(values, "t").unwrap()
    }

    #[test]
    fn entropy_trivials() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 2.0f64.ln()).abs() < 1e-15);
        let s = shannon_entropy(&[0.75, 0.25]).unwrap();
        assert!((s - 0.562_335_144_618_808_3).abs() < 1e-15);
    }

    #[test]
    fn entropy_validates_weights() {
        assert!(shannon_entropy(&[0.7, 0.7]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn closed_form_reference_points() {
        assert_eq!(e1_closed_form(0.0).unwrap(), 0.0);
        assert!((e1_closed_form(1.0).unwrap() - 2.0f64.ln()).abs() < 1e-15);
        assert!((e1_closed_form(3.0).unwrap() - 0.562_335_144_618_808_3).abs() < 1e-15);
        assert!(matches!(
            e1_closed_form(-0.1),
            Err(Error::OutsideClosedFormDomain { .. })
        ));
    }

    #[test]
    fn closed_form_symmetry_and_maximum() {
        for &alpha in &[1e-3, 0.1, 0.5, 2.0, 17.0, 1e3] {
            let a = e1_closed_form(alpha).unwrap();
            let b = e1_closed_form(1.0 / alpha).unwrap();
            assert!((a - b).abs() < 1e-12, "alpha {alpha}");
            assert!(a <= 2.0f64.ln() + 1e-15);
        }
        // Strictly increasing below 1, strictly decreasing above.
        let grid = [0.1, 0.3, 0.6, 0.9];
        for w in grid.windows(2) {
            assert!(e1_closed_form(w[0]).unwrap() < e1_closed_form(w[1]).unwrap());
        }
        let grid = [1.2, 2.0, 5.0, 40.0];
        for w in grid.windows(2) {
            assert!(e1_closed_form(w[0]).unwrap() > e1_closed_form(w[1]).unwrap());
        }
    }

    #[test]
    fn unique_decomposition_reference_cases() {
        let lambda1 = f(vec![1.0, 0.0]);
        // Pairing-toy values: target 1/2, reference 1.
        let d = decompose_unique(&f(vec![1.0, 0.5]), &f(vec![1.0, 1.0]), &lambda1).unwrap();
        assert!((d.alpha - 1.0).abs() < 1e-15);
        let (w0, w1) = d.weights.unwrap();
        assert!((w0 - 0.5).abs() < 1e-15 && (w1 - 0.5).abs() < 1e-15);

        // Target equal to the first reference: alpha = 0.
        let d = decompose_unique(&f(vec![1.0, 0.8]), &f(vec![1.0, 0.8]), &lambda1).unwrap();
        assert_eq!(d.alpha, 0.0);
        assert_eq!(d.weights.unwrap(), (1.0, 0.0));

        // Reference below target: negative alpha, no weights.
        let d = decompose_unique(&f(vec![1.0, 0.8]), &f(vec![1.0, 0.4]), &lambda1).unwrap();
        assert_eq!(d.status, DecompositionStatus::NegativeAlpha);
        assert!(d.alpha < 0.0);
        assert!(d.weights.is_none());
    }

    #[test]
    fn unique_decomposition_contract_errors() {
        let bad_lambda1 = f(vec![1.0, 0.3]);
        assert!(matches!(
            decompose_unique(&f(vec![1.0, 0.5]), &f(vec![1.0, 1.0]), &bad_lambda1),
            Err(Error::ConeContractViolation { .. })
        ));
        let lambda1 = f(vec![1.0, 0.0]);
        assert!(matches!(
            decompose_unique(&f(vec![1.0, 0.0]), &f(vec![1.0, 1.0]), &lambda1),
            Err(Error::UnnormalizableDecomposition { .. })
        ));
    }
}
