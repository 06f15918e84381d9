//! Complex amplitude vectors over a [`FockBasis`].

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::basis::FockBasis;

/// Tolerance below which a vector counts as normalized.
pub const NORM_TOL: f64 = 1e-12;

/// A many-body state: one complex amplitude per basis word.
#[derive(Debug, Clone)]
pub struct FockVector {
    basis: Arc<FockBasis>,
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(basis: Arc<FockBasis>) -> Self {
        let dim = basis.len();
        Self {
            basis,
            amplitudes: vec![Complex64::ZERO; dim],
        }
    }

    pub fn from_amplitudes(basis: Arc<FockBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                got: amplitudes.len(),
                expected: basis.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(Error::InvalidParameter(
                "amplitudes must have finite norm".into(),
            ));
        }
        Ok(Self { basis, amplitudes })
    }

    /// Unit vector on a single basis word.
    pub fn basis_word(basis: Arc<FockBasis>, word: u64) -> Result<Self> {
        let idx = basis
            .index_of(word)
            .ok_or_else(|| Error::InvalidParameter(format!("word {word:#b} not in basis")))?;
        let mut v = Self::zeros(basis);
        v.amplitudes[idx] = Complex64::ONE;
        Ok(v)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < NORM_TOL
    }

    /// `<self|other>` with the physics convention: conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Returns a normalized copy, or an error if the norm is numerically zero.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::StateUndefined { norm: n });
        }
        let mut out = self.clone();
        for a in &mut out.amplitudes {
            *a /= n;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.amplitudes {
            *a *= factor;
        }
        out
    }

    /// `self + factor * other`, elementwise over the shared basis.
    pub fn add_scaled(&self, other: &Self, factor: Complex64) -> Self {
        debug_assert_eq!(self.len(), other.len());
        let amplitudes = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a + factor * b)
            .collect();
        Self {
            basis: Arc::clone(&self.basis),
            amplitudes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(m: usize) -> Arc<FockBasis> {
        Arc::new(FockBasis::full(m).unwrap())
    }

    #[test]
    fn basis_word_is_normalized() {
        let v = FockVector::basis_word(full(3), 0b101).unwrap();
        assert!(v.is_normalized());
        assert_eq!(v.amplitudes()[5], Complex64::ONE);
    }

    #[test]
    fn inner_product_is_conjugate_linear() {
        let b = full(2);
        let v = FockVector::from_amplitudes(
            Arc::clone(&b),
            vec![
                Complex64::new(0.0, 1.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::ZERO,
            ],
        )
        .unwrap();
        let w = FockVector::basis_word(b, 0).unwrap();
        let ip = v.inner(&w);
        assert!((ip - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let b = full(2);
        assert!(matches!(
            FockVector::from_amplitudes(b, vec![Complex64::ONE; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn normalized_rescales() {
        let b = full(1);
        let v = FockVector::from_amplitudes(
            b,
            vec![Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0)],
        )
        .unwrap();
        let n = v.normalized().unwrap();
        assert!((n.norm() - 1.0).abs() < 1e-15);
        assert!((n.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }
}
