//! Second-quantized operators with exact fermionic anticommutation signs.
//!
//! Sign convention used everywhere: mode 0 is the rightmost bit and the
//! first factor in the reference ordering of creation strings, so acting
//! with a ladder operator on mode `m` picks up `(-1)^(popcount of occupied
//! modes strictly below m)`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::basis::FockBasis;
use crate::fock::vector::{FockVector, NORM_TOL};

/// A single creation (`dagger = true`) or annihilation factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderOp {
    pub mode: usize,
    pub dagger: bool,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }
}

/// Apply a single ladder operator to an occupation word.
///
/// Returns `None` when the word is annihilated (creating on an occupied
/// mode or annihilating an empty one), otherwise the flipped word together
/// with the fermionic sign.
#[inline]
pub fn apply_ladder(word: u64, mode: usize, dagger: bool) -> Option<(u64, f64)> {
    let bit = 1u64 << mode;
    let occupied = word & bit != 0;
    if dagger == occupied {
        return None;
    }
    let below = (word & (bit - 1)).count_ones();
    let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((word ^ bit, sign))
}

/// Apply an ordered factor string to a word; the rightmost factor acts first.
#[inline]
pub fn apply_factors(word: u64, factors: &[LadderOp]) -> Option<(u64, f64)> {
    let mut w = word;
    let mut sign = 1.0;
    for f in factors.iter().rev() {
        let (next, s) = apply_ladder(w, f.mode, f.dagger)?;
        w = next;
        sign *= s;
    }
    Some((w, sign))
}

/// One coefficient-weighted string of ladder factors. An empty factor list
/// is the identity times the coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTerm {
    pub coefficient: Complex64,
    pub factors: Vec<LadderOp>,
}

impl OperatorTerm {
    pub fn new(coefficient: Complex64, factors: Vec<LadderOp>) -> Self {
        Self {
            coefficient,
            factors,
        }
    }

    /// Net particle-number change produced by this term.
    fn number_change(&self) -> i64 {
        self.factors
            .iter()
            .map(|f| if f.dagger { 1 } else { -1 })
            .sum()
    }

    fn adjoint(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| LadderOp {
                mode: f.mode,
                dagger: !f.dagger,
            })
            .collect();
        Self {
            coefficient: self.coefficient.conj(),
            factors,
        }
    }
}

/// A sum of coefficient-weighted creation/annihilation strings.
#[derive(Debug, Clone, Default)]
pub struct SecondQuantizedOperator {
    terms: Vec<OperatorTerm>,
    hermitian: bool,
}

impl SecondQuantizedOperator {
    pub fn new(terms: Vec<OperatorTerm>) -> Self {
        Self {
            terms,
            hermitian: false,
        }
    }

    /// Same as [`new`](Self::new) but asserts the operator is hermitian; the
    /// assertion is verified whenever the operator is materialized.
    pub fn hermitian(terms: Vec<OperatorTerm>) -> Self {
        Self {
            terms,
            hermitian: true,
        }
    }

    pub fn identity(coefficient: Complex64) -> Self {
        Self::hermitian(vec![OperatorTerm::new(coefficient, vec![])])
    }

    /// Number operator `c†_m c_m`.
    pub fn number(mode: usize) -> Self {
        Self::hermitian(vec![OperatorTerm::new(
            Complex64::ONE,
            vec![LadderOp::create(mode), LadderOp::annihilate(mode)],
        )])
    }

    /// Total number operator over `modes` modes.
    pub fn total_number(modes: usize) -> Self {
        let terms = (0..modes)
            .map(|m| {
                OperatorTerm::new(
                    Complex64::ONE,
                    vec![LadderOp::create(m), LadderOp::annihilate(m)],
                )
            })
            .collect();
        Self::hermitian(terms)
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn set_hermitian(mut self, hermitian: bool) -> Self {
        self.hermitian = hermitian;
        self
    }

    pub fn max_mode(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|f| f.mode))
            .max()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(OperatorTerm::adjoint).collect(),
            hermitian: self.hermitian,
        }
    }

    /// `self + other`, concatenating term lists.
    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self {
            terms,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    /// `self + self†`, the usual `+ h.c.` completion.
    pub fn plus_adjoint(&self) -> Self {
        let mut op = self.add(&self.adjoint());
        op.hermitian = true;
        op
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| OperatorTerm::new(t.coefficient * factor, t.factors.clone()))
            .collect();
        Self {
            terms,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    /// Operator product; factor strings concatenate left-to-right.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                factors.extend_from_slice(&b.factors);
                terms.push(OperatorTerm::new(a.coefficient * b.coefficient, factors));
            }
        }
        Self {
            terms,
            hermitian: false,
        }
    }

    /// True when every term creates as many particles as it annihilates.
    pub fn conserves_number(&self) -> bool {
        self.terms.iter().all(|t| t.number_change() == 0)
    }

    /// True when every term changes the particle number by an even amount.
    pub fn conserves_parity(&self) -> bool {
        self.terms.iter().all(|t| t.number_change() % 2 == 0)
    }

    fn check_modes(&self, basis: &FockBasis) -> Result<()> {
        if let Some(max) = self.max_mode() {
            if max >= basis.mode_count() {
                return Err(Error::ModeOutOfRange {
                    mode: max,
                    modes: basis.mode_count(),
                });
            }
        }
        Ok(())
    }

    /// Linear action on a state vector; exact up to floating point.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let basis = v.basis();
        self.check_modes(basis)?;
        if basis.sector_particles().is_some() && !self.conserves_number() {
            return Err(Error::OperatorLeavesSector);
        }
        let mut out = FockVector::zeros(Arc::clone(basis));
        let out_amps = out.amplitudes_mut();
        for (idx, &amp) in v.amplitudes().iter().enumerate() {
            if amp == Complex64::ZERO {
                continue;
            }
            let word = basis.word(idx);
            for term in &self.terms {
                if let Some((new_word, sign)) = apply_factors(word, &term.factors) {
                    match basis.index_of(new_word) {
                        Some(j) => out_amps[j] += term.coefficient * sign * amp,
                        None => return Err(Error::OperatorLeavesSector),
                    }
                }
            }
        }
        Ok(out)
    }

    /// `<v|op|v>` for a normalized vector.
    pub fn expectation(&self, v: &FockVector) -> Result<Complex64> {
        let deviation = (v.norm() - 1.0).abs();
        if deviation >= NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        let w = self.apply(v)?;
        Ok(v.inner(&w))
    }

    /// Dense matrix with entry `(r, c) = <basis_r|op|basis_c>`.
    pub fn materialize_dense(
        &self,
        basis: &Arc<FockBasis>,
        cap: usize,
    ) -> Result<DMatrix<Complex64>> {
        let dim = basis.len();
        if dim > cap {
            return Err(Error::DimensionOverflow { dim, cap });
        }
        self.check_modes(basis)?;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (col, &word) in basis.words().iter().enumerate() {
            for term in &self.terms {
                if let Some((new_word, sign)) = apply_factors(word, &term.factors) {
                    if let Some(row) = basis.index_of(new_word) {
                        m[(row, col)] += term.coefficient * sign;
                    }
                }
            }
        }
        if self.hermitian {
            let deviation = hermiticity_deviation(&m);
            if deviation > 1e-12 {
                return Err(Error::NotHermitian { deviation });
            }
        }
        Ok(m)
    }

    /// Sparse matrix over the basis, storing only structural nonzeros.
    pub fn materialize_sparse(&self, basis: &Arc<FockBasis>, cap: usize) -> Result<SparseMatrix> {
        let dim = basis.len();
        if dim > cap {
            return Err(Error::DimensionOverflow { dim, cap });
        }
        self.check_modes(basis)?;
        // Column-major triplets, then compress.
        let mut cols: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for (col, &word) in basis.words().iter().enumerate() {
            let entries = &mut cols[col];
            for term in &self.terms {
                if let Some((new_word, sign)) = apply_factors(word, &term.factors) {
                    if let Some(row) = basis.index_of(new_word) {
                        entries.push((row, term.coefficient * sign));
                    }
                }
            }
            entries.sort_by_key(|e| e.0);
            entries.dedup_by(|later, first| {
                if later.0 == first.0 {
                    first.1 += later.1;
                    true
                } else {
                    false
                }
            });
            entries.retain(|e| e.1 != Complex64::ZERO);
        }
        Ok(SparseMatrix::from_columns(dim, cols))
    }
}

/// Largest absolute deviation of a matrix from its conjugate transpose.
pub fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            let d = (m[(r, c)] - m[(c, r)].conj()).norm();
            if d > max {
                max = d;
            }
        }
    }
    max
}

/// Compressed sparse column storage used by the iterative solver.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    dim: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    fn from_columns(dim: usize, cols: Vec<Vec<(usize, Complex64)>>) -> Self {
        let nnz = cols.iter().map(Vec::len).sum();
        let mut col_ptr = Vec::with_capacity(dim + 1);
        let mut row_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        col_ptr.push(0);
        for col in cols {
            for (r, v) in col {
                row_idx.push(r);
                values.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        Self {
            dim,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `out = A * v`.
    #[allow(clippy::needless_range_loop)]
    pub fn matvec(&self, v: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(v.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        out.fill(Complex64::ZERO);
        for col in 0..self.dim {
            let amp = v[col];
            if amp == Complex64::ZERO {
                continue;
            }
            for k in self.col_ptr[col]..self.col_ptr[col + 1] {
                out[self.row_idx[k]] += self.values[k] * amp;
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for col in 0..self.dim {
            for k in self.col_ptr[col]..self.col_ptr[col + 1] {
                m[(self.row_idx[k], col)] += self.values[k];
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn full(m: usize) -> Arc<FockBasis> {
        Arc::new(FockBasis::full(m).unwrap())
    }

    /// Independent sign oracle: occupations as a boolean list, explicit
    /// count of occupied modes below the acted index.
    fn naive_ladder(word: u64, mode: usize, dagger: bool) -> Option<(u64, f64)> {
        let occ: Vec<bool> = (0..64).map(|k| word >> k & 1 == 1).collect();
        if dagger && occ[mode] || !dagger && !occ[mode] {
            return None;
        }
        let below = occ[..mode].iter().filter(|&&b| b).count();
        let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
        Some((word ^ (1 << mode), sign))
    }

    #[test]
    fn vacuum_creation() {
        assert_eq!(apply_ladder(0b0000, 1, true), Some((0b0010, 1.0)));
    }

    #[test]
    fn pauli_exclusion() {
        assert_eq!(apply_ladder(0b0011, 1, true), None);
        assert_eq!(apply_ladder(0b0100, 2, true), None);
        assert_eq!(apply_ladder(0b0000, 3, false), None);
    }

    #[test]
    fn annihilation_sign_counts_bits_below() {
        // One occupied mode below index 1 gives sign -1.
        assert_eq!(apply_ladder(0b0011, 1, false), Some((0b0001, -1.0)));
        assert_eq!(naive_ladder(0b0011, 1, false), Some((0b0001, -1.0)));
    }

    #[test]
    fn ladder_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let word = rng.random::<u64>() & 0xFFFF;
            let mode = rng.random_range(0..16);
            let dagger = rng.random::<bool>();
            assert_eq!(apply_ladder(word, mode, dagger), naive_ladder(word, mode, dagger));
        }
    }

    #[test]
    fn number_operator_eigenvector() {
        let b = full(4);
        let v = FockVector::basis_word(Arc::clone(&b), 0b0100).unwrap();
        let n2 = SecondQuantizedOperator::number(2);
        let w = n2.apply(&v).unwrap();
        assert!((v.inner(&w) - Complex64::ONE).norm() < 1e-15);
        let n0 = SecondQuantizedOperator::number(0);
        let w0 = n0.apply(&v).unwrap();
        assert!(w0.norm() < 1e-15);
    }

    #[test]
    fn hopping_moves_a_particle() {
        // (c†_0 c_1 + c†_1 c_0) |mode 1> = |mode 0>
        let b = full(2);
        let hop = SecondQuantizedOperator::hermitian(vec![
            OperatorTerm::new(
                Complex64::ONE,
                vec![LadderOp::create(0), LadderOp::annihilate(1)],
            ),
            OperatorTerm::new(
                Complex64::ONE,
                vec![LadderOp::create(1), LadderOp::annihilate(0)],
            ),
        ]);
        let v = FockVector::basis_word(Arc::clone(&b), 0b10).unwrap();
        let w = hop.apply(&v).unwrap();
        let expect = FockVector::basis_word(b, 0b01).unwrap();
        assert!((expect.inner(&w) - Complex64::ONE).norm() < 1e-15);
        assert!((w.norm() - 1.0).abs() < 1e-15);
    }

    fn random_operator(modes: usize, terms: usize, rng: &mut ChaCha8Rng) -> SecondQuantizedOperator {
        let mut list = Vec::new();
        for _ in 0..terms {
            let len = rng.random_range(1..=3);
            let factors: Vec<LadderOp> = (0..len)
                .map(|_| LadderOp {
                    mode: rng.random_range(0..modes),
                    dagger: rng.random::<bool>(),
                })
                .collect();
            let coeff = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            list.push(OperatorTerm::new(coeff, factors));
        }
        SecondQuantizedOperator::new(list)
    }

    fn random_vector(basis: &Arc<FockBasis>, rng: &mut ChaCha8Rng) -> FockVector {
        let amps: Vec<Complex64> = (0..basis.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        FockVector::from_amplitudes(Arc::clone(basis), amps)
            .unwrap()
            .normalized()
            .unwrap()
    }

    #[test]
    fn apply_matches_dense_matvec() {
        let b = full(6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let op = random_operator(6, 5, &mut rng);
            let v = random_vector(&b, &mut rng);
            let applied = op.apply(&v).unwrap();
            let m = op.materialize_dense(&b, 4096).unwrap();
            let dv = nalgebra::DVector::from_column_slice(v.amplitudes());
            let prod = &m * dv;
            for (a, p) in applied.amplitudes().iter().zip(prod.iter()) {
                assert!((a - p).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn expectation_matches_dense_quadratic_form() {
        let b = full(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let op = random_operator(5, 6, &mut rng).plus_adjoint();
        let v = random_vector(&b, &mut rng);
        let e = op.expectation(&v).unwrap();
        assert!(e.im.abs() < 1e-12, "hermitian expectation must be real");
        let m = op.materialize_dense(&b, 4096).unwrap();
        let dv = nalgebra::DVector::from_column_slice(v.amplitudes());
        let q = dv.dotc(&(&m * &dv));
        assert!((e - q).norm() < 1e-12);
    }

    #[test]
    fn expectation_trivials() {
        let b = full(4);
        let vac = FockVector::basis_word(Arc::clone(&b), 0).unwrap();
        let n1 = SecondQuantizedOperator::number(1);
        assert!(n1.expectation(&vac).unwrap().norm() < 1e-15);

        let all = FockVector::basis_word(Arc::clone(&b), 0b1111).unwrap();
        let ntot = SecondQuantizedOperator::total_number(4);
        assert!((ntot.expectation(&all).unwrap().re - 4.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_unnormalized() {
        let b = full(2);
        let v = FockVector::from_amplitudes(b, vec![Complex64::new(2.0, 0.0); 4]).unwrap();
        let n = SecondQuantizedOperator::number(0);
        assert!(matches!(
            n.expectation(&v),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn sector_violation_detected() {
        let b = Arc::new(FockBasis::sector(4, 2).unwrap());
        let v = FockVector::basis_word(Arc::clone(&b), 0b0011).unwrap();
        let create = SecondQuantizedOperator::new(vec![OperatorTerm::new(
            Complex64::ONE,
            vec![LadderOp::create(3)],
        )]);
        assert!(matches!(create.apply(&v), Err(Error::OperatorLeavesSector)));
    }

    #[test]
    fn number_conserving_ops_preserve_population() {
        let b = full(6);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            // Balanced strings conserve particle number word by word.
            let m0 = rng.random_range(0..6);
            let m1 = rng.random_range(0..6);
            let op = SecondQuantizedOperator::new(vec![OperatorTerm::new(
                Complex64::ONE,
                vec![LadderOp::create(m0), LadderOp::annihilate(m1)],
            )]);
            assert!(op.conserves_number());
            for &word in b.words() {
                if let Some((w, _)) = apply_factors(word, &op.terms()[0].factors) {
                    assert_eq!(w.count_ones(), word.count_ones());
                }
            }
        }
    }

    #[test]
    fn sparse_and_dense_materializations_agree() {
        let b = full(6);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let op = random_operator(6, 8, &mut rng).plus_adjoint();
        let dense = op.materialize_dense(&b, 4096).unwrap();
        let sparse = op.materialize_sparse(&b, 4096).unwrap();
        let reconstructed = sparse.to_dense();
        let diff = (&dense - &reconstructed).map(|z| z.norm()).max();
        assert!(diff < 1e-12);

        let v = random_vector(&b, &mut rng);
        let mut out = vec![Complex64::ZERO; b.len()];
        sparse.matvec(v.amplitudes(), &mut out);
        let dv = nalgebra::DVector::from_column_slice(v.amplitudes());
        let prod = &dense * dv;
        for (a, p) in out.iter().zip(prod.iter()) {
            assert!((a - p).norm() < 1e-12);
        }
    }

    #[test]
    fn dimension_cap_guard() {
        let b = full(8);
        let op = SecondQuantizedOperator::number(0);
        assert!(matches!(
            op.materialize_dense(&b, 100),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn hermitian_flag_is_checked_at_materialization() {
        let b = full(2);
        let raising = SecondQuantizedOperator::hermitian(vec![OperatorTerm::new(
            Complex64::ONE,
            vec![LadderOp::create(0)],
        )]);
        assert!(matches!(
            raising.materialize_dense(&b, 16),
            Err(Error::NotHermitian { .. })
        ));
    }
}
