//! Ground states and low-lying spectra of materialized Hamiltonians.
//!
//! Operators that conserve particle number are diagonalized sector by
//! sector; operators that only conserve fermion parity are split into the
//! two parity blocks. Dense diagonalization is used up to
//! [`SolverOptions::dense_cap`]; larger blocks fall back to Lanczos with
//! full reorthogonalization.

pub mod lanczos;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockVector, SecondQuantizedOperator};

pub use lanczos::{lanczos_lowest, LanczosStats};

/// Knobs shared by [`ground_state`] and [`low_spectrum`].
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Largest block dimension handled by dense diagonalization.
    pub dense_cap: usize,
    /// Energy window within which eigenvalues count as degenerate.
    pub degeneracy_tol: f64,
    /// Residual contract `|Hv - Ev| < residual_tol * max(1, |E|)`.
    pub residual_tol: f64,
    /// Accept a degenerate ground state and return the deterministic
    /// representative with the lowest basis-index support.
    pub allow_tie_break: bool,
    /// Iteration budget for the Lanczos path.
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            dense_cap: 4096,
            degeneracy_tol: 1e-9,
            residual_tol: 1e-10,
            allow_tie_break: false,
            max_iterations: 600,
        }
    }
}

/// Eigenvalues and eigenvectors in ascending energy order.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<FockVector>,
    pub ground_degeneracy: usize,
    pub degeneracy_tol: f64,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_state(&self) -> &FockVector {
        &self.eigenvectors[0]
    }
}

/// Lowest eigenpair with its degeneracy count.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub vector: FockVector,
    pub degeneracy: usize,
    pub tie_break_used: bool,
}

/// One symmetry block: parent-basis indices plus the block sub-basis.
struct Block {
    parent_indices: Vec<usize>,
    basis: Arc<FockBasis>,
}

fn split_blocks(basis: &Arc<FockBasis>, op: &SecondQuantizedOperator) -> Result<Vec<Block>> {
    let mode_count = basis.mode_count();
    let group_by: Option<fn(u64) -> u32> = if basis.sector_particles().is_some() {
        None
    } else if op.conserves_number() {
        Some(|w: u64| w.count_ones())
    } else if op.conserves_parity() {
        Some(|w: u64| w.count_ones() % 2)
    } else {
        None
    };

    let Some(key) = group_by else {
        return Ok(vec![Block {
            parent_indices: (0..basis.len()).collect(),
            basis: Arc::clone(basis),
        }]);
    };

    let keys: Vec<u32> = basis.words().iter().map(|&w| key(w)).collect();
    let mut distinct: Vec<u32> = keys.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() == 1 {
        return Ok(vec![Block {
            parent_indices: (0..basis.len()).collect(),
            basis: Arc::clone(basis),
        }]);
    }

    let mut blocks = Vec::with_capacity(distinct.len());
    for d in distinct {
        let parent_indices: Vec<usize> = keys
            .iter()
            .enumerate()
            .filter_map(|(i, &k)| (k == d).then_some(i))
            .collect();
        let words: Vec<u64> = parent_indices.iter().map(|&i| basis.word(i)).collect();
        blocks.push(Block {
            parent_indices,
            basis: Arc::new(FockBasis::from_words(mode_count, words)?),
        });
    }
    Ok(blocks)
}

/// Eigenpair tagged with enough information to embed it back.
struct BlockPair {
    energy: f64,
    block: usize,
    column: Vec<Complex64>,
}

fn embed(basis: &Arc<FockBasis>, block: &Block, column: &[Complex64]) -> FockVector {
    let mut v = FockVector::zeros(Arc::clone(basis));
    let amps = v.amplitudes_mut();
    for (local, &parent) in block.parent_indices.iter().enumerate() {
        amps[parent] = column[local];
    }
    v
}

fn solve_block(
    op: &SecondQuantizedOperator,
    block: &Block,
    k: usize,
    opts: &SolverOptions,
) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let dim = block.basis.len();
    let want = k.min(dim);
    if dim <= opts.dense_cap {
        let m = op.materialize_dense(&block.basis, opts.dense_cap)?;
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        Ok(order
            .into_iter()
            .take(want)
            .map(|i| {
                let col: Vec<Complex64> = eig.eigenvectors.column(i).iter().copied().collect();
                (eig.eigenvalues[i], col)
            })
            .collect())
    } else {
        let sparse = op.materialize_sparse(&block.basis, usize::MAX)?;
        let (vals, vecs, _) = lanczos_lowest(
            |v, out| sparse.matvec(v, out),
            dim,
            want,
            opts.max_iterations,
            1e-13,
        )?;
        Ok(vals.into_iter().zip(vecs).collect())
    }
}

fn require_hermitian_flag(op: &SecondQuantizedOperator) -> Result<()> {
    if !op.is_flagged_hermitian() {
        return Err(Error::InvalidParameter(
            "eigensolver requires an operator flagged hermitian".into(),
        ));
    }
    Ok(())
}

/// The `k` lowest eigenpairs of `op` over `basis`, in ascending order.
pub fn low_spectrum(
    op: &SecondQuantizedOperator,
    basis: &Arc<FockBasis>,
    k: usize,
    opts: &SolverOptions,
) -> Result<SpectrumResult> {
    require_hermitian_flag(op)?;
    let dim = basis.len();
    if dim == 0 {
        return Err(Error::InvalidParameter("empty basis".into()));
    }
    if k == 0 || k > dim {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs from a dimension-{dim} space"
        )));
    }

    let blocks = split_blocks(basis, op)?;
    let mut pairs: Vec<BlockPair> = Vec::new();
    for (bi, block) in blocks.iter().enumerate() {
        // Every block may in principle hold all k lowest levels.
        for (energy, column) in solve_block(op, block, k, opts)? {
            pairs.push(BlockPair {
                energy,
                block: bi,
                column,
            });
        }
    }
    pairs.sort_by(|a, b| {
        a.energy
            .partial_cmp(&b.energy)
            .unwrap()
            .then(a.block.cmp(&b.block))
    });
    pairs.truncate(k);

    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.energy).collect();
    let eigenvectors: Vec<FockVector> = pairs
        .iter()
        .map(|p| embed(basis, &blocks[p.block], &p.column))
        .collect();

    let ground_degeneracy = eigenvalues
        .iter()
        .take_while(|&&e| e - eigenvalues[0] <= opts.degeneracy_tol)
        .count();

    // Residual contract on the ground pair.
    let residual = residual_norm(op, &eigenvectors[0], eigenvalues[0])?;
    let bound = opts.residual_tol * eigenvalues[0].abs().max(1.0);
    if residual > bound {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual,
        });
    }

    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        ground_degeneracy,
        degeneracy_tol: opts.degeneracy_tol,
    })
}

/// Complete spectrum of `op` over `basis`; all blocks must fit the dense cap.
pub fn full_spectrum(
    op: &SecondQuantizedOperator,
    basis: &Arc<FockBasis>,
    opts: &SolverOptions,
) -> Result<SpectrumResult> {
    low_spectrum(op, basis, basis.len(), opts)
}

/// Lowest eigenpair of a hermitian operator.
///
/// A degenerate lowest level is an error unless
/// [`SolverOptions::allow_tie_break`] is set, in which case the returned
/// representative is the degenerate eigenvector whose support starts at the
/// lowest basis index.
pub fn ground_state(
    op: &SecondQuantizedOperator,
    basis: &Arc<FockBasis>,
    opts: &SolverOptions,
) -> Result<GroundState> {
    let probe = basis.len().clamp(1, 4);
    let spectrum = low_spectrum(op, basis, probe, opts)?;
    let degeneracy = spectrum.ground_degeneracy;
    if degeneracy > 1 && !opts.allow_tie_break {
        return Err(Error::DegenerateGroundState {
            count: degeneracy,
            tol: opts.degeneracy_tol,
        });
    }

    let mut chosen = 0usize;
    let mut tie_break_used = false;
    if degeneracy > 1 {
        tie_break_used = true;
        let support = |v: &FockVector| -> usize {
            v.amplitudes()
                .iter()
                .position(|a| a.norm() > 1e-8)
                .unwrap_or(usize::MAX)
        };
        chosen = (0..degeneracy)
            .min_by_key(|&i| support(&spectrum.eigenvectors[i]))
            .unwrap();
    }

    Ok(GroundState {
        energy: spectrum.eigenvalues[chosen],
        vector: spectrum.eigenvectors[chosen].clone(),
        degeneracy,
        tie_break_used,
    })
}

/// `|Hv - Ev|` for an eigenpair candidate.
pub fn residual_norm(
    op: &SecondQuantizedOperator,
    vector: &FockVector,
    energy: f64,
) -> Result<f64> {
    let hv = op.apply(vector)?;
    Ok(hv.add_scaled(vector, Complex64::new(-energy, 0.0)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{LadderOp, OperatorTerm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hopping_chain(sites: usize, t: f64) -> SecondQuantizedOperator {
        let mut terms = Vec::new();
        for i in 0..sites - 1 {
            terms.push(OperatorTerm::new(
                Complex64::new(-t, 0.0),
                vec![LadderOp::create(i), LadderOp::annihilate(i + 1)],
            ));
            terms.push(OperatorTerm::new(
                Complex64::new(-t, 0.0),
                vec![LadderOp::create(i + 1), LadderOp::annihilate(i)],
            ));
        }
        SecondQuantizedOperator::hermitian(terms)
    }

    fn pairing_two_modes(delta: f64) -> SecondQuantizedOperator {
        SecondQuantizedOperator::new(vec![OperatorTerm::new(
            Complex64::new(delta, 0.0),
            vec![LadderOp::create(0), LadderOp::create(1)],
        )])
        .plus_adjoint()
    }

    #[test]
    fn two_site_hopping_single_particle() {
        let basis = Arc::new(FockBasis::sector(2, 1).unwrap());
        let h = hopping_chain(2, 1.0);
        let gs = ground_state(&h, &basis, &SolverOptions::default()).unwrap();
        assert!((gs.energy + 1.0).abs() < 1e-12);
        assert_eq!(gs.degeneracy, 1);
    }

    #[test]
    fn two_mode_pairing_ground_state() {
        // Hand diagonalization in the {|00>, |11>} block gives E0 = -1 and
        // the ground state (|00> - |11>)/sqrt(2).
        let basis = Arc::new(FockBasis::full(2).unwrap());
        let h = pairing_two_modes(1.0);
        let gs = ground_state(&h, &basis, &SolverOptions::default()).unwrap();
        assert!((gs.energy + 1.0).abs() < 1e-12);
        let amps = gs.vector.amplitudes();
        let inv = 1.0 / 2.0f64.sqrt();
        // Compare up to global phase via the overlap with the expected state.
        let overlap = (amps[0] * inv - amps[3] * inv).norm();
        assert!((overlap - 1.0).abs() < 1e-12, "overlap {overlap}");
    }

    #[test]
    fn open_chain_dispersion() {
        // Single-particle energies of the open chain: -2 t cos(pi j / (M+1)).
        let m = 4;
        let basis = Arc::new(FockBasis::sector(m, 1).unwrap());
        let h = hopping_chain(m, 1.0);
        let spec = low_spectrum(&h, &basis, 4, &SolverOptions::default()).unwrap();
        let mut expected: Vec<f64> = (1..=m)
            .map(|j| -2.0 * (std::f64::consts::PI * j as f64 / (m as f64 + 1.0)).cos())
            .collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in spec.eigenvalues.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn k_equals_one_matches_ground_state() {
        let basis = Arc::new(FockBasis::sector(5, 2).unwrap());
        let h = hopping_chain(5, 0.7);
        let spec = low_spectrum(&h, &basis, 1, &SolverOptions::default()).unwrap();
        let gs = ground_state(&h, &basis, &SolverOptions::default()).unwrap();
        assert_eq!(spec.eigenvalues[0], gs.energy);
    }

    #[test]
    fn full_spectrum_matches_dense_oracle() {
        let basis = Arc::new(FockBasis::full(4).unwrap());
        let h = hopping_chain(4, 1.0);
        let spec = full_spectrum(&h, &basis, &SolverOptions::default()).unwrap();
        assert_eq!(spec.len(), 16);
        // Dense oracle without block splitting.
        let m = h.materialize_dense(&basis, 4096).unwrap();
        let eig = m.symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in spec.eigenvalues.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn lanczos_path_matches_dense_on_interacting_chain() {
        // 8-site chain with nearest-neighbor repulsion at half filling.
        let sites = 8;
        let basis = Arc::new(FockBasis::sector(sites, 4).unwrap());
        let mut terms = hopping_chain(sites, 1.0).terms().to_vec();
        for i in 0..sites - 1 {
            terms.push(OperatorTerm::new(
                Complex64::new(0.5, 0.0),
                vec![
                    LadderOp::create(i),
                    LadderOp::annihilate(i),
                    LadderOp::create(i + 1),
                    LadderOp::annihilate(i + 1),
                ],
            ));
        }
        let h = SecondQuantizedOperator::hermitian(terms);

        let dense = ground_state(&h, &basis, &SolverOptions::default()).unwrap();
        let forced = SolverOptions {
            dense_cap: 8, // force the iterative path
            ..SolverOptions::default()
        };
        let iterative = ground_state(&h, &basis, &forced).unwrap();
        assert!(
            (dense.energy - iterative.energy).abs() < 1e-9,
            "dense {} vs lanczos {}",
            dense.energy,
            iterative.energy
        );
        let r = residual_norm(&h, &iterative.vector, iterative.energy).unwrap();
        assert!(r < 1e-10 * dense.energy.abs().max(1.0));
    }

    #[test]
    fn degenerate_ground_state_is_surfaced() {
        // Two decoupled sites at equal energy, one particle: exact two-fold
        // degeneracy.
        let basis = Arc::new(FockBasis::sector(2, 1).unwrap());
        let h = SecondQuantizedOperator::hermitian(vec![
            OperatorTerm::new(
                Complex64::new(1.0, 0.0),
                vec![LadderOp::create(0), LadderOp::annihilate(0)],
            ),
            OperatorTerm::new(
                Complex64::new(1.0, 0.0),
                vec![LadderOp::create(1), LadderOp::annihilate(1)],
            ),
        ]);
        let err = ground_state(&h, &basis, &SolverOptions::default());
        assert!(matches!(err, Err(Error::DegenerateGroundState { .. })));

        let opts = SolverOptions {
            allow_tie_break: true,
            ..SolverOptions::default()
        };
        let gs = ground_state(&h, &basis, &opts).unwrap();
        assert!(gs.tie_break_used);
        assert_eq!(gs.degeneracy, 2);
    }

    #[test]
    fn non_hermitian_flag_rejected() {
        let basis = Arc::new(FockBasis::full(2).unwrap());
        let op = SecondQuantizedOperator::new(vec![OperatorTerm::new(
            Complex64::ONE,
            vec![LadderOp::create(0)],
        )]);
        assert!(ground_state(&op, &basis, &SolverOptions::default()).is_err());
    }

    #[test]
    fn variational_bound_holds() {
        let basis = Arc::new(FockBasis::sector(6, 3).unwrap());
        let h = hopping_chain(6, 1.0);
        let gs = ground_state(&h, &basis, &SolverOptions::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let amps: Vec<Complex64> = (0..basis.len())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let v = FockVector::from_amplitudes(Arc::clone(&basis), amps)
                .unwrap()
                .normalized()
                .unwrap();
            let e = h.expectation(&v).unwrap().re;
            assert!(gs.energy <= e + 1e-9);
        }
    }

    #[test]
    fn eigenvalues_are_bitwise_reproducible() {
        let basis = Arc::new(FockBasis::sector(6, 3).unwrap());
        let h = hopping_chain(6, 1.0);
        let a = low_spectrum(&h, &basis, 5, &SolverOptions::default()).unwrap();
        let b = low_spectrum(&h, &basis, 5, &SolverOptions::default()).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
    }

    #[test]
    fn eigenvectors_orthonormal() {
        let basis = Arc::new(FockBasis::full(3).unwrap());
        let h = hopping_chain(3, 1.0);
        let spec = full_spectrum(&h, &basis, &SolverOptions::default()).unwrap();
        for i in 0..spec.len() {
            for j in i..spec.len() {
                let ip = spec.eigenvectors[i].inner(&spec.eigenvectors[j]);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip.norm() - expect).abs() < 1e-10, "<{i}|{j}> = {ip}");
            }
        }
    }
}
