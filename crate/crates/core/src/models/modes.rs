//! Single-particle eigenmodes of the number-conserving quadratic part.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{LadderOp, OperatorTerm, SecondQuantizedOperator};
use crate::models::quadratic::QuadraticModel;

/// Gap below which two single-particle levels count as degenerate.
const LEVEL_DEGENERACY_TOL: f64 = 1e-10;

/// Unitary eigenmode transform of a one-body hamiltonian, with energies in
/// ascending order and the Fermi level derived from the chemical potential.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    transform: DMatrix<Complex64>,
    energies: Vec<f64>,
    fermi_index: usize,
    fermi_energy: f64,
    degenerate_levels: bool,
}

impl ModeBasis {
    pub fn mode_count(&self) -> usize {
        self.energies.len()
    }

    /// Unitary matrix whose columns are the eigenmodes.
    pub fn transform(&self) -> &DMatrix<Complex64> {
        &self.transform
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Number of modes strictly below the chemical potential.
    pub fn fermi_index(&self) -> usize {
        self.fermi_index
    }

    pub fn fermi_energy(&self) -> f64 {
        self.fermi_energy
    }

    /// True when two levels coincide within 1e-10; mode identity is then
    /// resolved by the deterministic secondary sort.
    pub fn has_degenerate_levels(&self) -> bool {
        self.degenerate_levels
    }

    /// Eigenmode annihilator `psi_k = sum_i conj(U_ik) c_i`.
    pub fn mode_annihilator(&self, k: usize) -> SecondQuantizedOperator {
        let terms = (0..self.mode_count())
            .filter_map(|i| {
                let c = self.transform[(i, k)].conj();
                (c != Complex64::ZERO)
                    .then(|| OperatorTerm::new(c, vec![LadderOp::annihilate(i)]))
            })
            .collect();
        SecondQuantizedOperator::new(terms)
    }

    /// Eigenmode creator `psi+_k = sum_i U_ik c+_i`.
    pub fn mode_creator(&self, k: usize) -> SecondQuantizedOperator {
        let terms = (0..self.mode_count())
            .filter_map(|i| {
                let c = self.transform[(i, k)];
                (c != Complex64::ZERO).then(|| OperatorTerm::new(c, vec![LadderOp::create(i)]))
            })
            .collect();
        SecondQuantizedOperator::new(terms)
    }

    /// Eigenmode occupation `n_k = psi+_k psi_k` expressed in the site basis.
    pub fn mode_number_operator(&self, k: usize) -> SecondQuantizedOperator {
        let m = self.mode_count();
        let mut terms = Vec::with_capacity(m * m);
        for i in 0..m {
            let ui = self.transform[(i, k)];
            if ui == Complex64::ZERO {
                continue;
            }
            for j in 0..m {
                let uj = self.transform[(j, k)].conj();
                let coeff = ui * uj;
                if coeff != Complex64::ZERO {
                    terms.push(OperatorTerm::new(
                        coeff,
                        vec![LadderOp::create(i), LadderOp::annihilate(j)],
                    ));
                }
            }
        }
        SecondQuantizedOperator::hermitian(terms)
    }
}

fn is_exactly_diagonal(h: &DMatrix<Complex64>) -> bool {
    for r in 0..h.nrows() {
        for c in 0..h.ncols() {
            if r != c && h[(r, c)] != Complex64::ZERO {
                return false;
            }
        }
    }
    true
}

/// Deterministic per-column phase fix: the largest-magnitude entry is made
/// real and positive.
fn fix_phases(u: &mut DMatrix<Complex64>) {
    for c in 0..u.ncols() {
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for r in 0..u.nrows() {
            let n = u[(r, c)].norm();
            if n > best_norm + 1e-15 {
                best_norm = n;
                best = r;
            }
        }
        let pivot = u[(best, c)];
        if pivot.norm() > 0.0 {
            let phase = pivot / pivot.norm();
            for r in 0..u.nrows() {
                u[(r, c)] /= phase;
            }
        }
    }
}

/// Lexicographic comparison of eigenvector columns, used as the secondary
/// sort for degenerate levels.
fn column_lex_cmp(
    u: &DMatrix<Complex64>,
    a: usize,
    b: usize,
) -> std::cmp::Ordering {
    for r in 0..u.nrows() {
        let (x, y) = (u[(r, a)], u[(r, b)]);
        match x.re.partial_cmp(&y.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
        match x.im.partial_cmp(&y.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Eigen-decomposition of the one-body part of a quadratic model.
///
/// Energies come out ascending; exactly diagonal inputs keep their site
/// identity (the transform is then a permutation), and degenerate levels are
/// ordered by the lexicographic secondary sort and flagged.
pub fn single_particle_modes(model: &QuadraticModel) -> Result<ModeBasis> {
    let h = model.hopping();
    let m = h.nrows();
    let mu = model.chemical_potential();

    let (mut energies, mut transform): (Vec<f64>, DMatrix<Complex64>) = if is_exactly_diagonal(h) {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            h[(a, a)]
                .re
                .partial_cmp(&h[(b, b)].re)
                .unwrap()
                .then(a.cmp(&b))
        });
        let energies: Vec<f64> = order.iter().map(|&i| h[(i, i)].re).collect();
        let mut u = DMatrix::<Complex64>::zeros(m, m);
        for (col, &site) in order.iter().enumerate() {
            u[(site, col)] = Complex64::ONE;
        }
        (energies, u)
    } else {
        let eig = h.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut u = DMatrix::<Complex64>::zeros(m, m);
        for (col, &old) in order.iter().enumerate() {
            u.set_column(col, &eig.eigenvectors.column(old));
        }
        (energies, u)
    };

    fix_phases(&mut transform);

    // Resolve degenerate levels deterministically.
    let mut degenerate = false;
    let mut i = 0;
    while i < m {
        let mut j = i + 1;
        while j < m && (energies[j] - energies[i]).abs() < LEVEL_DEGENERACY_TOL {
            j += 1;
        }
        if j - i > 1 {
            degenerate = true;
            let mut cols: Vec<usize> = (i..j).collect();
            cols.sort_by(|&a, &b| column_lex_cmp(&transform, a, b));
            let copy = transform.clone();
            let energy_copy = energies.clone();
            for (offset, &src) in cols.iter().enumerate() {
                transform.set_column(i + offset, &copy.column(src));
                energies[i + offset] = energy_copy[src];
            }
        }
        i = j;
    }

    let fermi_index = energies.iter().filter(|&&e| e < mu).count();

    Ok(ModeBasis {
        transform,
        energies,
        fermi_index,
        fermi_energy: mu,
        degenerate_levels: degenerate,
    })
}
