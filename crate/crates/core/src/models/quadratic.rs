//! Quadratic (one-body plus pairing) model data and interaction terms.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{LadderOp, OperatorTerm, SecondQuantizedOperator};

/// One-body hamiltonian `h`, optional antisymmetric pairing matrix and a
/// chemical potential acting as the reference energy for mode filling.
#[derive(Debug, Clone)]
pub struct QuadraticModel {
    hopping: DMatrix<Complex64>,
    pairing: Option<DMatrix<Complex64>>,
    chemical_potential: f64,
}

impl QuadraticModel {
    pub fn new(
        hopping: DMatrix<Complex64>,
        pairing: Option<DMatrix<Complex64>>,
        chemical_potential: f64,
    ) -> Result<Self> {
        if hopping.nrows() != hopping.ncols() {
            return Err(Error::InvalidParameter("hopping matrix must be square".into()));
        }
        let herm_dev = crate::fock::hermiticity_deviation(&hopping);
        if herm_dev > 1e-12 {
            return Err(Error::NotHermitian { deviation: herm_dev });
        }
        if let Some(d) = &pairing {
            if d.nrows() != hopping.nrows() || d.ncols() != hopping.ncols() {
                return Err(Error::DimensionMismatch {
                    got: d.nrows(),
                    expected: hopping.nrows(),
                });
            }
            let antisym_dev = (d + d.transpose()).map(|z| z.norm()).max();
            if antisym_dev > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "pairing matrix must be antisymmetric (deviation {antisym_dev:.3e})"
                )));
            }
        }
        Ok(Self {
            hopping,
            pairing,
            chemical_potential,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.hopping.nrows()
    }

    pub fn hopping(&self) -> &DMatrix<Complex64> {
        &self.hopping
    }

    pub fn pairing(&self) -> Option<&DMatrix<Complex64>> {
        self.pairing.as_ref()
    }

    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential
    }

    /// The number-conserving one-body part with all pairing dropped.
    pub fn number_conserving_part(&self) -> Self {
        Self {
            hopping: self.hopping.clone(),
            pairing: None,
            chemical_potential: self.chemical_potential,
        }
    }

    /// Second-quantized form
    /// `sum_ij h_ij c+_i c_j - mu N + sum_{i<j} (D_ij c+_i c+_j + h.c.)`.
    pub fn to_operator(&self) -> SecondQuantizedOperator {
        let m = self.mode_count();
        let mut terms = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let mut coeff = self.hopping[(i, j)];
                if i == j {
                    coeff -= Complex64::new(self.chemical_potential, 0.0);
                }
                if coeff != Complex64::ZERO {
                    terms.push(OperatorTerm::new(
                        coeff,
                        vec![LadderOp::create(i), LadderOp::annihilate(j)],
                    ));
                }
            }
        }
        if let Some(d) = &self.pairing {
            for i in 0..m {
                for j in i + 1..m {
                    let coeff = d[(i, j)];
                    if coeff != Complex64::ZERO {
                        terms.push(OperatorTerm::new(
                            coeff,
                            vec![LadderOp::create(i), LadderOp::create(j)],
                        ));
                        terms.push(OperatorTerm::new(
                            coeff.conj(),
                            vec![LadderOp::annihilate(j), LadderOp::annihilate(i)],
                        ));
                    }
                }
            }
        }
        SecondQuantizedOperator::hermitian(terms)
    }
}

/// Density-density couplings plus an optional charging term
/// `E_c (N - N0)^2`.
///
/// A pure charging interaction commutes with every eigenmode occupation:
/// within a fixed particle-number sector it only shifts the energy, so the
/// occupation correlator of any probe pair vanishes exactly on such models.
/// Site-basis density-density couplings are the nontrivial interaction.
#[derive(Debug, Clone, Default)]
pub struct InteractionSpec {
    density_density: Vec<(usize, usize, f64)>,
    charging: Option<(f64, f64)>,
}

impl InteractionSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn density_density(couplings: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(i, j, _) in &couplings {
            if i == j {
                return Err(Error::InvalidParameter(format!(
                    "density-density coupling requires distinct modes, got ({i}, {j})"
                )));
            }
        }
        Ok(Self {
            density_density: couplings,
            charging: None,
        })
    }

    pub fn with_charging(mut self, e_c: f64, n0: f64) -> Self {
        self.charging = Some((e_c, n0));
        self
    }

    pub fn couplings(&self) -> &[(usize, usize, f64)] {
        &self.density_density
    }

    pub fn charging(&self) -> Option<(f64, f64)> {
        self.charging
    }

    pub fn is_trivial(&self) -> bool {
        self.density_density.iter().all(|&(_, _, v)| v == 0.0)
            && self.charging.is_none_or(|(e_c, _)| e_c == 0.0)
    }

    /// Second-quantized interaction over `modes` modes.
    pub fn to_operator(&self, modes: usize) -> SecondQuantizedOperator {
        let mut terms = Vec::new();
        let number_pair = |a: usize, b: usize| {
            vec![
                LadderOp::create(a),
                LadderOp::annihilate(a),
                LadderOp::create(b),
                LadderOp::annihilate(b),
            ]
        };
        for &(i, j, v) in &self.density_density {
            if v != 0.0 {
                terms.push(OperatorTerm::new(Complex64::new(v, 0.0), number_pair(i, j)));
            }
        }
        if let Some((e_c, n0)) = self.charging {
            if e_c != 0.0 {
                // E_c (N - N0)^2 = E_c N^2 - 2 E_c N0 N + E_c N0^2
                for a in 0..modes {
                    for b in 0..modes {
                        terms.push(OperatorTerm::new(
                            Complex64::new(e_c, 0.0),
                            number_pair(a, b),
                        ));
                    }
                    terms.push(OperatorTerm::new(
                        Complex64::new(-2.0 * e_c * n0, 0.0),
                        vec![LadderOp::create(a), LadderOp::annihilate(a)],
                    ));
                }
                terms.push(OperatorTerm::new(
                    Complex64::new(e_c * n0 * n0, 0.0),
                    vec![],
                ));
            }
        }
        SecondQuantizedOperator::hermitian(terms)
    }
}
