//! Closed-form analytic companions: the two-mode pairing solution and the
//! open-dot entanglement formula.

use crate::error::{Error, Result};

/// Bogoliubov solution of one `(xi, delta)` pairing block.
#[derive(Debug, Clone, Copy)]
pub struct BcsPrediction {
    pub u_sq: f64,
    pub v_sq: f64,
    /// Predicted occupation correlator `u^2 / v^2` for probes on the two
    /// paired modes.
    pub alpha: f64,
}

/// Analytic `u^2`, `v^2` and the paired-mode correlator for a single
/// pairing block: `E = sqrt(xi^2 + delta^2)`, `v^2 = (1 - xi/E)/2`.
pub fn bcs_uv_oracle(xi: f64, delta: f64) -> Result<BcsPrediction> {
    if delta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "pairing amplitude must be non-negative, got {delta}"
        )));
    }
    if xi == 0.0 && delta == 0.0 {
        return Err(Error::InvalidParameter(
            "(xi, delta) = (0, 0) leaves the block undefined".into(),
        ));
    }
    let e = xi.hypot(delta);
    let v_sq = 0.5 * (1.0 - xi / e);
    let u_sq = 1.0 - v_sq;
    if v_sq == 0.0 {
        return Err(Error::EmptyMode { occupation: v_sq });
    }
    Ok(BcsPrediction {
        u_sq,
        v_sq,
        alpha: u_sq / v_sq,
    })
}

/// Inputs of the open-dot formula.
#[derive(Debug, Clone, Copy)]
pub struct QdFormulaInputs {
    /// Number of conduction channels opening the dot.
    pub channels: usize,
    /// Level width of probe 0.
    pub gamma0: f64,
    /// Level width of probe 1.
    pub gamma1: f64,
    /// Level energy of probe 0.
    pub eps0: f64,
    /// Level energy of probe 1; must exceed `eps0`.
    pub eps1: f64,
}

impl QdFormulaInputs {
    pub fn validate(&self) -> Result<()> {
        if self.channels < 1 {
            return Err(Error::InvalidParameter(
                "channel count must be at least 1".into(),
            ));
        }
        if self.gamma0 <= 0.0 || self.gamma1 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "level widths must be positive, got ({}, {})",
                self.gamma0, self.gamma1
            )));
        }
        if self.eps1 <= self.eps0 {
            return Err(Error::InvalidParameter(format!(
                "eps1 must exceed eps0, got ({}, {})",
                self.eps0, self.eps1
            )));
        }
        Ok(())
    }

    pub fn level_splitting(&self) -> f64 {
        self.eps1 - self.eps0
    }
}

/// Open-dot evaluation: harmonic-mean width, interaction-induced and
/// statistical correlators, the leading-order entanglement, and whether the
/// interaction-dominance condition holds.
#[derive(Debug, Clone, Copy)]
pub struct QdPrediction {
    pub gamma_bar: f64,
    pub alpha_int: f64,
    pub alpha_nonint: f64,
    pub e1: f64,
    /// True iff `(gamma0 + gamma1) / (2 (eps1 - eps0)) < 1 / channels`.
    pub validity: bool,
}

/// Closed-form open-dot entanglement:
/// `E1 = (1/N) (gbar/de) (ln(N de / gbar) + 1)` with
/// `gbar^-1 = (gamma0^-1 + gamma1^-1)/2`.
pub fn qd_entanglement_formula(inputs: &QdFormulaInputs) -> Result<QdPrediction> {
    inputs.validate()?;
    let n = inputs.channels as f64;
    let de = inputs.level_splitting();
    let gamma_bar = 2.0 / (1.0 / inputs.gamma0 + 1.0 / inputs.gamma1);
    let alpha_int = gamma_bar / (n * de);
    let alpha_nonint = -inputs.gamma0 * inputs.gamma1 / (de * de);
    let e1 = (gamma_bar / de) / n * ((n * de / gamma_bar).ln() + 1.0);
    let validity = (inputs.gamma0 + inputs.gamma1) / (2.0 * de) < 1.0 / n;
    Ok(QdPrediction {
        gamma_bar,
        alpha_int,
        alpha_nonint,
        e1,
        validity,
    })
}
