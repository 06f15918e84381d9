//! Frequency-kernel quadrature: the correlator from a tabulated spectrum of
//! symmetrized current cross-correlations.
//!
//! The kernel is
//! `K(w) = (exp(-i w tau) - exp(-gamma tau)) / (1 - exp(-gamma tau)) *
//!  gamma^2 / (w^2 + gamma^2)`.
//! Over the whole line a constant spectrum integrates to zero exactly: the
//! oscillatory part contributes the residue mass `(gamma/2) exp(-gamma
//! tau)`, which cancels against the flat part's `exp(-gamma tau) *
//! (gamma/2)`. The quadrature therefore splits the tabulated spectrum into
//! its edge value (integrated in closed form, contributing nothing) plus a
//! decaying remainder that is integrated cell by cell.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tabulated symmetrized spectrum `(omega, S(omega))` on a strictly
/// increasing grid.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    omegas: Vec<f64>,
    values: Vec<f64>,
}

impl SpectrumTable {
    pub fn new(omegas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if omegas.len() != values.len() {
            return Err(Error::SpectrumTable {
                reason: format!(
                    "{} grid points but {} values",
                    omegas.len(),
                    values.len()
                ),
            });
        }
        if omegas.len() < 8 {
            return Err(Error::SpectrumTable {
                reason: "need at least 8 grid points".into(),
            });
        }
        if !omegas.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::SpectrumTable {
                reason: "omega grid must be strictly increasing".into(),
            });
        }
        if omegas.iter().chain(values.iter()).any(|x| !x.is_finite()) {
            return Err(Error::SpectrumTable {
                reason: "grid and values must be finite".into(),
            });
        }
        Ok(Self { omegas, values })
    }

    /// Sample an analytic spectrum on an explicit grid.
    pub fn sample(f: impl Fn(f64) -> f64, omegas: Vec<f64>) -> Result<Self> {
        let values = omegas.iter().map(|&w| f(w)).collect();
        Self::new(omegas, values)
    }

    /// Parse the two-column text format; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut omegas = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut parts = body.split_whitespace();
            let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
                return Err(Error::SpectrumTable {
                    reason: format!("line {}: expected two columns", lineno + 1),
                });
            };
            if parts.next().is_some() {
                return Err(Error::SpectrumTable {
                    reason: format!("line {}: more than two columns", lineno + 1),
                });
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse::<f64>().map_err(|_| Error::SpectrumTable {
                    reason: format!("line {}: cannot parse `{s}` as a number", lineno + 1),
                })
            };
            omegas.push(parse(a)?);
            values.push(parse(b)?);
        }
        Self::new(omegas, values)
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Kernel parameters: filter width `gamma`, integration window `tau`, and
/// the requested relative quadrature tolerance.
#[derive(Debug, Clone, Copy)]
pub struct KernelParams {
    pub gamma: f64,
    pub tau: f64,
    pub tolerance: f64,
}

impl KernelParams {
    pub fn new(gamma: f64, tau: f64) -> Result<Self> {
        if gamma <= 0.0 || tau <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma and tau must be positive, got ({gamma}, {tau})"
            )));
        }
        let product = gamma * tau;
        if !(1e-6..=1e3).contains(&product) {
            return Err(Error::InvalidParameter(format!(
                "gamma*tau = {product} leaves the kernel ill-conditioned"
            )));
        }
        Ok(Self {
            gamma,
            tau,
            tolerance: 1e-8,
        })
    }

    /// The matched-window regime `tau = 1/gamma`.
    pub fn regime_default(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0 / gamma)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// Quadrature output: the correlator, the imaginary residue diagnostic and
/// the grid-refinement error estimate.
#[derive(Debug, Clone, Copy)]
pub struct KernelAlpha {
    pub alpha: f64,
    pub imaginary_residue: f64,
    pub error_estimate: f64,
    /// Edge value of the tabulated spectrum, integrated in closed form.
    pub edge_value: f64,
}

const GAUSS_NODES: [f64; 7] = [
    -0.949_107_912_342_758_5,
    -0.741_531_185_599_394_5,
    -0.405_845_151_377_397_2,
    0.0,
    0.405_845_151_377_397_2,
    0.741_531_185_599_394_5,
    0.949_107_912_342_758_5,
];
const GAUSS_WEIGHTS: [f64; 7] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_7,
    0.129_484_966_168_869_7,
];

/// Three-point slope estimates on a possibly non-uniform grid.
fn slopes(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    m[0] = (f[1] - f[0]) / (x[1] - x[0]);
    m[n - 1] = (f[n - 1] - f[n - 2]) / (x[n - 1] - x[n - 2]);
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let d0 = (f[i] - f[i - 1]) / h0;
        let d1 = (f[i + 1] - f[i]) / h1;
        m[i] = (d1 * h0 + d0 * h1) / (h0 + h1);
    }
    m
}

/// Integrate `kernel(w) * interpolant(w)` over the grid with a cubic
/// Hermite interpolant per cell and 7-point Gauss-Legendre quadrature.
fn integrate_cells(
    x: &[f64],
    f: &[f64],
    kernel: &impl Fn(f64) -> Complex64,
) -> Complex64 {
    let m = slopes(x, f);
    let mut total = Complex64::ZERO;
    for i in 0..x.len() - 1 {
        let h = x[i + 1] - x[i];
        let half = 0.5 * h;
        let mid = 0.5 * (x[i] + x[i + 1]);
        let mut cell = Complex64::ZERO;
        for (node, weight) in GAUSS_NODES.iter().zip(GAUSS_WEIGHTS.iter()) {
            let w = mid + half * node;
            let t = (w - x[i]) / h;
            let t2 = t * t;
            let t3 = t2 * t;
            let value = f[i] * (2.0 * t3 - 3.0 * t2 + 1.0)
                + f[i + 1] * (-2.0 * t3 + 3.0 * t2)
                + h * m[i] * (t3 - 2.0 * t2 + t)
                + h * m[i + 1] * (t3 - t2);
            cell += kernel(w) * value * weight;
        }
        total += cell * half;
    }
    total
}

fn coarsen(x: &[f64], f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let mut cx = Vec::with_capacity(n / 2 + 2);
    let mut cf = Vec::with_capacity(n / 2 + 2);
    let mut i = 0;
    while i < n {
        cx.push(x[i]);
        cf.push(f[i]);
        i += 2;
    }
    if *cx.last().unwrap() < x[n - 1] {
        cx.push(x[n - 1]);
        cf.push(f[n - 1]);
    }
    (cx, cf)
}

/// The correlator from a tabulated symmetrized spectrum:
/// `alpha = Int dw/2pi K(w) S(w) / (mean0 * mean1)`.
///
/// The grid must cover `|w| <= 50 gamma`, be symmetric, and carry an even
/// spectrum; outside the grid the spectrum is continued by its edge value,
/// whose kernel integral vanishes in closed form.
pub fn alpha_from_spectrum(
    table: &SpectrumTable,
    means: (f64, f64),
    params: &KernelParams,
) -> Result<KernelAlpha> {
    let (mean0, mean1) = means;
    if mean0 == 0.0 || mean1 == 0.0 {
        return Err(Error::VanishingProbeCurrent {
            mean: mean0.abs().min(mean1.abs()),
        });
    }
    let gamma = params.gamma;
    let tau = params.tau;

    let x = table.omegas();
    let f = table.values();
    let n = x.len();

    let coverage = 50.0 * gamma;
    if x[0] > -coverage * (1.0 - 1e-12) || x[n - 1] < coverage * (1.0 - 1e-12) {
        return Err(Error::SpectrumTable {
            reason: format!(
                "grid must cover |omega| <= 50 gamma = {coverage}, spans [{}, {}]",
                x[0],
                x[n - 1]
            ),
        });
    }

    // Symmetric grid, even spectrum.
    let omega_scale = x[n - 1].abs().max(1.0);
    let value_scale = f.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    for i in 0..n {
        let j = n - 1 - i;
        if (x[i] + x[j]).abs() > 1e-9 * omega_scale {
            return Err(Error::SpectrumTable {
                reason: format!("grid is not symmetric at omega = {}", x[i]),
            });
        }
        if (f[i] - f[j]).abs() > 1e-9 * value_scale + 1e-14 {
            return Err(Error::SpectrumTable {
                reason: format!(
                    "spectrum must be even in omega (symmetrized correlator); \
                     S({}) = {} but S({}) = {}",
                    x[i], f[i], x[j], f[j]
                ),
            });
        }
    }

    let edge_value = 0.5 * (f[0] + f[n - 1]);
    let remainder: Vec<f64> = f.iter().map(|&v| v - edge_value).collect();

    let decay = (-gamma * tau).exp();
    let norm = 1.0 / (1.0 - decay);
    let two_pi = 2.0 * std::f64::consts::PI;
    let kernel = move |w: f64| -> Complex64 {
        let lorentz = gamma * gamma / (w * w + gamma * gamma);
        let oscillation = Complex64::new(0.0, -w * tau).exp() - decay;
        oscillation * (norm * lorentz / two_pi)
    };

    let fine = integrate_cells(x, &remainder, &kernel);
    let (cx, cf) = coarsen(x, &remainder);
    let coarse = integrate_cells(&cx, &cf, &kernel);
    let error_estimate = (fine - coarse).norm();

    let floor = 1e-14 * (gamma * value_scale + 1e-300);
    if error_estimate > params.tolerance * fine.norm().max(floor) + floor {
        return Err(Error::GridTooCoarse {
            estimate: error_estimate,
            tol: params.tolerance,
            hint: "halve the grid spacing where the spectrum or the kernel varies fastest \
                   (|omega| of order gamma)"
                .into(),
        });
    }

    let denominator = mean0 * mean1;
    let alpha = fine.re / denominator;
    let imaginary_residue = (fine.im / denominator).abs();
    let bound = 1e-8 * alpha.abs() + 1e-12;
    if imaginary_residue > bound {
        return Err(Error::ImaginaryResidue {
            residue: imaginary_residue,
            bound,
        });
    }

    Ok(KernelAlpha {
        alpha,
        imaginary_residue,
        error_estimate: error_estimate / denominator.abs(),
        edge_value,
    })
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    tol: f64,
    whole: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, left, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, right, depth - 1)
}

/// Adaptive quadrature of `gamma^2 / (w^2 + gamma^2) / 2pi` over the whole
/// line, with closed-form tails beyond `50 gamma`. Must reproduce
/// `gamma / 2`.
pub fn kernel_normalization(gamma: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let f = move |w: f64| gamma * gamma / (w * w + gamma * gamma) / two_pi;
    let a = -50.0 * gamma;
    let b = 50.0 * gamma;
    let m = 0.0;
    let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    let core = adaptive_simpson(&f, a, b, f(a), f(m), f(b), 1e-15 * gamma, whole, 48);
    let tail = gamma / std::f64::consts::PI
        * (std::f64::consts::FRAC_PI_2 - 50.0f64.atan());
    core + tail
}
