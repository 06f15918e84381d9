//! C ABI for the occupation-correlation laboratory.
//!
//! Models are opaque handles created by the `entanglab_model_*`
//! constructors and released with [`entanglab_model_release`]. Fallible
//! calls return an [`EntanglabStatus`] code and write their results through
//! out-pointers; the most recent error message is kept per thread and can
//! be copied out with [`entanglab_last_error`].

use std::cell::RefCell;
use std::os::raw::c_char;
use std::sync::Arc;

use entanglab::cone::e1_closed_form;
use entanglab::error::Error;
use entanglab::fock::FockBasis;
use entanglab::models::{
    bcs_uv_oracle, qd_entanglement_formula, ModelConfig, PairSpec, QdFormulaInputs,
};
use entanglab::probes::{
    mode_occupation_correlator, probe_level_correlator, ProbeCharacter, ProbeSpec,
};
use entanglab::solver::{ground_state, SolverOptions};

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into());
}

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntanglabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments violated a documented precondition.
    InvalidArgument = 2,
    /// The computation failed numerically (degeneracy, no convergence,
    /// vanishing probe current, ...).
    Numerical = 3,
}

fn status_of(error: &Error) -> EntanglabStatus {
    match error {
        Error::DegenerateGroundState { .. }
        | Error::NoConvergence { .. }
        | Error::VanishingProbeCurrent { .. }
        | Error::InsufficientSpectrum { .. }
        | Error::StateUndefined { .. }
        | Error::ImaginaryResidue { .. }
        | Error::GridTooCoarse { .. }
        | Error::DegenerateExcitation { .. } => EntanglabStatus::Numerical,
        _ => EntanglabStatus::InvalidArgument,
    }
}

fn fail(error: &Error) -> EntanglabStatus {
    set_last_error(error.to_string());
    status_of(error)
}

/// Opaque model handle.
pub struct EntanglabModel {
    config: ModelConfig,
    built: entanglab::models::BuiltModel,
}

/// Probe character selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntanglabCharacter {
    /// Extracts electrons; observable is the occupation `n`.
    Particle = 0,
    /// Injects electrons; observable is `1 - n`.
    Hole = 1,
}

/// Resonant-level probe description.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EntanglabProbe {
    /// Level energy relative to the chemical potential.
    pub energy: f64,
    /// Filter width; must be positive.
    pub width: f64,
    /// Contact site (mode index for occupation probes).
    pub site: u32,
    /// Tunneling amplitude, used by the resonant-level realization.
    pub coupling: f64,
    pub character: EntanglabCharacter,
}

impl EntanglabProbe {
    fn to_spec(self) -> ProbeSpec {
        let character = match self.character {
            EntanglabCharacter::Particle => ProbeCharacter::Particle,
            EntanglabCharacter::Hole => ProbeCharacter::Hole,
        };
        ProbeSpec {
            energy: self.energy,
            character,
            width: self.width,
            site: self.site as usize,
            coupling: self.coupling,
        }
    }
}

/// Correlator output: the normalized covariance of the two probe
/// observables and, when the correlator is non-negative, the two-state
/// decomposition entropy in nats.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EntanglabAlpha {
    pub alpha: f64,
    pub mean0: f64,
    pub mean1: f64,
    pub covariance: f64,
    pub entanglement: f64,
    /// Nonzero when `entanglement` is populated (alpha >= 0).
    pub has_entanglement: bool,
}

/// Analytic solution of one pairing block.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EntanglabBcs {
    pub u_sq: f64,
    pub v_sq: f64,
    pub alpha: f64,
}

/// Open-dot closed-form outputs.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EntanglabOpenDot {
    pub gamma_bar: f64,
    pub alpha_interaction: f64,
    pub alpha_statistical: f64,
    pub entanglement: f64,
    pub validity: bool,
}

fn build_handle(config: ModelConfig) -> *mut EntanglabModel {
    match config.build() {
        Ok(built) => Box::into_raw(Box::new(EntanglabModel { config, built })),
        Err(e) => {
            set_last_error(e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Open tight-binding chain. Returns null on invalid parameters.
#[no_mangle]
pub extern "C" fn entanglab_model_free_chain(sites: u32, hopping: f64) -> *mut EntanglabModel {
    build_handle(ModelConfig::FreeChain {
        sites: sites as usize,
        hopping,
    })
}

/// Chain with nearest-neighbor density-density repulsion.
#[no_mangle]
pub extern "C" fn entanglab_model_interacting_chain(
    sites: u32,
    hopping: f64,
    interaction: f64,
) -> *mut EntanglabModel {
    build_handle(ModelConfig::InteractingChain {
        sites: sites as usize,
        hopping,
        interaction,
    })
}

/// Independent two-mode pairing blocks from parallel `xi`/`delta` arrays.
///
/// # Safety
/// `xis` and `deltas` must point to `pairs` readable doubles each.
#[no_mangle]
pub unsafe extern "C" fn entanglab_model_pairing_toy(
    xis: *const f64,
    deltas: *const f64,
    pairs: usize,
) -> *mut EntanglabModel {
    if xis.is_null() || deltas.is_null() {
        set_last_error("null pairing parameter array");
        return std::ptr::null_mut();
    }
    let xis = std::slice::from_raw_parts(xis, pairs);
    let deltas = std::slice::from_raw_parts(deltas, pairs);
    let pairs = xis
        .iter()
        .zip(deltas)
        .map(|(&xi, &delta)| PairSpec { xi, delta })
        .collect();
    build_handle(ModelConfig::PairingToy { pairs })
}

/// Normal chain tunnel-coupled to a paired segment.
#[no_mangle]
pub extern "C" fn entanglab_model_proximity_chain(
    normal_sites: u32,
    sc_sites: u32,
    hopping: f64,
    pairing_gap: f64,
    tunneling: f64,
) -> *mut EntanglabModel {
    build_handle(ModelConfig::ProximityChain {
        normal_sites: normal_sites as usize,
        sc_sites: sc_sites as usize,
        hopping,
        pairing_gap,
        tunneling,
    })
}

/// Release a model handle. Null is ignored.
///
/// # Safety
/// `model` must be a pointer previously returned by a constructor and not
/// yet released.
#[no_mangle]
pub unsafe extern "C" fn entanglab_model_release(model: *mut EntanglabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Total fermionic mode count of a model; zero for null handles.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn entanglab_model_mode_count(model: *const EntanglabModel) -> u32 {
    model.as_ref().map_or(0, |m| m.built.mode_count() as u32)
}

unsafe fn model_basis(
    handle: &EntanglabModel,
    sector: i64,
) -> Result<Arc<FockBasis>, Error> {
    let modes = handle.built.mode_count();
    if sector >= 0 {
        if !handle.built.operator.conserves_number() {
            return Err(Error::InvalidParameter(
                "sector restriction requires a number-conserving model".into(),
            ));
        }
        Ok(Arc::new(FockBasis::sector(modes, sector as u32)?))
    } else {
        Ok(Arc::new(FockBasis::full(modes)?))
    }
}

/// Lowest eigenvalue of the model. `sector` fixes the particle number for
/// number-conserving models; pass -1 for the whole space.
///
/// # Safety
/// `model` must be a live handle; `out_energy` must point to a writable
/// double.
#[no_mangle]
pub unsafe extern "C" fn entanglab_ground_energy(
    model: *const EntanglabModel,
    sector: i64,
    out_energy: *mut f64,
) -> EntanglabStatus {
    let (Some(handle), Some(out)) = (model.as_ref(), out_energy.as_mut()) else {
        set_last_error("null argument");
        return EntanglabStatus::NullPointer;
    };
    let basis = match model_basis(handle, sector) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    match ground_state(&handle.built.operator, &basis, &SolverOptions::default()) {
        Ok(gs) => {
            *out = gs.energy;
            EntanglabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

fn alpha_out(result: &entanglab::probes::AlphaResult) -> EntanglabAlpha {
    let entanglement = if result.alpha >= 0.0 {
        e1_closed_form(result.alpha).ok()
    } else {
        None
    };
    EntanglabAlpha {
        alpha: result.alpha,
        mean0: result.mean0,
        mean1: result.mean1,
        covariance: result.covariance,
        entanglement: entanglement.unwrap_or(0.0),
        has_entanglement: entanglement.is_some(),
    }
}

/// Occupation correlator of two probes resolved to eigenmodes by energy
/// (site as tie-break), evaluated in the model's ground state. `sector`
/// as in [`entanglab_ground_energy`]; `select_tol` bounds the
/// energy-to-mode resolution window.
///
/// # Safety
/// `model` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn entanglab_alpha_mode(
    model: *const EntanglabModel,
    probe0: EntanglabProbe,
    probe1: EntanglabProbe,
    sector: i64,
    select_tol: f64,
    out: *mut EntanglabAlpha,
) -> EntanglabStatus {
    let (Some(handle), Some(out)) = (model.as_ref(), out.as_mut()) else {
        set_last_error("null argument");
        return EntanglabStatus::NullPointer;
    };
    let basis = match model_basis(handle, sector) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let gs = match ground_state(&handle.built.operator, &basis, &SolverOptions::default()) {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };
    match mode_occupation_correlator(
        &gs.vector,
        &handle.built.mode_basis,
        &probe0.to_spec(),
        &probe1.to_spec(),
        select_tol,
    ) {
        Ok(result) => {
            *out = alpha_out(&result);
            EntanglabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Resonant-level correlator: the probes become real levels coupled to the
/// model with their `coupling` amplitudes and the correlator of the level
/// occupations is extrapolated to vanishing coupling.
///
/// # Safety
/// `model` must be a live handle; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn entanglab_alpha_probe_level(
    model: *const EntanglabModel,
    probe0: EntanglabProbe,
    probe1: EntanglabProbe,
    out: *mut EntanglabAlpha,
) -> EntanglabStatus {
    let (Some(handle), Some(out)) = (model.as_ref(), out.as_mut()) else {
        set_last_error("null argument");
        return EntanglabStatus::NullPointer;
    };
    match probe_level_correlator(
        &handle.config,
        &probe0.to_spec(),
        &probe1.to_spec(),
        &SolverOptions::default(),
    ) {
        Ok(result) => {
            *out = alpha_out(&result);
            EntanglabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Two-state decomposition entropy in nats for a non-negative weight ratio.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn entanglab_e1_closed_form(
    alpha: f64,
    out: *mut f64,
) -> EntanglabStatus {
    let Some(out) = out.as_mut() else {
        set_last_error("null argument");
        return EntanglabStatus::NullPointer;
    };
    match e1_closed_form(alpha) {
        Ok(value) => {
            *out = value;
            EntanglabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Analytic single-block pairing solution.
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn entanglab_bcs_uv(
    xi: f64,
    delta: f64,
    out: *mut EntanglabBcs,
) -> EntanglabStatus {
    let Some(out) = out.as_mut() else {
        set_last_error("null argument");
        return EntanglabStatus::NullPointer;
    };
    match bcs_uv_oracle(xi, delta) {
        Ok(p) => {
            *out = EntanglabBcs {
                u_sq: p.u_sq,
                v_sq: p.v_sq,
                alpha: p.alpha,
            };
            EntanglabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Open-dot closed form: harmonic-mean width, interaction-induced and
/// statistical correlators, leading-order entanglement and the dominance
/// flag.
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn entanglab_open_dot(
    channels: u32,
    gamma0: f64,
    gamma1: f64,
    eps0: f64,
    eps1: f64,
    out: *mut EntanglabOpenDot,
) -> EntanglabStatus {
    let Some(out) = out.as_mut() else {
        set_last_error("null argument");
        return EntanglabStatus::NullPointer;
    };
    let inputs = QdFormulaInputs {
        channels: channels as usize,
        gamma0,
        gamma1,
        eps0,
        eps1,
    };
    match qd_entanglement_formula(&inputs) {
        Ok(p) => {
            *out = EntanglabOpenDot {
                gamma_bar: p.gamma_bar,
                alpha_interaction: p.alpha_int,
                alpha_statistical: p.alpha_nonint,
                entanglement: p.e1,
                validity: p.validity,
            };
            EntanglabStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Copy the calling thread's last error message into `buffer` (NUL
/// terminated, truncated to `capacity`). Returns the full message length
/// in bytes, not counting the terminator.
///
/// # Safety
/// `buffer` must point to `capacity` writable bytes, or be null (then only
/// the length is returned).
#[no_mangle]
pub unsafe extern "C" fn entanglab_last_error(
    buffer: *mut c_char,
    capacity: usize,
) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buffer.cast::<u8>(), n);
            *buffer.add(n) = 0;
        }
        bytes.len()
    })
}

/// Static library version string.
#[no_mangle]
pub extern "C" fn entanglab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
