//! C ABI over the mblvqe simulator: opaque handles, integer status codes,
//! and out-parameters. The matching header lives at `include/mblvqe.h` and
//! is maintained by hand; `tests/header_sync.rs` keeps it honest.
//!
//! Conventions:
//! - Every fallible call returns [`MblvqeStatus`]; `MBLVQE_OK` is 0.
//! - On failure, a thread-local message is readable via
//!   [`mblvqe_last_error_message`] until the next failing call on the same
//!   thread.
//! - `*_new` constructors hand ownership to the caller; release with the
//!   matching `*_free`, which accepts null.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mblvqe::ansatz::{
    build_hea_circuit, build_mbl_circuit, sample_hea_params, sample_mbl_params,
    sample_mbl_params_tied, Regime, RegimeLabel,
};
use mblvqe::entropy::von_neumann_entropy;
use mblvqe::error::Error;
use mblvqe::gradient::adjoint_gradient;
use mblvqe::otoc::otoc_exact;
use mblvqe::pauli::Pauli;
use mblvqe::vqe::{build_xxz, exact_ground_energy, XxzSpec};
use mblvqe::{Circuit, PauliHamiltonian, StateVector};

/// Status codes shared with the C header.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MblvqeStatus {
    Ok = 0,
    NullPointer = 1,
    ContractViolation = 2,
    ResourceCap = 3,
    ConfigError = 4,
    NonFinite = 5,
    Panic = 6,
}

/// Sampling intervals in radians, mirrored as a plain C struct.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MblvqeRegime {
    pub g_low: f64,
    pub g_high: f64,
    pub j_low: f64,
    pub j_high: f64,
    pub h_low: f64,
    pub h_high: f64,
}

impl MblvqeRegime {
    fn to_regime(self) -> Regime {
        Regime {
            label: RegimeLabel::Custom,
            g_low: self.g_low,
            g_high: self.g_high,
            j_low: self.j_low,
            j_high: self.j_high,
            h_low: self.h_low,
            h_high: self.h_high,
        }
    }

    fn from_regime(r: Regime) -> Self {
        MblvqeRegime {
            g_low: r.g_low,
            g_high: r.g_high,
            j_low: r.j_low,
            j_high: r.j_high,
            h_low: r.h_low,
            h_high: r.h_high,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn fail(status: MblvqeStatus, message: &str) -> MblvqeStatus {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
    status
}

fn fail_error(err: Error) -> MblvqeStatus {
    let status = match &err {
        Error::ResourceCap { .. } => MblvqeStatus::ResourceCap,
        Error::Contract(_) => MblvqeStatus::ContractViolation,
        Error::Config(_) => MblvqeStatus::ConfigError,
        Error::NonFinite(_) => MblvqeStatus::NonFinite,
        Error::Io(_) => MblvqeStatus::ConfigError,
    };
    fail(status, &err.to_string())
}

/// Run `body` trapping panics, which must not unwind across the C boundary.
fn guarded(body: impl FnOnce() -> MblvqeStatus) -> MblvqeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(MblvqeStatus::Panic, "internal panic"),
    }
}

macro_rules! require_nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            return fail(MblvqeStatus::NullPointer, concat!(stringify!($ptr), " is null"));
        }
    };
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mblvqe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn mblvqe_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn mblvqe_regime_pm() -> MblvqeRegime {
    MblvqeRegime::from_regime(Regime::pm())
}

#[no_mangle]
pub extern "C" fn mblvqe_regime_pm_window() -> MblvqeRegime {
    MblvqeRegime::from_regime(Regime::pm_window())
}

#[no_mangle]
pub extern "C" fn mblvqe_regime_thermal() -> MblvqeRegime {
    MblvqeRegime::from_regime(Regime::thermal())
}

#[no_mangle]
pub extern "C" fn mblvqe_regime_dtc() -> MblvqeRegime {
    MblvqeRegime::from_regime(Regime::dtc())
}

#[no_mangle]
pub extern "C" fn mblvqe_regime_dtc_window() -> MblvqeRegime {
    MblvqeRegime::from_regime(Regime::dtc_window())
}

/// Pin the kick angle to a single value (radians).
///
/// # Safety
/// `regime` must point to a valid, writable `mblvqe_regime`.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_regime_set_g_point(regime: *mut MblvqeRegime, g: f64) {
    if let Some(r) = regime.as_mut() {
        r.g_low = g;
        r.g_high = g;
    }
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Allocate |0...0> on `num_qubits` qubits.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_state_new_zero(
    num_qubits: usize,
    out: *mut *mut StateVector,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(out);
        match StateVector::zero(num_qubits) {
            Ok(state) => {
                *out = Box::into_raw(Box::new(state));
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// # Safety
/// `state` must be null or a handle produced by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_state_free(state: *mut StateVector) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_state_num_qubits(state: *const StateVector) -> usize {
    state.as_ref().map_or(0, |s| s.num_qubits())
}

/// # Safety
/// `state` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_state_norm(
    state: *const StateVector,
    out: *mut f64,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(state);
        require_nonnull!(out);
        *out = (*state).norm();
        MblvqeStatus::Ok
    })
}

/// Amplitude of one basis index as (re, im).
///
/// # Safety
/// `state` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_state_amplitude(
    state: *const StateVector,
    index: u64,
    re: *mut f64,
    im: *mut f64,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(state);
        require_nonnull!(re);
        require_nonnull!(im);
        let s = &*state;
        if index as usize >= s.dim() {
            return fail(
                MblvqeStatus::ContractViolation,
                &format!("basis index {index} out of range for {} qubits", s.num_qubits()),
            );
        }
        let amp = s.amplitude(index as usize);
        *re = amp.re;
        *im = amp.im;
        MblvqeStatus::Ok
    })
}

/// Bipartite von Neumann entropy (bits) across qubits [0, cut) | [cut, N).
///
/// # Safety
/// `state` must be a live handle; `bits` writable.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_state_entropy(
    state: *const StateVector,
    cut: usize,
    bits: *mut f64,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(state);
        require_nonnull!(bits);
        match von_neumann_entropy(&*state, cut) {
            Ok(s) => {
                *bits = s;
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Circuits and parameters
// ---------------------------------------------------------------------------

/// Build the kicked-Ising MBL circuit (RZZ, RZ, RX per block).
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_circuit_mbl(
    num_qubits: usize,
    depth_blocks: usize,
    out: *mut *mut Circuit,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(out);
        match build_mbl_circuit(num_qubits, depth_blocks) {
            Ok(circuit) => {
                *out = Box::into_raw(Box::new(circuit));
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// Build the hardware-efficient baseline (random-axis rotations + CNOT
/// ladder per layer).
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_circuit_hea(
    num_qubits: usize,
    depth_layers: usize,
    axis_seed: u64,
    out: *mut *mut Circuit,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(out);
        match build_hea_circuit(num_qubits, depth_layers, axis_seed) {
            Ok(circuit) => {
                *out = Box::into_raw(Box::new(circuit));
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_circuit_free(circuit: *mut Circuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// # Safety
/// `circuit` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_circuit_num_params(circuit: *const Circuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.num_params())
}

/// # Safety
/// `circuit` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_circuit_num_gates(circuit: *const Circuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.gates().len())
}

/// Sample MBL parameters into `out_params` (length must equal the
/// circuit's slot count: depth * (3N - 1), ordered J, h, g per block).
/// `tied` != 0 copies block 0's draw to every block.
///
/// # Safety
/// `regime` must be readable; `out_params` must have space for `out_len`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_sample_mbl_params(
    num_qubits: usize,
    depth_blocks: usize,
    regime: *const MblvqeRegime,
    seed: u64,
    tied: c_int,
    out_params: *mut f64,
    out_len: usize,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(regime);
        require_nonnull!(out_params);
        let r = (*regime).to_regime();
        let draw = if tied != 0 {
            sample_mbl_params_tied(num_qubits, depth_blocks, &r, seed)
        } else {
            sample_mbl_params(num_qubits, depth_blocks, &r, seed)
        };
        match draw {
            Ok(params) => {
                let flat = params.flatten();
                if flat.len() != out_len {
                    return fail(
                        MblvqeStatus::ContractViolation,
                        &format!("parameter buffer holds {out_len}, circuit needs {}", flat.len()),
                    );
                }
                std::ptr::copy_nonoverlapping(flat.as_ptr(), out_params, flat.len());
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// Sample HEA parameters (uniform [0, 2 pi)) into `out_params`.
///
/// # Safety
/// `out_params` must have space for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_sample_hea_params(
    num_slots: usize,
    seed: u64,
    out_params: *mut f64,
    out_len: usize,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(out_params);
        if num_slots != out_len {
            return fail(
                MblvqeStatus::ContractViolation,
                &format!("parameter buffer holds {out_len}, expected {num_slots}"),
            );
        }
        match sample_hea_params(num_slots, seed) {
            Ok(params) => {
                std::ptr::copy_nonoverlapping(params.as_ptr(), out_params, params.len());
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// Apply the circuit to the state in place.
///
/// # Safety
/// `circuit` and `state` must be live handles; `params` must hold
/// `params_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_circuit_apply(
    circuit: *const Circuit,
    params: *const f64,
    params_len: usize,
    state: *mut StateVector,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(circuit);
        require_nonnull!(state);
        if params_len > 0 {
            require_nonnull!(params);
        }
        let params: &[f64] =
            if params_len == 0 { &[] } else { std::slice::from_raw_parts(params, params_len) };
        match (*circuit).apply_to(&mut *state, params) {
            Ok(()) => MblvqeStatus::Ok,
            Err(e) => fail_error(e),
        }
    })
}

// ---------------------------------------------------------------------------
// Hamiltonians and measurements
// ---------------------------------------------------------------------------

/// Open XXZ chain: H = -J sum (XX + YY) + Delta sum ZZ.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_xxz_new(
    num_qubits: usize,
    j: f64,
    delta: f64,
    out: *mut *mut PauliHamiltonian,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(out);
        match build_xxz(&XxzSpec { num_qubits, j, delta }) {
            Ok(h) => {
                *out = Box::into_raw(Box::new(h));
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// # Safety
/// `hamiltonian` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_hamiltonian_free(hamiltonian: *mut PauliHamiltonian) {
    if !hamiltonian.is_null() {
        drop(Box::from_raw(hamiltonian));
    }
}

/// <psi|H|psi>.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_expectation(
    hamiltonian: *const PauliHamiltonian,
    state: *const StateVector,
    out: *mut f64,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(hamiltonian);
        require_nonnull!(state);
        require_nonnull!(out);
        match (*hamiltonian).expectation(&*state) {
            Ok(value) => {
                *out = value;
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// Smallest eigenvalue of H (dense/Lanczos, capped at 12 qubits).
///
/// # Safety
/// `hamiltonian` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_exact_ground_energy(
    hamiltonian: *const PauliHamiltonian,
    out: *mut f64,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(hamiltonian);
        require_nonnull!(out);
        match exact_ground_energy(&*hamiltonian) {
            Ok(value) => {
                *out = value;
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// Energy and full gradient of <0|U^dag H U|0> by adjoint differentiation.
/// `grad_len` must equal the circuit's slot count.
///
/// # Safety
/// Handles must be live; `params` holds `params_len` doubles; `energy_out`
/// writable; `grad_out` has space for `grad_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_adjoint_gradient(
    circuit: *const Circuit,
    params: *const f64,
    params_len: usize,
    hamiltonian: *const PauliHamiltonian,
    energy_out: *mut f64,
    grad_out: *mut f64,
    grad_len: usize,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(circuit);
        require_nonnull!(hamiltonian);
        require_nonnull!(energy_out);
        require_nonnull!(grad_out);
        if params_len > 0 {
            require_nonnull!(params);
        }
        let circuit = &*circuit;
        if grad_len != circuit.num_params() {
            return fail(
                MblvqeStatus::ContractViolation,
                &format!("gradient buffer holds {grad_len}, circuit has {}", circuit.num_params()),
            );
        }
        let params: &[f64] =
            if params_len == 0 { &[] } else { std::slice::from_raw_parts(params, params_len) };
        match adjoint_gradient(circuit, params, &*hamiltonian) {
            Ok(result) => {
                *energy_out = result.energy;
                std::ptr::copy_nonoverlapping(result.grad.as_ptr(), grad_out, grad_len);
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}

/// Exact X-X out-of-time-ordered correlator between two sites.
///
/// # Safety
/// `circuit` must be a live handle; `params` holds `params_len` doubles;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mblvqe_otoc_exact_xx(
    circuit: *const Circuit,
    params: *const f64,
    params_len: usize,
    site_i: usize,
    site_j: usize,
    out: *mut f64,
) -> MblvqeStatus {
    guarded(|| {
        require_nonnull!(circuit);
        require_nonnull!(out);
        if params_len > 0 {
            require_nonnull!(params);
        }
        let params: &[f64] =
            if params_len == 0 { &[] } else { std::slice::from_raw_parts(params, params_len) };
        match otoc_exact(&*circuit, params, site_i, site_j, Pauli::X, Pauli::X) {
            Ok(value) => {
                *out = value;
                MblvqeStatus::Ok
            }
            Err(e) => fail_error(e),
        }
    })
}
