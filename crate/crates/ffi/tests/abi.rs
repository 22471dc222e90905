//! Exercises the C ABI end to end through the exported functions, checking
//! values against the Rust library directly.

use std::ffi::CStr;
use std::ptr;

use mblvqe::ansatz::{build_mbl_circuit, sample_mbl_params, Regime};
use mblvqe::gradient::adjoint_gradient;
use mblvqe::vqe::{build_xxz, XxzSpec};
use mblvqe::{Circuit, PauliHamiltonian, StateVector};

use mblvqe_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mblvqe_last_error_message()).to_string_lossy().into_owned() }
}

#[test]
fn version_is_a_nonempty_c_string() {
    let version = unsafe { CStr::from_ptr(mblvqe_version()) };
    assert!(!version.to_str().unwrap().is_empty());
}

#[test]
fn state_lifecycle_and_amplitudes() {
    unsafe {
        let mut state: *mut StateVector = ptr::null_mut();
        assert_eq!(mblvqe_state_new_zero(3, &mut state), MblvqeStatus::Ok);
        assert_eq!(mblvqe_state_num_qubits(state), 3);

        let mut norm = 0.0;
        assert_eq!(mblvqe_state_norm(state, &mut norm), MblvqeStatus::Ok);
        assert!((norm - 1.0).abs() < 1e-12);

        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(mblvqe_state_amplitude(state, 0, &mut re, &mut im), MblvqeStatus::Ok);
        assert_eq!((re, im), (1.0, 0.0));

        // Out-of-range index reports a contract violation with a message.
        assert_eq!(
            mblvqe_state_amplitude(state, 8, &mut re, &mut im),
            MblvqeStatus::ContractViolation
        );
        assert!(last_error().contains("out of range"));

        let mut bits = -1.0;
        assert_eq!(mblvqe_state_entropy(state, 1, &mut bits), MblvqeStatus::Ok);
        assert_eq!(bits, 0.0);

        mblvqe_state_free(state);
        mblvqe_state_free(ptr::null_mut());
    }
}

#[test]
fn qubit_cap_maps_to_resource_status() {
    unsafe {
        let mut state: *mut StateVector = ptr::null_mut();
        assert_eq!(mblvqe_state_new_zero(21, &mut state), MblvqeStatus::ResourceCap);
        assert!(last_error().contains("21"));
        assert_eq!(mblvqe_state_new_zero(0, &mut state), MblvqeStatus::ContractViolation);
    }
}

#[test]
fn null_pointers_are_rejected_not_dereferenced() {
    unsafe {
        assert_eq!(mblvqe_state_new_zero(2, ptr::null_mut()), MblvqeStatus::NullPointer);
        let mut out = 0.0;
        assert_eq!(mblvqe_state_norm(ptr::null(), &mut out), MblvqeStatus::NullPointer);
        assert_eq!(mblvqe_expectation(ptr::null(), ptr::null(), &mut out), MblvqeStatus::NullPointer);
    }
}

#[test]
fn circuit_sampling_evolution_and_gradient_match_the_library() {
    let n = 4;
    let depth = 3;
    unsafe {
        let mut circuit: *mut Circuit = ptr::null_mut();
        assert_eq!(mblvqe_circuit_mbl(n, depth, &mut circuit), MblvqeStatus::Ok);
        let num_params = mblvqe_circuit_num_params(circuit);
        assert_eq!(num_params, depth * (3 * n - 1));
        assert_eq!(mblvqe_circuit_num_gates(circuit), depth * (3 * n - 1));

        let regime = mblvqe_regime_pm();
        let mut params = vec![0.0f64; num_params];
        assert_eq!(
            mblvqe_sample_mbl_params(n, depth, &regime, 42, 0, params.as_mut_ptr(), params.len()),
            MblvqeStatus::Ok
        );
        let expected = sample_mbl_params(n, depth, &Regime::pm(), 42).unwrap().flatten();
        assert_eq!(params, expected);

        let mut h: *mut PauliHamiltonian = ptr::null_mut();
        assert_eq!(mblvqe_xxz_new(n, 1.0, 1.0, &mut h), MblvqeStatus::Ok);

        let mut state: *mut StateVector = ptr::null_mut();
        assert_eq!(mblvqe_state_new_zero(n, &mut state), MblvqeStatus::Ok);
        assert_eq!(
            mblvqe_circuit_apply(circuit, params.as_ptr(), params.len(), state),
            MblvqeStatus::Ok
        );

        let mut energy = 0.0;
        assert_eq!(mblvqe_expectation(h, state, &mut energy), MblvqeStatus::Ok);

        let mut grad = vec![0.0f64; num_params];
        let mut adjoint_energy = 0.0;
        assert_eq!(
            mblvqe_adjoint_gradient(
                circuit,
                params.as_ptr(),
                params.len(),
                h,
                &mut adjoint_energy,
                grad.as_mut_ptr(),
                grad.len()
            ),
            MblvqeStatus::Ok
        );
        assert!((energy - adjoint_energy).abs() < 1e-12);

        let reference_circuit = build_mbl_circuit(n, depth).unwrap();
        let reference_h = build_xxz(&XxzSpec { num_qubits: n, j: 1.0, delta: 1.0 }).unwrap();
        let reference = adjoint_gradient(&reference_circuit, &expected, &reference_h).unwrap();
        assert!((reference.energy - adjoint_energy).abs() < 1e-12);
        for (a, b) in grad.iter().zip(&reference.grad) {
            assert!((a - b).abs() < 1e-12);
        }

        // Wrong-size gradient buffer is refused before any write.
        let mut short = vec![0.0f64; 2];
        assert_eq!(
            mblvqe_adjoint_gradient(
                circuit,
                params.as_ptr(),
                params.len(),
                h,
                &mut adjoint_energy,
                short.as_mut_ptr(),
                short.len()
            ),
            MblvqeStatus::ContractViolation
        );

        let mut ground = 0.0;
        assert_eq!(mblvqe_exact_ground_energy(h, &mut ground), MblvqeStatus::Ok);
        assert!(energy >= ground - 1e-9);

        let mut otoc = 0.0;
        assert_eq!(
            mblvqe_otoc_exact_xx(circuit, params.as_ptr(), params.len(), 0, n - 1, &mut otoc),
            MblvqeStatus::Ok
        );
        assert!(otoc.abs() <= 1.0 + 1e-9);

        mblvqe_state_free(state);
        mblvqe_hamiltonian_free(h);
        mblvqe_circuit_free(circuit);
    }
}

#[test]
fn regime_constructors_and_g_pinning() {
    let mut regime = mblvqe_regime_pm_window();
    assert_eq!(regime.g_low, 0.0);
    assert!((regime.g_high - 0.2 * std::f64::consts::PI).abs() < 1e-12);
    unsafe { mblvqe_regime_set_g_point(&mut regime, 0.25) };
    assert_eq!((regime.g_low, regime.g_high), (0.25, 0.25));

    let thermal = mblvqe_regime_thermal();
    assert_eq!(thermal.g_low, thermal.g_high);

    // Degenerate (inverted) interval surfaces as a contract violation.
    unsafe {
        let bad = MblvqeRegime { g_low: 1.0, g_high: 0.5, ..mblvqe_regime_dtc() };
        let mut params = vec![0.0f64; 5];
        assert_eq!(
            mblvqe_sample_mbl_params(2, 1, &bad, 1, 0, params.as_mut_ptr(), params.len()),
            MblvqeStatus::ContractViolation
        );
    }
}

#[test]
fn hea_params_are_uniform_and_deterministic() {
    unsafe {
        let mut a = vec![0.0f64; 16];
        let mut b = vec![0.0f64; 16];
        assert_eq!(mblvqe_sample_hea_params(16, 9, a.as_mut_ptr(), 16), MblvqeStatus::Ok);
        assert_eq!(mblvqe_sample_hea_params(16, 9, b.as_mut_ptr(), 16), MblvqeStatus::Ok);
        assert_eq!(a, b);
        assert!(a.iter().all(|&x| (0.0..2.0 * std::f64::consts::PI).contains(&x)));
        assert_eq!(mblvqe_sample_hea_params(16, 9, a.as_mut_ptr(), 15), MblvqeStatus::ContractViolation);
    }
}
