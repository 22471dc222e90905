//! Exact differentiation of E(theta) = <0|U^dag(theta) H U(theta)|0> and
//! ensemble gradient-variance estimation.
//!
//! The primary path is adjoint (reverse-mode statevector) differentiation:
//! one forward pass plus one backward sweep yields every partial derivative,
//! with each gate's chain-rule scale included exactly. Parameter-shift and
//! central finite differences are independent cross-check paths.
//!
//! For a gate exp(-i (s * theta / 2) P) the adjoint contribution to
//! dE/dtheta is `s * Im <b_k | P | psi_k>`, where psi_k is the state after
//! gate k and b_k is H|psi> pulled back through the gates above k.

use rand::Rng;
use rayon::prelude::*;

use crate::ansatz::{
    sample_hea_params_with_rng, sample_mbl_params_with_rng, AnsatzKind, Regime,
};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::{PauliHamiltonian, PauliString};
use crate::state::StateVector;
use crate::streams::instance_rng;

/// Energy and full gradient at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientResult {
    /// <psi(theta)|H|psi(theta)> in the cost Hamiltonian's units.
    pub energy: f64,
    /// dE/dtheta_k per parameter slot, chain-rule scales included.
    pub grad: Vec<f64>,
}

fn check_gradient_inputs(circuit: &Circuit, params: &[f64], h: &PauliHamiltonian) -> Result<()> {
    if params.len() < circuit.num_params() {
        return Err(Error::contract(format!(
            "{} parameters supplied, circuit needs {}",
            params.len(),
            circuit.num_params()
        )));
    }
    if let Some(bad) = params.iter().position(|p| !p.is_finite()) {
        return Err(Error::contract(format!("parameter {bad} is not finite")));
    }
    if circuit.num_qubits() != h.num_qubits() {
        return Err(Error::contract(format!(
            "{}-qubit circuit with {}-qubit Hamiltonian",
            circuit.num_qubits(),
            h.num_qubits()
        )));
    }
    Ok(())
}

/// Adjoint gradient together with the evolved state, so callers that also
/// need per-iteration observables (cost, entropy) reuse the forward pass.
pub fn adjoint_gradient_with_state(
    circuit: &Circuit,
    params: &[f64],
    h: &PauliHamiltonian,
) -> Result<(GradientResult, StateVector)> {
    check_gradient_inputs(circuit, params, h)?;
    let psi = circuit.run_from_zero(params)?;
    let energy = h.expectation(&psi)?;

    let mut grad = vec![0.0f64; circuit.num_params()];
    let mut lam = h.apply(psi.amplitudes());
    let mut ket = psi.amplitudes().to_vec();

    let generators: Vec<Option<PauliString>> = circuit
        .gates()
        .iter()
        .map(|gate| {
            gate.generator_sites()
                .map(|sites| PauliString::from_sites(circuit.num_qubits(), &sites).expect("valid sites"))
        })
        .collect();

    for (gate, generator) in circuit.gates().iter().zip(&generators).rev() {
        if let (Some(p), Some(slot)) = (generator, gate.param_slot()) {
            let overlap = p.bilinear(&lam, &ket);
            grad[slot] += gate.scale() * overlap.im;
        }
        gate.apply_dagger(&mut ket, params);
        gate.apply_dagger(&mut lam, params);
    }

    Ok((GradientResult { energy, grad }, psi))
}

/// Exact analytic gradient of the cost in one forward plus one backward
/// sweep, O(num_gates * 2^N).
pub fn adjoint_gradient(
    circuit: &Circuit,
    params: &[f64],
    h: &PauliHamiltonian,
) -> Result<GradientResult> {
    adjoint_gradient_with_state(circuit, params, h).map(|(result, _)| result)
}

fn energy_with_occurrence_shift(
    circuit: &Circuit,
    params: &[f64],
    h: &PauliHamiltonian,
    gate_index: usize,
    delta: f64,
) -> Result<f64> {
    let slot = circuit.gates()[gate_index]
        .param_slot()
        .expect("shifted gate is parameterized");
    let mut shifted = params.to_vec();
    shifted[slot] += delta;
    let mut state = StateVector::zero(circuit.num_qubits())?;
    let amps = state.amplitudes_mut();
    for (k, gate) in circuit.gates().iter().enumerate() {
        if k == gate_index {
            gate.apply(amps, &shifted);
        } else {
            gate.apply(amps, params);
        }
    }
    h.expectation(&state)
}

/// Parameter-shift partial derivative for one slot.
///
/// Each occurrence of the slot is an effective gate exp(-i (s*theta/2) P)
/// with P a Pauli string, so shifting that occurrence alone by
/// +/- pi/(2s) gives the per-occurrence contribution
/// (s/2) * [E(theta + pi/(2s)) - E(theta - pi/(2s))]; occurrences sum.
pub fn parameter_shift_gradient(
    circuit: &Circuit,
    params: &[f64],
    h: &PauliHamiltonian,
    slot: usize,
) -> Result<f64> {
    check_gradient_inputs(circuit, params, h)?;
    if slot >= circuit.num_params() {
        return Err(Error::contract(format!(
            "slot {slot} out of range for {} parameters",
            circuit.num_params()
        )));
    }
    let mut total = 0.0;
    for (k, gate) in circuit.gates().iter().enumerate() {
        if gate.param_slot() != Some(slot) {
            continue;
        }
        let scale = gate.scale();
        if scale == 0.0 {
            continue;
        }
        let shift = std::f64::consts::FRAC_PI_2 / scale;
        let plus = energy_with_occurrence_shift(circuit, params, h, k, shift)?;
        let minus = energy_with_occurrence_shift(circuit, params, h, k, -shift)?;
        total += scale / 2.0 * (plus - minus);
    }
    Ok(total)
}

/// Central finite differences over every slot: test oracle, O(step^2) bias.
pub fn finite_difference_gradient(
    circuit: &Circuit,
    params: &[f64],
    h: &PauliHamiltonian,
    step: f64,
) -> Result<Vec<f64>> {
    check_gradient_inputs(circuit, params, h)?;
    if step <= 0.0 {
        return Err(Error::contract(format!("step {step} must be positive")));
    }
    let mut grad = vec![0.0f64; circuit.num_params()];
    let mut shifted = params.to_vec();
    for k in 0..circuit.num_params() {
        shifted[k] = params[k] + step;
        let plus = h.expectation(&circuit.run_from_zero(&shifted)?)?;
        shifted[k] = params[k] - step;
        let minus = h.expectation(&circuit.run_from_zero(&shifted)?)?;
        shifted[k] = params[k];
        grad[k] = (plus - minus) / (2.0 * step);
    }
    Ok(grad)
}

/// One point of a barren-plateau variance sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceRecord {
    pub num_qubits: usize,
    pub depth_blocks: usize,
    pub regime_label: String,
    pub param_index: usize,
    pub num_instances: usize,
    /// Unbiased sample variance of dE/dtheta_{param_index} over instances.
    pub variance: f64,
    pub mean: f64,
    pub seed: u64,
}

/// Sample the observed partial derivative over `num_instances` independent
/// parameter draws and return its unbiased variance.
///
/// With `tied` set (the Floquet reading: one disorder realization repeated
/// every period), draws are copied across blocks and `param_index` is a
/// within-block slot whose derivative sums its occurrence in every block by
/// the chain rule. That is the ensemble in which the first ZZ-rotation
/// parameter carries signal: untied, the first block's diagonal rotations
/// hit the initial Z eigenstate directly and their exact gradient is
/// identically zero. Untied, `param_index` addresses one global slot.
///
/// For the HEA the rotation axes are also redrawn per instance; `tied` and
/// the regime intervals are ignored and the record is labeled "hea".
#[allow(clippy::too_many_arguments)]
pub fn gradient_variance(
    ansatz: AnsatzKind,
    num_qubits: usize,
    depth_blocks: usize,
    regime: &Regime,
    h: &PauliHamiltonian,
    param_index: usize,
    num_instances: usize,
    master_seed: u64,
    tied: bool,
) -> Result<VarianceRecord> {
    if num_instances < 2 {
        return Err(Error::contract(format!(
            "variance needs at least 2 instances, got {num_instances}"
        )));
    }
    regime.validate()?;
    let shared_circuit = match ansatz {
        AnsatzKind::Mbl => Some(build_checked_mbl(
            num_qubits,
            depth_blocks,
            param_index,
            tied,
        )?),
        AnsatzKind::Hea => None,
    };
    let per_block = crate::ansatz::mbl_slots_per_block(num_qubits);

    let samples: Vec<f64> = (0..num_instances)
        .into_par_iter()
        .map(|instance| -> Result<f64> {
            let mut rng = instance_rng(master_seed, instance as u64);
            match ansatz {
                AnsatzKind::Mbl => {
                    let params = sample_mbl_params_with_rng(
                        num_qubits,
                        depth_blocks,
                        regime,
                        &mut rng,
                        tied,
                    )?
                    .flatten();
                    let circuit = shared_circuit.as_ref().expect("built above");
                    let grad = adjoint_gradient(circuit, &params, h)?.grad;
                    if tied {
                        Ok((0..depth_blocks).map(|b| grad[b * per_block + param_index]).sum())
                    } else {
                        Ok(grad[param_index])
                    }
                }
                AnsatzKind::Hea => {
                    let axis_seed: u64 = rng.random();
                    let circuit =
                        crate::ansatz::build_hea_circuit(num_qubits, depth_blocks, axis_seed)?;
                    if param_index >= circuit.num_params() {
                        return Err(Error::contract(format!(
                            "param index {param_index} out of range for {} slots",
                            circuit.num_params()
                        )));
                    }
                    let params = sample_hea_params_with_rng(circuit.num_params(), &mut rng);
                    Ok(adjoint_gradient(&circuit, &params, h)?.grad[param_index])
                }
            }
        })
        .collect::<Result<_>>()?;

    let (mean, variance) = mean_and_unbiased_variance(&samples);
    Ok(VarianceRecord {
        num_qubits,
        depth_blocks,
        regime_label: match ansatz {
            AnsatzKind::Mbl => regime.label.as_str().to_string(),
            AnsatzKind::Hea => "hea".to_string(),
        },
        param_index,
        num_instances,
        variance,
        mean,
        seed: master_seed,
    })
}

fn build_checked_mbl(
    num_qubits: usize,
    depth_blocks: usize,
    param_index: usize,
    tied: bool,
) -> Result<Circuit> {
    let circuit = crate::ansatz::build_mbl_circuit(num_qubits, depth_blocks)?;
    let slot_space = if tied {
        crate::ansatz::mbl_slots_per_block(num_qubits)
    } else {
        circuit.num_params()
    };
    if param_index >= slot_space {
        return Err(Error::contract(format!(
            "param index {param_index} out of range for {slot_space} slots"
        )));
    }
    Ok(circuit)
}

/// Mean and unbiased (n-1) sample variance, reduced in index order.
pub(crate) fn mean_and_unbiased_variance(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = if samples.len() < 2 {
        0.0
    } else {
        samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    };
    (mean, variance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_mbl_circuit, sample_mbl_params, Regime, J_WINDOW, H_WINDOW};
    use crate::circuit::Gate;
    use crate::vqe::{build_xxz, XxzSpec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    /// 1 qubit, RX with scale 2 (the gate is exp(-i theta X)), H = Z:
    /// E(theta) = cos(2 theta), dE/dtheta = -2 sin(2 theta).
    fn scaled_rx_fixture() -> (Circuit, PauliHamiltonian) {
        let circuit = Circuit::new(1, vec![Gate::rx(0, 0).with_scale(2.0)], 1).unwrap();
        let h = PauliHamiltonian::from_words(1, &[(1.0, "Z")]).unwrap();
        (circuit, h)
    }

    #[test]
    fn adjoint_matches_closed_form_with_scale() {
        let (circuit, h) = scaled_rx_fixture();
        let theta = PI / 8.0;
        let result = adjoint_gradient(&circuit, &[theta], &h).unwrap();
        assert_abs_diff_eq!(result.energy, FRAC_PI_4.cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(result.grad[0], -2.0 * FRAC_PI_4.sin(), epsilon = 1e-12);
        assert_abs_diff_eq!(result.grad[0], -std::f64::consts::SQRT_2, epsilon = 1e-10);
    }

    #[test]
    fn parameter_shift_matches_closed_form_with_scale() {
        let (circuit, h) = scaled_rx_fixture();
        let g = parameter_shift_gradient(&circuit, &[PI / 8.0], &h, 0).unwrap();
        assert_abs_diff_eq!(g, -std::f64::consts::SQRT_2, epsilon = 1e-10);
    }

    #[test]
    fn finite_difference_matches_closed_form() {
        let (circuit, h) = scaled_rx_fixture();
        let g = finite_difference_gradient(&circuit, &[PI / 8.0], &h, 1e-5).unwrap();
        assert_abs_diff_eq!(g[0], -std::f64::consts::SQRT_2, epsilon = 1e-6);
    }

    #[test]
    fn finite_difference_error_shrinks_quadratically() {
        let circuit = build_mbl_circuit(3, 2).unwrap();
        let h = build_xxz(&XxzSpec { num_qubits: 3, j: 1.0, delta: 1.0 }).unwrap();
        let params = sample_mbl_params(3, 2, &Regime::thermal(), 2).unwrap().flatten();
        let exact = adjoint_gradient(&circuit, &params, &h).unwrap().grad;
        let err = |step: f64| {
            let fd = finite_difference_gradient(&circuit, &params, &h, step).unwrap();
            fd.iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        };
        let e3 = err(1e-3);
        let e4 = err(1e-4);
        let e5 = err(1e-5);
        // Central differences are O(step^2): each decade cuts the error ~100x
        // until float noise takes over.
        assert!(e3 / e4 > 30.0 && e3 / e4 < 300.0, "e3={e3}, e4={e4}");
        assert!(e5 < 1e-8, "e5={e5}");
    }

    #[test]
    fn diagonal_circuit_has_symmetry_forced_zero_gradients() {
        // All kick angles zero: the state stays a Z-basis eigenstate, so J
        // and h slots only move a global phase.
        let n = 4;
        let d = 2;
        let circuit = build_mbl_circuit(n, d).unwrap();
        let regime = Regime::custom((0.0, 0.0), J_WINDOW, H_WINDOW);
        let params = sample_mbl_params(n, d, &regime, 17).unwrap().flatten();
        let h = build_xxz(&XxzSpec { num_qubits: n, j: 1.0, delta: 1.0 }).unwrap();
        let result = adjoint_gradient(&circuit, &params, &h).unwrap();
        let per_block = crate::ansatz::mbl_slots_per_block(n);
        for block in 0..d {
            for slot in 0..2 * n - 1 {
                // Zero up to the rounding of the backward sweep's phase
                // products (a few ulps).
                assert!(
                    result.grad[block * per_block + slot].abs() <= 1e-14,
                    "diagonal slot {slot} of block {block}: {}",
                    result.grad[block * per_block + slot]
                );
            }
        }
        // Parameter shift agrees for a diagonal slot.
        let ps = parameter_shift_gradient(&circuit, &params, &h, 0).unwrap();
        assert_abs_diff_eq!(ps, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn three_way_agreement_on_random_instances() {
        let n = 4;
        let d = 3;
        let circuit = build_mbl_circuit(n, d).unwrap();
        let h = build_xxz(&XxzSpec { num_qubits: n, j: 1.0, delta: 1.0 }).unwrap();
        for seed in 0..5 {
            let params = sample_mbl_params(n, d, &Regime::dtc_window(), seed).unwrap().flatten();
            let adj = adjoint_gradient(&circuit, &params, &h).unwrap();
            let fd = finite_difference_gradient(&circuit, &params, &h, 1e-5).unwrap();
            for (slot, (a, f)) in adj.grad.iter().zip(&fd).enumerate() {
                assert_abs_diff_eq!(a, f, epsilon = 1e-6);
                let ps = parameter_shift_gradient(&circuit, &params, &h, slot).unwrap();
                assert_abs_diff_eq!(*a, ps, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn repeated_slot_gradients_sum_over_occurrences() {
        // Two RX gates bound to the same slot: E(theta) = <Z> after
        // RX(theta) RX(theta) = RX(2 theta), so dE/dtheta = -2 sin(2 theta).
        let circuit = Circuit::new(1, vec![Gate::rx(0, 0), Gate::rx(0, 0)], 1).unwrap();
        let h = PauliHamiltonian::from_words(1, &[(1.0, "Z")]).unwrap();
        let theta = 0.4;
        let adj = adjoint_gradient(&circuit, &[theta], &h).unwrap();
        assert_abs_diff_eq!(adj.grad[0], -2.0 * (2.0 * theta).sin(), epsilon = 1e-12);
        let ps = parameter_shift_gradient(&circuit, &[theta], &h, 0).unwrap();
        assert_abs_diff_eq!(ps, adj.grad[0], epsilon = 1e-10);
    }

    #[test]
    fn variance_rejects_degenerate_ensembles_and_bad_slots() {
        let h = build_xxz(&XxzSpec { num_qubits: 3, j: 1.0, delta: 1.0 }).unwrap();
        assert!(gradient_variance(AnsatzKind::Mbl, 3, 1, &Regime::pm(), &h, 0, 1, 0, false).is_err());
        assert!(gradient_variance(AnsatzKind::Mbl, 3, 1, &Regime::pm(), &h, 99, 8, 0, false).is_err());
        // Tied slots address within-block indices only.
        assert!(gradient_variance(AnsatzKind::Mbl, 3, 2, &Regime::pm(), &h, 8, 8, 0, true).is_err());
        assert!(gradient_variance(AnsatzKind::Mbl, 3, 2, &Regime::pm(), &h, 8, 8, 0, false).is_ok());
    }

    #[test]
    fn variance_of_identical_draws_is_zero() {
        // Point intervals for J, h, g force every instance to the same
        // parameter vector.
        let regime = Regime::custom((0.3, 0.3), (-2.0, -2.0), (0.5, 0.5));
        let h = build_xxz(&XxzSpec { num_qubits: 3, j: 1.0, delta: 1.0 }).unwrap();
        let record = gradient_variance(AnsatzKind::Mbl, 3, 2, &regime, &h, 0, 2, 5, true).unwrap();
        assert_eq!(record.variance, 0.0);
        assert_eq!(record.num_instances, 2);
    }

    #[test]
    fn first_zz_slot_is_dead_untied_but_live_tied() {
        // Untied, the first block's RZZ acts directly on the initial Z
        // eigenstate: inserting its generator only moves the global phase,
        // so dE/dtheta_0 is identically zero. Tied across blocks, the same
        // within-block parameter also occurs after the first kick layer and
        // picks up signal.
        let n = 4;
        let d = 8;
        let h = build_xxz(&XxzSpec { num_qubits: n, j: 1.0, delta: 1.0 }).unwrap();
        let untied =
            gradient_variance(AnsatzKind::Mbl, n, d, &Regime::pm(), &h, 0, 40, 3, false).unwrap();
        assert!(untied.variance < 1e-25, "dead slot variance {}", untied.variance);
        let tied =
            gradient_variance(AnsatzKind::Mbl, n, d, &Regime::pm(), &h, 0, 40, 3, true).unwrap();
        assert!(tied.variance > 1e-8, "tied slot variance {}", tied.variance);
    }

    #[test]
    fn variance_is_seed_deterministic() {
        let h = build_xxz(&XxzSpec { num_qubits: 4, j: 1.0, delta: 1.0 }).unwrap();
        let a = gradient_variance(AnsatzKind::Mbl, 4, 2, &Regime::pm(), &h, 0, 16, 123, true).unwrap();
        let b = gradient_variance(AnsatzKind::Mbl, 4, 2, &Regime::pm(), &h, 0, 16, 123, true).unwrap();
        assert_eq!(a, b);
        let hea = gradient_variance(AnsatzKind::Hea, 4, 4, &Regime::pm(), &h, 0, 16, 123, false).unwrap();
        let hea2 = gradient_variance(AnsatzKind::Hea, 4, 4, &Regime::pm(), &h, 0, 16, 123, false).unwrap();
        assert_eq!(hea, hea2);
        assert_eq!(hea.regime_label, "hea");
    }
}
