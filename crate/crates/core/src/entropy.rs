//! Bipartite von Neumann entanglement entropy and its growth with circuit
//! depth. Entropies are in bits (log base 2); the volume-law ceiling for a
//! half-chain cut is then N/2.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::ansatz::{
    build_hea_circuit, build_mbl_circuit, sample_hea_params_with_rng, sample_mbl_params_with_rng,
    AnsatzKind, Regime,
};
use crate::error::{Error, Result};
use crate::gradient::mean_and_unbiased_variance;
use crate::state::StateVector;
use crate::streams::instance_rng;
use rand::Rng;

/// Entanglement entropy in bits across the cut between qubits [0, cut) and
/// [cut, N).
///
/// The amplitudes are reshaped into a 2^cut x 2^(N-cut) matrix whose
/// singular values are the Schmidt coefficients; the entropy is
/// -sum sigma^2 log2 sigma^2 with 0 log 0 = 0.
pub fn von_neumann_entropy(state: &StateVector, cut: usize) -> Result<f64> {
    let n = state.num_qubits();
    if cut < 1 || cut >= n {
        return Err(Error::contract(format!(
            "cut {cut} invalid for {n} qubits (need 1 <= cut <= N-1)"
        )));
    }
    let rows = 1usize << cut;
    let cols = 1usize << (n - cut);
    // Qubit 0 is the least significant bit, so subsystem A's index is the
    // low bits and each matrix column is a contiguous amplitude slice.
    let matrix = DMatrix::<Complex64>::from_column_slice(rows, cols, state.amplitudes());
    let singular_values = matrix.singular_values();
    let mut entropy = 0.0f64;
    for sigma in singular_values.iter() {
        let p = sigma * sigma;
        if p > 0.0 {
            entropy -= p * p.log2();
        }
    }
    // Round-off can leave a tiny negative total for product states.
    Ok(entropy.max(0.0))
}

/// Mean and standard deviation of the half-chain entropy after each block,
/// over an ensemble of disorder realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTrace {
    pub num_qubits: usize,
    pub regime_label: String,
    pub depths: Vec<usize>,
    /// Mean half-chain entropy in bits, per depth.
    pub mean_entropy: Vec<f64>,
    /// Unbiased sample standard deviation in bits, per depth.
    pub std_entropy: Vec<f64>,
    pub num_instances: usize,
    pub seed: u64,
}

/// Grow `num_instances` circuits block by block from |0...0>, recording the
/// half-chain entropy after every block (depth 0 is the initial product
/// state). Requires even N so the half-chain cut is defined. `tied` repeats
/// one disorder draw every block (true Floquet dynamics).
pub fn entropy_growth(
    ansatz: AnsatzKind,
    num_qubits: usize,
    regime: &Regime,
    max_depth: usize,
    num_instances: usize,
    master_seed: u64,
    tied: bool,
) -> Result<EntropyTrace> {
    if !num_qubits.is_multiple_of(2) {
        return Err(Error::contract(format!(
            "entropy growth needs an even qubit count for the half-chain cut, got {num_qubits}"
        )));
    }
    if max_depth < 1 {
        return Err(Error::contract("max_depth must be at least 1"));
    }
    if num_instances < 2 {
        return Err(Error::contract(format!(
            "entropy growth needs at least 2 instances, got {num_instances}"
        )));
    }
    regime.validate()?;
    let cut = num_qubits / 2;
    let shared_circuit = match ansatz {
        AnsatzKind::Mbl => Some(build_mbl_circuit(num_qubits, max_depth)?),
        AnsatzKind::Hea => None,
    };

    let per_instance: Vec<Vec<f64>> = (0..num_instances)
        .into_par_iter()
        .map(|instance| -> Result<Vec<f64>> {
            let mut rng = instance_rng(master_seed, instance as u64);
            let (circuit, params) = match ansatz {
                AnsatzKind::Mbl => {
                    let params = sample_mbl_params_with_rng(
                        num_qubits, max_depth, regime, &mut rng, tied,
                    )?
                    .flatten();
                    (shared_circuit.clone().expect("built above"), params)
                }
                AnsatzKind::Hea => {
                    let axis_seed: u64 = rng.random();
                    let circuit = build_hea_circuit(num_qubits, max_depth, axis_seed)?;
                    let params = sample_hea_params_with_rng(circuit.num_params(), &mut rng);
                    (circuit, params)
                }
            };
            let mut state = StateVector::zero(num_qubits)?;
            let mut entropies = Vec::with_capacity(max_depth + 1);
            entropies.push(von_neumann_entropy(&state, cut)?);
            for block in 0..max_depth {
                circuit.apply_block_to(&mut state, block, &params)?;
                entropies.push(von_neumann_entropy(&state, cut)?);
            }
            Ok(entropies)
        })
        .collect::<Result<_>>()?;

    let mut mean_entropy = Vec::with_capacity(max_depth + 1);
    let mut std_entropy = Vec::with_capacity(max_depth + 1);
    for depth in 0..=max_depth {
        let column: Vec<f64> = per_instance.iter().map(|trace| trace[depth]).collect();
        let (mean, variance) = mean_and_unbiased_variance(&column);
        mean_entropy.push(mean);
        std_entropy.push(variance.sqrt());
    }

    Ok(EntropyTrace {
        num_qubits,
        regime_label: regime.label.as_str().to_string(),
        depths: (0..=max_depth).collect(),
        mean_entropy,
        std_entropy,
        num_instances,
        seed: master_seed,
    })
}
