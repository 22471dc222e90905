//! Out-of-time-ordered correlators:
//! F = (1/2^N) Tr[U^dag t_i U t_j U^dag t_i U t_j]
//! for single-site Pauli operators t_i, t_j. Decay of F from 1 with depth
//! signals information scrambling; MBL circuits keep it pinned near 1.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::ansatz::{
    build_hea_circuit, build_mbl_circuit, sample_hea_params_with_rng, sample_mbl_params_with_rng,
    AnsatzKind, Regime,
};
use crate::circuit::Circuit;
use crate::dense::MAX_DENSE_QUBITS;
use crate::error::{Error, Result};
use crate::gradient::mean_and_unbiased_variance;
use crate::pauli::Pauli;
use crate::state;
use crate::streams::instance_rng;

/// How an OTOC value was estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OtocMethod {
    /// Full trace over the computational basis.
    Exact,
    /// Haar-random-state average of <phi|...|phi> (unbiased for the trace).
    Stochastic,
}

impl OtocMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            OtocMethod::Exact => "exact",
            OtocMethod::Stochastic => "stochastic",
        }
    }
}

/// Single-site Pauli as a bit-flip mask, sign mask, and base phase i^{#Y}.
#[derive(Debug, Clone, Copy)]
struct SiteOp {
    x_mask: usize,
    z_mask: usize,
    base: Complex64,
}

impl SiteOp {
    fn new(num_qubits: usize, site: usize, op: Pauli) -> Result<Self> {
        if site >= num_qubits {
            return Err(Error::contract(format!(
                "OTOC site {site} out of range for {num_qubits} qubits"
            )));
        }
        let bit = 1usize << site;
        match op {
            Pauli::X => Ok(SiteOp { x_mask: bit, z_mask: 0, base: Complex64::ONE }),
            Pauli::Y => Ok(SiteOp { x_mask: bit, z_mask: bit, base: Complex64::new(0.0, 1.0) }),
            Pauli::Z => Ok(SiteOp { x_mask: 0, z_mask: bit, base: Complex64::ONE }),
            Pauli::I => Err(Error::contract("OTOC operators must be X, Y, or Z")),
        }
    }

    #[inline]
    fn phase(&self, n: usize) -> Complex64 {
        if (n & self.z_mask).count_ones() & 1 == 1 {
            -self.base
        } else {
            self.base
        }
    }

    /// In-place t|psi> on an amplitude slice.
    fn apply(&self, amps: &mut [Complex64]) {
        if self.x_mask == 0 {
            for (n, amp) in amps.iter_mut().enumerate() {
                *amp *= self.phase(n);
            }
        } else {
            for n in 0..amps.len() {
                let m = n ^ self.x_mask;
                if m > n {
                    let a = amps[n];
                    let b = amps[m];
                    // t|m> lands on |n> with phase(m), and vice versa.
                    amps[n] = self.phase(m) * b;
                    amps[m] = self.phase(n) * a;
                }
            }
        }
    }
}

fn check_otoc_inputs(circuit: &Circuit, params: &[f64]) -> Result<()> {
    if params.len() < circuit.num_params() {
        return Err(Error::contract(format!(
            "{} parameters supplied, circuit needs {}",
            params.len(),
            circuit.num_params()
        )));
    }
    Ok(())
}

/// Apply W = U^dag t_i U t_j U^dag t_i U t_j to `amps` in place.
fn apply_otoc_word(
    circuit: &Circuit,
    params: &[f64],
    op_i: &SiteOp,
    op_j: &SiteOp,
    amps: &mut [Complex64],
) {
    for _ in 0..2 {
        op_j.apply(amps);
        for gate in circuit.gates() {
            gate.apply(amps, params);
        }
        op_i.apply(amps);
        for gate in circuit.gates().iter().rev() {
            gate.apply_dagger(amps, params);
        }
    }
}

/// Exact OTOC by summing <n|W|n> over all 2^N computational basis states,
/// each evaluated with statevector passes (no dense matrix is formed).
/// Capped at the dense-scale qubit count; use [`otoc_stochastic`] above it.
pub fn otoc_exact(
    circuit: &Circuit,
    params: &[f64],
    site_i: usize,
    site_j: usize,
    op_i: Pauli,
    op_j: Pauli,
) -> Result<f64> {
    let n = circuit.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::ResourceCap {
            what: "exact OTOC (use otoc_stochastic above this cap)",
            requested: n,
            cap: MAX_DENSE_QUBITS,
        });
    }
    check_otoc_inputs(circuit, params)?;
    let ti = SiteOp::new(n, site_i, op_i)?;
    let tj = SiteOp::new(n, site_j, op_j)?;
    let dim = 1usize << n;

    let diagonal: Vec<Complex64> = (0..dim)
        .into_par_iter()
        .map(|basis| {
            let mut amps = vec![Complex64::ZERO; dim];
            amps[basis] = Complex64::ONE;
            apply_otoc_word(circuit, params, &ti, &tj, &mut amps);
            amps[basis]
        })
        .collect();

    let total: Complex64 = diagonal.iter().sum();
    let value = total / dim as f64;
    debug_assert!(value.im.abs() < 1e-8, "imaginary OTOC residue {}", value.im);
    Ok(value.re)
}

/// Unbiased stochastic estimate of the same trace from `num_samples`
/// Haar-random pure states. Returns (mean, standard error).
#[allow(clippy::too_many_arguments)]
pub fn otoc_stochastic(
    circuit: &Circuit,
    params: &[f64],
    site_i: usize,
    site_j: usize,
    op_i: Pauli,
    op_j: Pauli,
    num_samples: usize,
    rng_seed: u64,
) -> Result<(f64, f64)> {
    if num_samples < 2 {
        return Err(Error::contract(format!(
            "stochastic OTOC needs at least 2 samples, got {num_samples}"
        )));
    }
    check_otoc_inputs(circuit, params)?;
    let n = circuit.num_qubits();
    let ti = SiteOp::new(n, site_i, op_i)?;
    let tj = SiteOp::new(n, site_j, op_j)?;
    let dim = 1usize << n;

    let samples: Vec<f64> = (0..num_samples)
        .into_par_iter()
        .map(|sample| {
            let mut rng = instance_rng(rng_seed, sample as u64);
            let phi = haar_random_amplitudes(dim, &mut rng);
            let mut evolved = phi.clone();
            apply_otoc_word(circuit, params, &ti, &tj, &mut evolved);
            state::inner(&phi, &evolved).re
        })
        .collect();

    let (mean, variance) = mean_and_unbiased_variance(&samples);
    Ok((mean, (variance / num_samples as f64).sqrt()))
}

/// Normalized vector of i.i.d. standard complex Gaussian amplitudes.
fn haar_random_amplitudes(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    amps
}

/// Depth-resolved OTOC between the chain ends, averaged over disorder
/// realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct OtocTrace {
    pub num_qubits: usize,
    pub regime_label: String,
    pub depths: Vec<usize>,
    pub mean_otoc: Vec<f64>,
    /// Standard error of the instance mean, per depth.
    pub stderr: Vec<f64>,
    pub num_instances: usize,
    pub method: OtocMethod,
    pub seed: u64,
}

/// X-X OTOC between qubit 0 and qubit N-1 after each block, over
/// `num_instances` draws. Exact for N within the dense cap, stochastic
/// (100 Haar samples per point) above it. `tied` repeats one disorder draw
/// every block (true Floquet dynamics) instead of fresh per-block draws.
#[allow(clippy::too_many_arguments)]
pub fn otoc_trace(
    ansatz: AnsatzKind,
    num_qubits: usize,
    regime: &Regime,
    max_depth: usize,
    num_instances: usize,
    master_seed: u64,
    tied: bool,
) -> Result<OtocTrace> {
    if max_depth < 1 {
        return Err(Error::contract("max_depth must be at least 1"));
    }
    if num_instances < 2 {
        return Err(Error::contract(format!(
            "OTOC trace needs at least 2 instances, got {num_instances}"
        )));
    }
    regime.validate()?;
    let method = if num_qubits <= MAX_DENSE_QUBITS {
        OtocMethod::Exact
    } else {
        OtocMethod::Stochastic
    };
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
            match method {
                OtocMethod::Exact => end_to_end_otoc_sweep(&circuit, &params, max_depth),
                OtocMethod::Stochastic => {
                    let mut values = Vec::with_capacity(max_depth + 1);
                    for depth in 0..=max_depth {
                        let sample_seed: u64 = rng.random();
                        let prefix;
                        let target = if depth == 0 {
                            prefix = Circuit::new(num_qubits, vec![], 0)?;
                            &prefix
                        } else {
                            prefix = circuit.prefix_blocks(depth)?;
                            &prefix
                        };
                        let (mean, _) = otoc_stochastic(
                            target,
                            &params,
                            0,
                            num_qubits - 1,
                            Pauli::X,
                            Pauli::X,
                            100,
                            sample_seed,
                        )?;
                        values.push(mean);
                    }
                    Ok(values)
                }
            }
        })
        .collect::<Result<_>>()?;

    let mut mean_otoc = Vec::with_capacity(max_depth + 1);
    let mut stderr = Vec::with_capacity(max_depth + 1);
    for depth in 0..=max_depth {
        let column: Vec<f64> = per_instance.iter().map(|trace| trace[depth]).collect();
        let (mean, variance) = mean_and_unbiased_variance(&column);
        mean_otoc.push(mean);
        stderr.push((variance / num_instances as f64).sqrt());
    }

    Ok(OtocTrace {
        num_qubits,
        regime_label: regime.label.as_str().to_string(),
        depths: (0..=max_depth).collect(),
        mean_otoc,
        stderr,
        num_instances,
        method,
        seed: master_seed,
    })
}

/// Exact per-depth OTOC for one instance via an incrementally grown dense
/// unitary: one block application plus one adjoint-times-matrix product per
/// depth, instead of 2^N basis-state sweeps per depth.
fn end_to_end_otoc_sweep(circuit: &Circuit, params: &[f64], max_depth: usize) -> Result<Vec<f64>> {
    let n = circuit.num_qubits();
    let ti = SiteOp::new(n, 0, Pauli::X)?;
    let tj = SiteOp::new(n, n - 1, Pauli::X)?;
    let dim = 1usize << n;
    let per_block = circuit.gates_per_block();

    // Column-major dense U, grown block by block.
    let mut u = vec![Complex64::ZERO; dim * dim];
    for k in 0..dim {
        u[k * dim + k] = Complex64::ONE;
    }
    let mut v = vec![Complex64::ZERO; dim * dim];
    let mut m = vec![Complex64::ZERO; dim * dim];
    let mut values = Vec::with_capacity(max_depth + 1);

    for depth in 0..=max_depth {
        if depth > 0 {
            let gates = &circuit.gates()[(depth - 1) * per_block..depth * per_block];
            for col in u.chunks_exact_mut(dim) {
                for gate in gates {
                    gate.apply(col, params);
                }
            }
        }
        // V = t_i U (row permutation with phases).
        for col in 0..dim {
            let src = &u[col * dim..(col + 1) * dim];
            let dst = &mut v[col * dim..(col + 1) * dim];
            for (row, out) in dst.iter_mut().enumerate() {
                let flipped = row ^ ti.x_mask;
                *out = ti.phase(flipped) * src[flipped];
            }
        }
        // M = U^dag V: conjugated column dots, both contiguous.
        for mcol in 0..dim {
            let vcol = &v[mcol * dim..(mcol + 1) * dim];
            for row in 0..dim {
                let ucol = &u[row * dim..(row + 1) * dim];
                let mut acc = Complex64::ZERO;
                for k in 0..dim {
                    acc += ucol[k].conj() * vcol[k];
                }
                m[mcol * dim + row] = acc;
            }
        }
        // F = (1/2^N) sum_{n,q} M[n,q] phase_j(q^x) phase_j(n) M[q^x, n^x].
        let mut acc = Complex64::ZERO;
        for q in 0..dim {
            let qx = q ^ tj.x_mask;
            for row in 0..dim {
                let lhs = m[q * dim + row];
                let rhs = m[(row ^ tj.x_mask) * dim + qx];
                acc += lhs * rhs * (tj.phase(qx) * tj.phase(row));
            }
        }
        let value = acc / dim as f64;
        debug_assert!(value.im.abs() < 1e-8, "imaginary OTOC residue {}", value.im);
        values.push(value.re);
    }
    Ok(values)
}
