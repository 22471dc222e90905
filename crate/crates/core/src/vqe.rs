//! VQE against the XXZ chain: cost Hamiltonian construction, an exact
//! ground-state reference, ADAM, and the ensemble optimization loop.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::ansatz::{
    build_hea_circuit, build_mbl_circuit, sample_hea_params_with_rng, sample_mbl_params_with_rng,
    AnsatzKind, Regime,
};
use crate::circuit::Circuit;
use crate::dense::{check_dense_cap, dense_hamiltonian};
use crate::entropy::von_neumann_entropy;
use crate::error::{Error, Result};
use crate::gradient::{adjoint_gradient_with_state, mean_and_unbiased_variance};
use crate::pauli::{Pauli, PauliHamiltonian, PauliString};
use crate::state;
use crate::streams::instance_rng;

/// Open XXZ chain: H = -J sum_i (X_i X_{i+1} + Y_i Y_{i+1}) + Delta sum_i Z_i Z_{i+1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XxzSpec {
    pub num_qubits: usize,
    /// XY coupling J (energy units).
    pub j: f64,
    /// ZZ anisotropy Delta (energy units).
    pub delta: f64,
}

/// Assemble the XXZ Hamiltonian: 3(N-1) terms over adjacent pairs.
pub fn build_xxz(spec: &XxzSpec) -> Result<PauliHamiltonian> {
    if spec.num_qubits < 2 {
        return Err(Error::contract(format!(
            "XXZ chain needs at least 2 sites, got {}",
            spec.num_qubits
        )));
    }
    if !spec.j.is_finite() || !spec.delta.is_finite() {
        return Err(Error::NonFinite("XXZ couplings".into()));
    }
    let n = spec.num_qubits;
    let mut terms = Vec::with_capacity(3 * (n - 1));
    for i in 0..n - 1 {
        terms.push((-spec.j, PauliString::from_sites(n, &[(i, Pauli::X), (i + 1, Pauli::X)])?));
        terms.push((-spec.j, PauliString::from_sites(n, &[(i, Pauli::Y), (i + 1, Pauli::Y)])?));
        terms.push((spec.delta, PauliString::from_sites(n, &[(i, Pauli::Z), (i + 1, Pauli::Z)])?));
    }
    PauliHamiltonian::new(n, terms)
}

/// Smallest eigenvalue of H. Dense Hermitian eigensolve up to 8 qubits,
/// Lanczos with full reorthogonalization (on the Pauli-term matvec) above
/// that, both well inside 1e-9 relative accuracy. Capped at the dense
/// qubit count.
pub fn exact_ground_energy(h: &PauliHamiltonian) -> Result<f64> {
    check_dense_cap(h.num_qubits(), "exact ground energy")?;
    if h.terms().is_empty() {
        return Ok(0.0);
    }
    if h.num_qubits() <= 8 {
        let dense = dense_hamiltonian(h)?;
        Ok(smallest_eigenvalue_dense(&dense))
    } else {
        lanczos_ground_energy(h)
    }
}

fn smallest_eigenvalue_dense(matrix: &DMatrix<Complex64>) -> f64 {
    let eigen = matrix.clone().symmetric_eigen();
    eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Lanczos iteration for the extreme eigenvalue. The Krylov basis is kept
/// and reorthogonalized every step; convergence is declared when the
/// tridiagonal residual bound drops below 1e-11 relative.
fn lanczos_ground_energy(h: &PauliHamiltonian) -> Result<f64> {
    let dim = 1usize << h.num_qubits();
    let max_iter = 400.min(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c61_6e63); // fixed start vector
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    normalize(&mut v);

    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let scale = h.coefficient_norm().max(1.0);

    for step in 0..max_iter {
        let mut w = h.apply(&basis[step]);
        if step > 0 {
            let beta = betas[step - 1];
            for (wi, pi) in w.iter_mut().zip(&basis[step - 1]) {
                *wi -= beta * pi;
            }
        }
        let alpha = state::inner(&basis[step], &w).re;
        for (wi, vi) in w.iter_mut().zip(&basis[step]) {
            *wi -= alpha * vi;
        }
        // Full reorthogonalization keeps the basis numerically orthonormal.
        for b in &basis {
            let overlap = state::inner(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= overlap * bi;
            }
        }
        alphas.push(alpha);
        let beta = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();

        let check_now = beta < 1e-12 * scale || step + 1 == max_iter || (step + 1) % 10 == 0;
        if check_now {
            let (lambda, tail) = tridiagonal_ground(&alphas, &betas);
            if beta * tail.abs() <= 1e-11 * scale || beta < 1e-12 * scale {
                return Ok(lambda);
            }
        }
        betas.push(beta);
        for x in &mut w {
            *x /= beta;
        }
        basis.push(w);
    }
    Ok(tridiagonal_ground(&alphas, &betas).0)
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Smallest eigenvalue of the real symmetric tridiagonal (alphas, betas)
/// and the last component of its eigenvector (for the residual bound).
fn tridiagonal_ground(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eigen = t.symmetric_eigen();
    let mut best = 0usize;
    for (k, value) in eigen.eigenvalues.iter().enumerate() {
        if *value < eigen.eigenvalues[best] {
            best = k;
        }
    }
    (eigen.eigenvalues[best], eigen.eigenvectors[(m - 1, best)])
}

/// ADAM hyperparameters. Defaults: eta 0.05, beta1 0.9, beta2 0.999,
/// epsilon 1e-8.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig { learning_rate: 0.05, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

/// ADAM moment estimates with bias correction.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    config: AdamConfig,
    step_count: u64,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
}

impl AdamState {
    pub fn new(num_params: usize, config: AdamConfig) -> Self {
        AdamState {
            config,
            step_count: 0,
            first_moment: vec![0.0; num_params],
            second_moment: vec![0.0; num_params],
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// One update: m <- b1 m + (1-b1) g; v <- b2 v + (1-b2) g^2;
    /// theta <- theta - eta * m_hat / (sqrt(v_hat) + eps).
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        if params.len() != self.first_moment.len() || grad.len() != self.first_moment.len() {
            return Err(Error::contract(format!(
                "ADAM sized for {} parameters, got {} params / {} grads",
                self.first_moment.len(),
                params.len(),
                grad.len()
            )));
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite("gradient passed to ADAM".into()));
        }
        self.step_count += 1;
        let AdamConfig { learning_rate, beta1, beta2, epsilon } = self.config;
        let bias1 = 1.0 - beta1.powi(self.step_count as i32);
        let bias2 = 1.0 - beta2.powi(self.step_count as i32);
        for k in 0..params.len() {
            let g = grad[k];
            self.first_moment[k] = beta1 * self.first_moment[k] + (1.0 - beta1) * g;
            self.second_moment[k] = beta2 * self.second_moment[k] + (1.0 - beta2) * g * g;
            let m_hat = self.first_moment[k] / bias1;
            let v_hat = self.second_moment[k] / bias2;
            params[k] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
        }
        Ok(())
    }
}

/// Cost and half-chain entropy at every iteration of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceTrace {
    /// Entry t is E(theta_t); index 0 is the initial point.
    pub cost: Vec<f64>,
    /// Half-chain entropy (bits) of |psi(theta_t)>.
    pub entropy_bits: Vec<f64>,
    pub final_params: Vec<f64>,
}

/// Adjoint-gradient + ADAM descent on one parameter vector, recording cost
/// and entropy at each of the `num_iterations + 1` visited points.
pub fn optimize_instance(
    circuit: &Circuit,
    h: &PauliHamiltonian,
    initial_params: &[f64],
    adam: AdamConfig,
    num_iterations: usize,
) -> Result<InstanceTrace> {
    // Single-qubit circuits have no bipartition; record zero entropy.
    let cut = circuit.num_qubits() / 2;
    let half_chain_entropy = |psi: &crate::state::StateVector| -> Result<f64> {
        if cut == 0 { Ok(0.0) } else { von_neumann_entropy(psi, cut) }
    };
    let mut params = initial_params.to_vec();
    let mut adam_state = AdamState::new(circuit.num_params(), adam);
    let mut cost = Vec::with_capacity(num_iterations + 1);
    let mut entropy_bits = Vec::with_capacity(num_iterations + 1);

    for _ in 0..num_iterations {
        let (result, psi) = adjoint_gradient_with_state(circuit, &params, h)?;
        cost.push(result.energy);
        entropy_bits.push(half_chain_entropy(&psi)?);
        adam_state.step(&mut params, &result.grad)?;
    }
    let psi = circuit.run_from_zero(&params)?;
    cost.push(h.expectation(&psi)?);
    entropy_bits.push(half_chain_entropy(&psi)?);

    Ok(InstanceTrace { cost, entropy_bits, final_params: params })
}

/// Ensemble VQE settings.
#[derive(Debug, Clone, PartialEq)]
pub struct VqeConfig {
    pub ansatz: AnsatzKind,
    pub num_qubits: usize,
    pub depth_blocks: usize,
    pub regime: Regime,
    pub xxz: XxzSpec,
    pub num_iterations: usize,
    pub num_instances: usize,
    pub master_seed: u64,
    pub adam: AdamConfig,
    /// Copy block 0's initial draws to every block (one Floquet period
    /// repeated D times) instead of fresh disorder per block.
    pub tied_blocks: bool,
}

/// Per-iteration ensemble statistics of an optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimRun {
    pub regime_label: String,
    pub iterations: Vec<usize>,
    pub mean_cost: Vec<f64>,
    pub var_cost: Vec<f64>,
    pub mean_entropy_bits: Vec<f64>,
    pub var_entropy_bits: Vec<f64>,
    pub num_instances: usize,
    pub exact_ground_energy: f64,
    pub seed: u64,
}

/// Optimize `num_instances` independently initialized instances and
/// aggregate cost/entropy statistics per iteration, with the exact ground
/// energy reported alongside.
pub fn run_vqe(config: &VqeConfig) -> Result<OptimRun> {
    if config.num_instances < 1 {
        return Err(Error::contract("run_vqe needs at least 1 instance"));
    }
    if config.xxz.num_qubits != config.num_qubits {
        return Err(Error::contract(format!(
            "XXZ spec is for {} qubits, circuit has {}",
            config.xxz.num_qubits, config.num_qubits
        )));
    }
    config.regime.validate()?;
    let h = build_xxz(&config.xxz)?;
    let ground = exact_ground_energy(&h)?;
    let shared_circuit = match config.ansatz {
        AnsatzKind::Mbl => Some(build_mbl_circuit(config.num_qubits, config.depth_blocks)?),
        AnsatzKind::Hea => None,
    };

    let traces: Vec<InstanceTrace> = (0..config.num_instances)
        .into_par_iter()
        .map(|instance| -> Result<InstanceTrace> {
            let mut rng = instance_rng(config.master_seed, instance as u64);
            let (circuit, params) = match config.ansatz {
                AnsatzKind::Mbl => {
                    let params = sample_mbl_params_with_rng(
                        config.num_qubits,
                        config.depth_blocks,
                        &config.regime,
                        &mut rng,
                        config.tied_blocks,
                    )?
                    .flatten();
                    (shared_circuit.clone().expect("built above"), params)
                }
                AnsatzKind::Hea => {
                    let axis_seed: u64 = rng.random();
                    let circuit =
                        build_hea_circuit(config.num_qubits, config.depth_blocks, axis_seed)?;
                    let params = sample_hea_params_with_rng(circuit.num_params(), &mut rng);
                    (circuit, params)
                }
            };
            optimize_instance(&circuit, &h, &params, config.adam, config.num_iterations).map_err(
                |e| Error::Contract(format!("instance {instance}: {e}")),
            )
        })
        .collect::<Result<_>>()?;

    let points = config.num_iterations + 1;
    let mut mean_cost = Vec::with_capacity(points);
    let mut var_cost = Vec::with_capacity(points);
    let mut mean_entropy = Vec::with_capacity(points);
    let mut var_entropy = Vec::with_capacity(points);
    for t in 0..points {
        let costs: Vec<f64> = traces.iter().map(|tr| tr.cost[t]).collect();
        let (mc, vc) = mean_and_unbiased_variance(&costs);
        mean_cost.push(mc);
        var_cost.push(vc);
        let entropies: Vec<f64> = traces.iter().map(|tr| tr.entropy_bits[t]).collect();
        let (me, ve) = mean_and_unbiased_variance(&entropies);
        mean_entropy.push(me);
        var_entropy.push(ve);
    }

    Ok(OptimRun {
        regime_label: match config.ansatz {
            AnsatzKind::Mbl => config.regime.label.as_str().to_string(),
            AnsatzKind::Hea => "hea".to_string(),
        },
        iterations: (0..points).collect(),
        mean_cost,
        var_cost,
        mean_entropy_bits: mean_entropy,
        var_entropy_bits: var_entropy,
        num_instances: config.num_instances,
        exact_ground_energy: ground,
        seed: config.master_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::J_WINDOW;
    use crate::circuit::Gate;
    use approx::assert_abs_diff_eq;

    #[test]
    fn xxz_structure_n2() {
        let h = build_xxz(&XxzSpec { num_qubits: 2, j: 1.0, delta: 1.0 }).unwrap();
        let words: Vec<(f64, String)> =
            h.terms().iter().map(|(c, s)| (*c, s.to_string())).collect();
        assert_eq!(
            words,
            vec![(-1.0, "XX".into()), (-1.0, "YY".into()), (1.0, "ZZ".into())]
        );
    }

    #[test]
    fn xxz_term_count_and_diagonal_value() {
        let h = build_xxz(&XxzSpec { num_qubits: 4, j: 1.0, delta: 1.0 }).unwrap();
        assert_eq!(h.terms().len(), 9);
        // <0...0|H|0...0> = Delta (N-1): only the ZZ terms survive, all +1.
        let zero = crate::state::StateVector::zero(4).unwrap();
        assert_abs_diff_eq!(h.expectation(&zero).unwrap(), 3.0, epsilon = 1e-12);

        let h6 = build_xxz(&XxzSpec { num_qubits: 6, j: 1.0, delta: 1.0 }).unwrap();
        let zero6 = crate::state::StateVector::zero(6).unwrap();
        assert_abs_diff_eq!(h6.expectation(&zero6).unwrap(), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn ground_energy_of_single_bond_chain() {
        let h = build_xxz(&XxzSpec { num_qubits: 2, j: 1.0, delta: 1.0 }).unwrap();
        assert_abs_diff_eq!(exact_ground_energy(&h).unwrap(), -3.0, epsilon = 1e-9);
    }

    #[test]
    fn ground_energy_of_field_sum_is_minus_n() {
        let n = 5;
        let terms: Vec<(f64, PauliString)> = (0..n)
            .map(|i| (1.0, PauliString::from_sites(n, &[(i, Pauli::Z)]).unwrap()))
            .collect();
        let h = PauliHamiltonian::new(n, terms).unwrap();
        assert_abs_diff_eq!(exact_ground_energy(&h).unwrap(), -(n as f64), epsilon = 1e-9);
    }

    #[test]
    fn lanczos_matches_dense_on_small_chains() {
        for n in [3, 5, 7] {
            let h = build_xxz(&XxzSpec { num_qubits: n, j: 1.0, delta: 0.7 }).unwrap();
            let dense = smallest_eigenvalue_dense(&dense_hamiltonian(&h).unwrap());
            let lanczos = lanczos_ground_energy(&h).unwrap();
            assert_abs_diff_eq!(dense, lanczos, epsilon = 1e-9);
        }
    }

    #[test]
    fn adam_first_step_moves_by_learning_rate() {
        let config = AdamConfig::default();
        let mut adam = AdamState::new(3, config);
        let mut params = vec![1.0, 2.0, 3.0];
        adam.step(&mut params, &[0.4, -0.4, 0.4]).unwrap();
        // First step: m_hat/sqrt(v_hat) = sign(g) up to epsilon.
        assert_abs_diff_eq!(params[0], 1.0 - config.learning_rate, epsilon = 1e-8);
        assert_abs_diff_eq!(params[1], 2.0 + config.learning_rate, epsilon = 1e-8);
        assert_abs_diff_eq!(params[2], 3.0 - config.learning_rate, epsilon = 1e-8);
    }

    #[test]
    fn adam_zero_gradient_never_moves() {
        let mut adam = AdamState::new(2, AdamConfig::default());
        let mut params = vec![0.5, -0.5];
        for _ in 0..10 {
            adam.step(&mut params, &[0.0, 0.0]).unwrap();
        }
        assert_eq!(params, vec![0.5, -0.5]);
    }

    #[test]
    fn adam_rejects_non_finite_gradients() {
        let mut adam = AdamState::new(1, AdamConfig::default());
        let mut params = vec![0.0];
        assert!(matches!(
            adam.step(&mut params, &[f64::NAN]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn adam_matches_hand_rolled_recurrence_on_quadratic() {
        // f(x) = x0^2 + 2 x1^2, grad = (2 x0, 4 x1); two explicit iterations
        // of the update recurrence written out longhand.
        let config = AdamConfig { learning_rate: 0.1, ..AdamConfig::default() };
        let mut adam = AdamState::new(2, config);
        let mut params = vec![1.0f64, 1.0f64];

        let mut reference = [1.0f64, 1.0f64];
        let mut m = [0.0f64; 2];
        let mut v = [0.0f64; 2];
        for t in 1..=2u32 {
            let g = [2.0 * reference[0], 4.0 * reference[1]];
            for k in 0..2 {
                m[k] = 0.9 * m[k] + 0.1 * g[k];
                v[k] = 0.999 * v[k] + 0.001 * g[k] * g[k];
                let m_hat = m[k] / (1.0 - 0.9f64.powi(t as i32));
                let v_hat = v[k] / (1.0 - 0.999f64.powi(t as i32));
                reference[k] -= 0.1 * m_hat / (v_hat.sqrt() + 1e-8);
            }
        }

        for _ in 0..2 {
            let g = [2.0 * params[0], 4.0 * params[1]];
            adam.step(&mut params, &g).unwrap();
        }
        assert_abs_diff_eq!(params[0], reference[0], epsilon = 1e-15);
        assert_abs_diff_eq!(params[1], reference[1], epsilon = 1e-15);
    }

    #[test]
    fn single_parameter_trace_matches_scalar_adam_reference() {
        // One RX gate, H = Z: E(theta) = cos(theta), dE = -sin(theta).
        let circuit = Circuit::new(1, vec![Gate::rx(0, 0)], 1).unwrap();
        let h = PauliHamiltonian::from_words(1, &[(1.0, "Z")]).unwrap();
        let adam = AdamConfig::default();
        let iterations = 40;
        let theta0 = 0.3;
        let trace = optimize_instance(&circuit, &h, &[theta0], adam, iterations).unwrap();

        let mut theta = theta0;
        let mut m = 0.0f64;
        let mut v = 0.0f64;
        for t in 1..=iterations {
            let expected_cost = theta.cos();
            assert_abs_diff_eq!(trace.cost[t - 1], expected_cost, epsilon = 1e-10);
            let g = -theta.sin();
            m = adam.beta1 * m + (1.0 - adam.beta1) * g;
            v = adam.beta2 * v + (1.0 - adam.beta2) * g * g;
            let m_hat = m / (1.0 - adam.beta1.powi(t as i32));
            let v_hat = v / (1.0 - adam.beta2.powi(t as i32));
            theta -= adam.learning_rate * m_hat / (v_hat.sqrt() + adam.epsilon);
        }
        assert_abs_diff_eq!(trace.cost[iterations], theta.cos(), epsilon = 1e-10);
        // The minimum of cos is approached from 0.3 toward pi.
        assert!(trace.cost[iterations] < trace.cost[0]);
    }

    #[test]
    fn zero_iteration_run_reports_initial_expectation() {
        // All-zero kick and field point draws make the circuit diagonal, so
        // the initial cost is exactly <0...0|H|0...0> = Delta (N-1).
        let n = 4;
        let regime = Regime::custom((0.0, 0.0), J_WINDOW, (0.0, 0.0));
        let config = VqeConfig {
            ansatz: AnsatzKind::Mbl,
            num_qubits: n,
            depth_blocks: 2,
            regime,
            xxz: XxzSpec { num_qubits: n, j: 1.0, delta: 1.0 },
            num_iterations: 0,
            num_instances: 3,
            master_seed: 7,
            adam: AdamConfig::default(),
            tied_blocks: false,
        };
        let run = run_vqe(&config).unwrap();
        assert_eq!(run.iterations, vec![0]);
        assert_abs_diff_eq!(run.mean_cost[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(run.mean_entropy_bits[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn vqe_respects_variational_bound_and_determinism() {
        let n = 4;
        let config = VqeConfig {
            ansatz: AnsatzKind::Mbl,
            num_qubits: n,
            depth_blocks: 4,
            regime: Regime::thermal(),
            xxz: XxzSpec { num_qubits: n, j: 1.0, delta: 1.0 },
            num_iterations: 25,
            num_instances: 4,
            master_seed: 11,
            adam: AdamConfig::default(),
            tied_blocks: false,
        };
        let run = run_vqe(&config).unwrap();
        for cost in &run.mean_cost {
            assert!(*cost >= run.exact_ground_energy - 1e-9);
        }
        // Optimization makes progress on average.
        assert!(run.mean_cost[25] < run.mean_cost[0]);

        let again = run_vqe(&config).unwrap();
        assert_eq!(run, again);
    }
}
