//! Dense-matrix paths for small N: explicit circuit unitaries and
//! Pauli-sum Hamiltonian assembly. Capped at [`MAX_DENSE_QUBITS`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::PauliHamiltonian;
use crate::state::StateVector;

/// Largest qubit count for dense 2^N x 2^N matrices.
pub const MAX_DENSE_QUBITS: usize = 12;

pub(crate) fn check_dense_cap(num_qubits: usize, what: &'static str) -> Result<()> {
    if num_qubits > MAX_DENSE_QUBITS {
        return Err(Error::ResourceCap {
            what,
            requested: num_qubits,
            cap: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

/// The circuit's full unitary, built column-by-column by evolving each
/// computational basis state.
pub fn dense_unitary(circuit: &Circuit, params: &[f64]) -> Result<DMatrix<Complex64>> {
    check_dense_cap(circuit.num_qubits(), "dense unitary")?;
    if params.len() < circuit.num_params() {
        return Err(Error::contract(format!(
            "{} parameters supplied, circuit needs {}",
            params.len(),
            circuit.num_params()
        )));
    }
    let dim = 1usize << circuit.num_qubits();
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let mut state = StateVector::basis(circuit.num_qubits(), col)?;
        circuit.apply_to(&mut state, params)?;
        for (row, amp) in state.amplitudes().iter().enumerate() {
            matrix[(row, col)] = *amp;
        }
    }
    Ok(matrix)
}

/// Assemble the Hamiltonian as a dense Hermitian matrix.
pub fn dense_hamiltonian(h: &PauliHamiltonian) -> Result<DMatrix<Complex64>> {
    check_dense_cap(h.num_qubits(), "dense Hamiltonian")?;
    let dim = 1usize << h.num_qubits();
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    let mut column = vec![Complex64::ZERO; dim];
    let mut basis = vec![Complex64::ZERO; dim];
    for col in 0..dim {
        basis[col] = Complex64::ONE;
        column.fill(Complex64::ZERO);
        for (coeff, string) in h.terms() {
            string.accumulate_apply(Complex64::new(*coeff, 0.0), &basis, &mut column);
        }
        for (row, v) in column.iter().enumerate() {
            matrix[(row, col)] = *v;
        }
        basis[col] = Complex64::ZERO;
    }
    Ok(matrix)
}

/// Max entrywise |U^dag U - I|, a unitarity defect measure.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let gram = u.adjoint() * u;
    let dim = gram.nrows();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
            worst = worst.max((gram[(i, j)] - expected).norm());
        }
    }
    worst
}

/// Max entrywise |phase * a - b| minimized over a unit phase, fixed by the
/// largest-magnitude entry of `a`. Global phase is unobservable, so circuit
/// equivalence checks use this distance.
pub fn distance_up_to_global_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut pivot = 0usize;
    let mut best = 0.0f64;
    for (idx, v) in a.iter().enumerate() {
        if v.norm() > best {
            best = v.norm();
            pivot = idx;
        }
    }
    if best == 0.0 {
        return b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let a_pivot = a[pivot];
    let b_pivot = b[pivot];
    let phase = if b_pivot.norm() == 0.0 {
        Complex64::ONE
    } else {
        let ratio = b_pivot / a_pivot;
        ratio / ratio.norm()
    };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (phase * x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn empty_circuit_gives_identity() {
        let circuit = Circuit::new(2, vec![], 0).unwrap();
        let u = dense_unitary(&circuit, &[]).unwrap();
        assert_eq!(u, DMatrix::identity(4, 4));
    }

    #[test]
    fn cnot_dense_matrix_is_the_standard_permutation() {
        // Control qubit 0 (LSB), target qubit 1: |01> <-> |11>.
        let circuit = Circuit::new(2, vec![Gate::cnot(0, 1)], 0).unwrap();
        let u = dense_unitary(&circuit, &[]).unwrap();
        let mut expected = DMatrix::<Complex64>::zeros(4, 4);
        expected[(0, 0)] = Complex64::ONE;
        expected[(2, 2)] = Complex64::ONE;
        expected[(3, 1)] = Complex64::ONE;
        expected[(1, 3)] = Complex64::ONE;
        assert_eq!(u, expected);
    }

    #[test]
    fn dense_cap_is_enforced() {
        let circuit = Circuit::new(13, vec![Gate::x(0)], 0).unwrap();
        assert!(matches!(
            dense_unitary(&circuit, &[]),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn dense_hamiltonian_matches_simple_operator() {
        // H = 0.5 ZI + XX on 2 qubits (site 0 = first letter = LSB).
        let h = PauliHamiltonian::from_words(2, &[(0.5, "ZI"), (1.0, "XX")]).unwrap();
        let m = dense_hamiltonian(&h).unwrap();
        // Diagonal from ZI: +0.5 where bit0 clear, -0.5 where bit0 set.
        assert_eq!(m[(0, 0)], Complex64::new(0.5, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(-0.5, 0.0));
        // XX flips both bits.
        assert_eq!(m[(3, 0)], Complex64::ONE);
        assert_eq!(m[(0, 3)], Complex64::ONE);
        assert_eq!(m[(2, 1)], Complex64::ONE);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let circuit = Circuit::new(1, vec![Gate::rz(0, 0)], 1).unwrap();
        let u = dense_unitary(&circuit, &[0.77]).unwrap();
        let phased = u.map(|v| v * Complex64::from_polar(1.0, 1.23));
        assert!(distance_up_to_global_phase(&u, &phased) < 1e-12);
        assert!(unitarity_defect(&u) < 1e-12);
    }
}
