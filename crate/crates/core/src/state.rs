//! Statevector storage and the gate kernels that act on it.
//!
//! Amplitudes are stored as a flat `Vec<Complex64>` (interleaved re/im in
//! memory) with qubit 0 as the least significant bit of the basis index.
//! Rotation conventions are half-angle throughout:
//! `RX(t) = exp(-i t X / 2)`, `RZ(t) = exp(-i t Z / 2)`,
//! `RZZ(t) = exp(-i t Z(x)Z / 2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest qubit count the statevector path accepts (16 MiB of amplitudes).
pub const MAX_QUBITS: usize = 20;

/// A pure state of `num_qubits` qubits as 2^N complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros product state |0...0>.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        amps[0] = Complex64::ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// A single computational basis state |index>.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if index >= 1 << num_qubits {
            return Err(Error::contract(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1 << num_qubits];
        amps[index] = Complex64::ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// Wrap an amplitude vector. The vector must have length 2^N and unit
    /// L2 norm within 1e-10.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if amps.len() != 1 << num_qubits {
            return Err(Error::contract(format!(
                "amplitude vector of length {} does not match {} qubits",
                amps.len(),
                num_qubits
            )));
        }
        let state = StateVector { num_qubits, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::contract(format!(
                "amplitude vector is not normalized (norm {norm})"
            )));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Hilbert-space dimension 2^N.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self|other> with conjugation on `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::contract(format!(
                "inner product between {}-qubit and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(inner(&self.amps, &other.amps))
    }
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if num_qubits < 1 {
        return Err(Error::contract("qubit count must be at least 1"));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::ResourceCap {
            what: "statevector",
            requested: num_qubits,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

/// <a|b> on raw amplitude slices.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Apply an arbitrary 2x2 unitary `m` (row-major) to `target`.
pub(crate) fn apply_1q(amps: &mut [Complex64], target: usize, m: &[[Complex64; 2]; 2]) {
    let stride = 1 << target;
    let mut base = 0;
    while base < amps.len() {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += stride << 1;
    }
}

/// RZ(theta) = diag(e^{-i theta/2}, e^{+i theta/2}).
pub(crate) fn apply_rz(amps: &mut [Complex64], target: usize, theta: f64) {
    let phase0 = Complex64::from_polar(1.0, -theta / 2.0);
    let phase1 = phase0.conj();
    let stride = 1 << target;
    let mut base = 0;
    while base < amps.len() {
        for i in base..base + stride {
            amps[i] *= phase0;
            amps[i + stride] *= phase1;
        }
        base += stride << 1;
    }
}

/// RZZ(theta) = exp(-i theta ZZ / 2): phase by spin parity of the two bits.
pub(crate) fn apply_rzz(amps: &mut [Complex64], q0: usize, q1: usize, theta: f64) {
    let even = Complex64::from_polar(1.0, -theta / 2.0);
    let odd = even.conj();
    let m0 = 1usize << q0;
    let m1 = 1usize << q1;
    for (i, amp) in amps.iter_mut().enumerate() {
        let parity = ((i & m0) != 0) ^ ((i & m1) != 0);
        *amp *= if parity { odd } else { even };
    }
}

pub(crate) fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize) {
    let cm = 1usize << control;
    let tm = 1usize << target;
    for i in 0..amps.len() {
        if i & cm != 0 && i & tm == 0 {
            amps.swap(i, i | tm);
        }
    }
}

pub(crate) fn apply_x(amps: &mut [Complex64], target: usize) {
    let tm = 1usize << target;
    for i in 0..amps.len() {
        if i & tm == 0 {
            amps.swap(i, i | tm);
        }
    }
}

pub(crate) fn rx_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

pub(crate) fn ry_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new((theta / 2.0).sin(), 0.0);
    [[c, -s], [s, c]]
}
