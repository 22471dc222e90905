//! Pauli strings and real-weighted Pauli-sum Hamiltonians.
//!
//! A Pauli string acts on a basis state as a bit-flip plus phase:
//! `P|n> = phase(n) |n ^ x_mask>` with
//! `phase(n) = i^{#Y} * (-1)^{popcount(n & z_mask)}`, where `x_mask` marks
//! X/Y sites and `z_mask` marks Z/Y sites. All kernels below are single
//! O(2^N) passes built on that identity.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | 'i' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            other => Err(Error::contract(format!("invalid Pauli letter '{other}'"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A length-N word over {I,X,Y,Z} with precomputed action masks.
/// Site k corresponds to bit k of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    ops: Vec<Pauli>,
    x_mask: u64,
    z_mask: u64,
    /// i^{#Y}
    phase: Complex64,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        let mut num_y = 0u32;
        for (k, op) in ops.iter().enumerate() {
            match op {
                Pauli::I => {}
                Pauli::X => x_mask |= 1 << k,
                Pauli::Y => {
                    x_mask |= 1 << k;
                    z_mask |= 1 << k;
                    num_y += 1;
                }
                Pauli::Z => z_mask |= 1 << k,
            }
        }
        const I_POWERS: [Complex64; 4] = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        PauliString {
            ops,
            x_mask,
            z_mask,
            phase: I_POWERS[(num_y % 4) as usize],
        }
    }

    /// Parse a word such as "XIZY"; site 0 is the first character.
    pub fn parse(word: &str) -> Result<Self> {
        let ops = word.chars().map(Pauli::from_char).collect::<Result<_>>()?;
        Ok(PauliString::new(ops))
    }

    /// A word that is identity everywhere except `sites[k] = ops[k]`.
    pub fn from_sites(num_qubits: usize, sites: &[(usize, Pauli)]) -> Result<Self> {
        let mut ops = vec![Pauli::I; num_qubits];
        for &(site, op) in sites {
            if site >= num_qubits {
                return Err(Error::contract(format!(
                    "Pauli site {site} out of range for {num_qubits} qubits"
                )));
            }
            ops[site] = op;
        }
        Ok(PauliString::new(ops))
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// True when the word is diagonal in the computational basis (I/Z only).
    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    #[inline]
    fn phase_at(&self, n: usize) -> Complex64 {
        let sign = (n as u64 & self.z_mask).count_ones() & 1;
        if sign == 1 {
            -self.phase
        } else {
            self.phase
        }
    }

    /// out += coeff * P|input>.
    pub(crate) fn accumulate_apply(
        &self,
        coeff: Complex64,
        input: &[Complex64],
        out: &mut [Complex64],
    ) {
        let x = self.x_mask as usize;
        for n in 0..input.len() {
            out[n ^ x] += coeff * self.phase_at(n) * input[n];
        }
    }

    /// <bra|P|ket> on raw amplitude slices.
    pub(crate) fn bilinear(&self, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
        let x = self.x_mask as usize;
        let mut acc = Complex64::ZERO;
        for n in 0..ket.len() {
            acc += bra[n ^ x].conj() * self.phase_at(n) * ket[n];
        }
        acc
    }

    /// <psi|P|psi>.
    pub(crate) fn expectation(&self, amps: &[Complex64]) -> Complex64 {
        self.bilinear(amps, amps)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            write!(f, "{}", op.as_char())?;
        }
        Ok(())
    }
}

/// A Hermitian operator as a real-weighted sum of Pauli strings.
/// Duplicate words are merged at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    num_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliHamiltonian {
    pub fn new(num_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let mut merged: Vec<(f64, PauliString)> = Vec::with_capacity(terms.len());
        for (coeff, string) in terms {
            if !coeff.is_finite() {
                return Err(Error::NonFinite(format!("coefficient of term {string}")));
            }
            if string.len() != num_qubits {
                return Err(Error::contract(format!(
                    "term {string} has {} sites, expected {num_qubits}",
                    string.len()
                )));
            }
            match merged.iter_mut().find(|(_, s)| s.ops == string.ops) {
                Some((c, _)) => *c += coeff,
                None => merged.push((coeff, string)),
            }
        }
        Ok(PauliHamiltonian {
            num_qubits,
            terms: merged,
        })
    }

    /// Parse terms given as (coefficient, word) pairs, e.g. `(0.5, "ZZI")`.
    pub fn from_words(num_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(c, w)| Ok((*c, PauliString::parse(w)?)))
            .collect::<Result<Vec<_>>>()?;
        PauliHamiltonian::new(num_qubits, parsed)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Largest possible |eigenvalue|: sum of |coefficients|.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    /// <psi|H|psi>. The imaginary residue of the accumulated value is
    /// checked against 1e-10 before truncation to the real part.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::contract(format!(
                "expectation of {}-qubit operator on {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        let amps = state.amplitudes();
        let mut acc = Complex64::ZERO;
        for (coeff, string) in &self.terms {
            acc += coeff * string.expectation(amps);
        }
        debug_assert!(
            acc.im.abs() < 1e-10,
            "imaginary residue {} in expectation value",
            acc.im
        );
        Ok(acc.re)
    }

    /// H|psi> on a raw amplitude slice.
    pub(crate) fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; amps.len()];
        for (coeff, string) in &self.terms {
            string.accumulate_apply(Complex64::new(*coeff, 0.0), amps, &mut out);
        }
        out
    }
}
