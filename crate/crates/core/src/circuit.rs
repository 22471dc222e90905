//! Parameterized circuits: gates, parameter slots, and chain-rule scales.
//!
//! Every parameterized gate is `exp(-i * theta * P / 2)` for a Pauli-string
//! generator P, where `theta = scale * params[param_slot]`. The `scale`
//! field absorbs coefficient conventions (e.g. a ZZ coupling `2J` becomes an
//! RZZ with scale 2 bound to a slot holding `J`) so that gradients carry the
//! chain rule exactly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::Pauli;
use crate::state::{self, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    /// exp(-i theta X / 2)
    Rx,
    /// exp(-i theta Y / 2)
    Ry,
    /// exp(-i theta Z / 2)
    Rz,
    /// exp(-i theta ZZ / 2) on a qubit pair
    Rzz,
    /// Controlled-NOT (first target is the control)
    Cnot,
    /// Fixed Pauli X
    FixedX,
    /// Fixed single-qubit unitary, row-major
    FixedUnitary([[Complex64; 2]; 2]),
}

impl GateKind {
    pub fn is_parameterized(&self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Rzz)
    }

    fn is_two_qubit(&self) -> bool {
        matches!(self, GateKind::Rzz | GateKind::Cnot)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    q0: usize,
    q1: Option<usize>,
    param_slot: Option<usize>,
    scale: f64,
}

impl Gate {
    pub fn rx(qubit: usize, slot: usize) -> Self {
        Gate { kind: GateKind::Rx, q0: qubit, q1: None, param_slot: Some(slot), scale: 1.0 }
    }

    pub fn ry(qubit: usize, slot: usize) -> Self {
        Gate { kind: GateKind::Ry, q0: qubit, q1: None, param_slot: Some(slot), scale: 1.0 }
    }

    pub fn rz(qubit: usize, slot: usize) -> Self {
        Gate { kind: GateKind::Rz, q0: qubit, q1: None, param_slot: Some(slot), scale: 1.0 }
    }

    pub fn rzz(qa: usize, qb: usize, slot: usize) -> Self {
        Gate { kind: GateKind::Rzz, q0: qa, q1: Some(qb), param_slot: Some(slot), scale: 1.0 }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate { kind: GateKind::Cnot, q0: control, q1: Some(target), param_slot: None, scale: 1.0 }
    }

    pub fn x(qubit: usize) -> Self {
        Gate { kind: GateKind::FixedX, q0: qubit, q1: None, param_slot: None, scale: 1.0 }
    }

    pub fn fixed_unitary(qubit: usize, matrix: [[Complex64; 2]; 2]) -> Self {
        Gate { kind: GateKind::FixedUnitary(matrix), q0: qubit, q1: None, param_slot: None, scale: 1.0 }
    }

    /// Multiply the bound parameter by `scale` before exponentiation.
    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> (usize, Option<usize>) {
        (self.q0, self.q1)
    }

    pub fn param_slot(&self) -> Option<usize> {
        self.param_slot
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn validate(&self, num_qubits: usize, num_params: usize) -> Result<()> {
        if self.q0 >= num_qubits || self.q1.is_some_and(|q| q >= num_qubits) {
            return Err(Error::contract(format!(
                "gate targets ({}, {:?}) out of range for {num_qubits} qubits",
                self.q0, self.q1
            )));
        }
        if self.kind.is_two_qubit() != self.q1.is_some() {
            return Err(Error::contract("gate arity does not match its kind"));
        }
        if self.q1 == Some(self.q0) {
            return Err(Error::contract(format!("duplicate gate target {}", self.q0)));
        }
        if self.kind.is_parameterized() != self.param_slot.is_some() {
            return Err(Error::contract(
                "parameterized gates carry a slot; fixed gates carry none",
            ));
        }
        if self.param_slot.is_some_and(|s| s >= num_params) {
            return Err(Error::contract(format!(
                "param slot {} out of range for {num_params} parameters",
                self.param_slot.unwrap()
            )));
        }
        Ok(())
    }

    fn angle(&self, params: &[f64]) -> f64 {
        self.scale * params[self.param_slot.expect("parameterized gate")]
    }

    /// Apply this single gate to a state, binding any parameter slot from
    /// `params`. Norm is preserved to machine precision per gate.
    pub fn apply_to(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        self.validate(state.num_qubits(), params.len())?;
        self.apply(state.amplitudes_mut(), params);
        Ok(())
    }

    pub(crate) fn apply(&self, amps: &mut [Complex64], params: &[f64]) {
        match &self.kind {
            GateKind::Rx => state::apply_1q(amps, self.q0, &state::rx_matrix(self.angle(params))),
            GateKind::Ry => state::apply_1q(amps, self.q0, &state::ry_matrix(self.angle(params))),
            GateKind::Rz => state::apply_rz(amps, self.q0, self.angle(params)),
            GateKind::Rzz => state::apply_rzz(amps, self.q0, self.q1.unwrap(), self.angle(params)),
            GateKind::Cnot => state::apply_cnot(amps, self.q0, self.q1.unwrap()),
            GateKind::FixedX => state::apply_x(amps, self.q0),
            GateKind::FixedUnitary(m) => state::apply_1q(amps, self.q0, m),
        }
    }

    pub(crate) fn apply_dagger(&self, amps: &mut [Complex64], params: &[f64]) {
        match &self.kind {
            GateKind::Rx => state::apply_1q(amps, self.q0, &state::rx_matrix(-self.angle(params))),
            GateKind::Ry => state::apply_1q(amps, self.q0, &state::ry_matrix(-self.angle(params))),
            GateKind::Rz => state::apply_rz(amps, self.q0, -self.angle(params)),
            GateKind::Rzz => state::apply_rzz(amps, self.q0, self.q1.unwrap(), -self.angle(params)),
            GateKind::Cnot => state::apply_cnot(amps, self.q0, self.q1.unwrap()),
            GateKind::FixedX => state::apply_x(amps, self.q0),
            GateKind::FixedUnitary(m) => {
                let adj = [
                    [m[0][0].conj(), m[1][0].conj()],
                    [m[0][1].conj(), m[1][1].conj()],
                ];
                state::apply_1q(amps, self.q0, &adj);
            }
        }
    }

    /// Site support of the gate's Pauli-string generator P, for gates of
    /// the form exp(-i theta P / 2). Fixed gates have no generator.
    pub(crate) fn generator_sites(&self) -> Option<Vec<(usize, Pauli)>> {
        match self.kind {
            GateKind::Rx => Some(vec![(self.q0, Pauli::X)]),
            GateKind::Ry => Some(vec![(self.q0, Pauli::Y)]),
            GateKind::Rz => Some(vec![(self.q0, Pauli::Z)]),
            GateKind::Rzz => Some(vec![(self.q0, Pauli::Z), (self.q1.unwrap(), Pauli::Z)]),
            _ => None,
        }
    }
}

/// An ordered gate list over a fixed qubit register and parameter table.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    num_params: usize,
    depth_blocks: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>, num_params: usize) -> Result<Self> {
        Circuit::with_blocks(num_qubits, gates, num_params, 1)
    }

    /// A circuit of `depth_blocks` equally sized repeated layer blocks.
    pub fn with_blocks(
        num_qubits: usize,
        gates: Vec<Gate>,
        num_params: usize,
        depth_blocks: usize,
    ) -> Result<Self> {
        if num_qubits < 1 {
            return Err(Error::contract("circuit needs at least one qubit"));
        }
        if depth_blocks < 1 {
            return Err(Error::contract("depth_blocks must be at least 1"));
        }
        if !gates.is_empty() && !gates.len().is_multiple_of(depth_blocks) {
            return Err(Error::contract(format!(
                "{} gates cannot split into {depth_blocks} equal blocks",
                gates.len()
            )));
        }
        let mut referenced = vec![false; num_params];
        for gate in &gates {
            gate.validate(num_qubits, num_params)?;
            if let Some(slot) = gate.param_slot {
                referenced[slot] = true;
            }
        }
        if let Some(unused) = referenced.iter().position(|r| !r) {
            return Err(Error::contract(format!("parameter slot {unused} is never referenced")));
        }
        Ok(Circuit { num_qubits, gates, num_params, depth_blocks })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn depth_blocks(&self) -> usize {
        self.depth_blocks
    }

    pub fn gates_per_block(&self) -> usize {
        self.gates.len().checked_div(self.depth_blocks).unwrap_or(0)
    }

    /// Truncate to the first `blocks` layer blocks, keeping the full
    /// parameter table so one parameter vector serves every prefix.
    pub fn prefix_blocks(&self, blocks: usize) -> Result<Circuit> {
        if blocks < 1 || blocks > self.depth_blocks {
            return Err(Error::contract(format!(
                "prefix of {blocks} blocks out of range (depth {})",
                self.depth_blocks
            )));
        }
        let keep = self.gates_per_block() * blocks;
        let mut gates = self.gates.clone();
        gates.truncate(keep);
        // Bypass the coverage check: trailing-block slots are intentionally
        // unused in a prefix.
        Ok(Circuit {
            num_qubits: self.num_qubits,
            gates,
            num_params: self.num_params,
            depth_blocks: blocks,
        })
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() < self.num_params {
            return Err(Error::contract(format!(
                "{} parameters supplied, circuit needs {}",
                params.len(),
                self.num_params
            )));
        }
        Ok(())
    }

    /// Apply the full circuit to `state` in place.
    pub fn apply_to(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        self.check_params(params)?;
        if state.num_qubits() != self.num_qubits {
            return Err(Error::contract(format!(
                "{}-qubit circuit applied to {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        let amps = state.amplitudes_mut();
        for gate in &self.gates {
            gate.apply(amps, params);
        }
        Ok(())
    }

    /// Apply only block `block` (0-based) to `state` in place.
    pub fn apply_block_to(&self, state: &mut StateVector, block: usize, params: &[f64]) -> Result<()> {
        self.check_params(params)?;
        if block >= self.depth_blocks {
            return Err(Error::contract(format!(
                "block {block} out of range (depth {})",
                self.depth_blocks
            )));
        }
        let per = self.gates_per_block();
        let amps = state.amplitudes_mut();
        for gate in &self.gates[block * per..(block + 1) * per] {
            gate.apply(amps, params);
        }
        Ok(())
    }

    /// |0...0> evolved through the circuit.
    pub fn run_from_zero(&self, params: &[f64]) -> Result<StateVector> {
        let mut state = StateVector::zero(self.num_qubits)?;
        self.apply_to(&mut state, params)?;
        Ok(state)
    }
}
