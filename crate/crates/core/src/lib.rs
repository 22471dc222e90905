//! Exact statevector simulation of Floquet many-body-localized variational
//! circuits, with the diagnostics used to study their trainability:
//! barren-plateau gradient variance, bipartite entanglement growth,
//! out-of-time-ordered correlators, and full ADAM-driven VQE runs against
//! an exact ground-state reference.
//!
//! The crate is organized bottom-up:
//!
//! - [`state`], [`pauli`], [`circuit`], [`dense`]: the simulator core.
//! - [`ansatz`]: the kicked-Ising MBL circuit and the hardware-efficient
//!   baseline, with regime-specific parameter sampling.
//! - [`gradient`]: adjoint differentiation plus parameter-shift and
//!   finite-difference cross-checks, and ensemble gradient variance.
//! - [`entropy`], [`otoc`]: area-law/volume-law diagnostics.
//! - [`vqe`]: the XXZ cost Hamiltonian, ADAM, and the optimization loop.
//! - [`experiment`]: seeded, worker-count-independent experiment sweeps
//!   with CSV/JSON/SVG emission (the `mblvqe` binary drives these).

pub mod ansatz;
pub mod circuit;
pub mod dense;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod gradient;
pub mod otoc;
pub mod pauli;
pub mod state;
mod streams;
pub mod vqe;

pub use circuit::{Circuit, Gate, GateKind};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliHamiltonian, PauliString};
pub use state::StateVector;
