//! Grid-based quantum wave-packet dynamics on a gate-level statevector emulator.
//!
//! The wavefunction of a single coordinate `r` is sampled on `M = 2^n` equidistant
//! points and stored in an `n`-qubit register, qubit 0 being the least significant
//! bit of the grid index. Time evolution uses the symmetric split-operator step
//! `exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2)`, realized either as a gate circuit
//! (phase polynomials plus a swap-free QFT) or by the FFT reference propagator in
//! [`oracle`].

pub mod circuit;
pub mod error;
pub mod gate;
pub mod grid;
pub mod harness;
pub mod oracle;
pub mod qasm;
pub mod state;
pub mod units;

pub use circuit::{Circuit, CircuitStats, PropagationMode, QftOptions};
pub use error::{Error, Result};
pub use gate::GateOp;
pub use grid::{Grid, MomentumGrid, Observables, PotentialSpec, WavePacketSpec};
pub use state::{NoiseSpec, StateVector};

/// Largest register size handled by the dense statevector.
pub const MAX_QUBITS: usize = 24;
