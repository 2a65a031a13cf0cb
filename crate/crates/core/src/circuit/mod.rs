//! Gate circuits for grid dynamics: QFT, state preparation, phase-polynomial
//! potential and kinetic operators, and the composed split-operator step.

mod init;
mod kinetic;
mod potential;
mod qft;
mod step;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gate::{GateKind, GateOp};

pub use init::{
    gaussian_packet_init, momentum_kick, step_packet_init, PrepTopology, StatePrep,
    MIN_PREP_FIDELITY,
};
pub use kinetic::{
    kinetic_angles, kinetic_phase_op, kinetic_step, verified_x_placement, KineticAngles,
    XPlacement,
};
pub use potential::{double_well_op, harmonic_angles, harmonic_op, PotentialAngles};
pub use qft::{qft, QftOptions};
pub use step::{build_propagation, split_step, PropagationMode, StepFactory};

/// Ordered gate list on `n_qubits` wires plus free-form build annotations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<GateOp>,
    metadata: BTreeMap<String, String>,
}

/// Gate census and depth, recomputed from the gate list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CircuitStats {
    pub p: usize,
    pub ry: usize,
    pub x: usize,
    pub h: usize,
    pub cp: usize,
    pub total: usize,
    pub two_qubit: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<GateOp>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`'s gates (and annotations) after this circuit's.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        for (k, v) in &other.metadata {
            self.metadata.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Ok(())
    }

    pub fn then(mut self, other: &Circuit) -> Result<Self> {
        self.append(other)?;
        Ok(self)
    }

    /// Reversed gate order with negated angles.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(GateOp::inverse).collect(),
            metadata: self.metadata.clone(),
        }
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn annotate(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.insert(key.into(), value.into());
    }

    pub fn stats(&self) -> CircuitStats {
        let mut stats = CircuitStats::default();
        let mut level = vec![0usize; self.n_qubits];
        for g in &self.gates {
            match g.kind() {
                GateKind::P => stats.p += 1,
                GateKind::Ry => stats.ry += 1,
                GateKind::X => stats.x += 1,
                GateKind::H => stats.h += 1,
                GateKind::CP => stats.cp += 1,
            }
            let t = g.target();
            let layer = match g.control() {
                Some(c) => level[c].max(level[t]) + 1,
                None => level[t] + 1,
            };
            level[t] = layer;
            if let Some(c) = g.control() {
                level[c] = layer;
            }
        }
        stats.total = self.gates.len();
        stats.two_qubit = stats.cp;
        stats.depth = level.into_iter().max().unwrap_or(0);
        stats
    }
}

impl fmt::Display for CircuitStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} gates (p {}, ry {}, x {}, h {}, cp {}), depth {}",
            self.total, self.p, self.ry, self.x, self.h, self.cp, self.depth
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_and_depth() {
        let c = Circuit::from_gates(
            3,
            vec![
                GateOp::H { target: 0 },
                GateOp::H { target: 1 },
                GateOp::CP { control: 0, target: 2, phi: 0.1 },
                GateOp::X { target: 1 },
                GateOp::P { target: 2, phi: 0.2 },
            ],
        )
        .unwrap();
        let s = c.stats();
        assert_eq!((s.h, s.cp, s.x, s.p, s.total, s.two_qubit), (2, 1, 1, 1, 5, 1));
        assert_eq!(s.depth, 3);
        assert_eq!(Circuit::new(4).stats().depth, 0);
    }

    #[test]
    fn push_rejects_bad_index() {
        let mut c = Circuit::new(2);
        assert!(c.push(GateOp::X { target: 2 }).is_err());
        assert!(c.append(&Circuit::new(3)).is_err());
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let c = Circuit::from_gates(
            2,
            vec![GateOp::Ry { target: 0, phi: 0.3 }, GateOp::CP { control: 0, target: 1, phi: 0.5 }],
        )
        .unwrap();
        let inv = c.inverse();
        assert_eq!(
            inv.gates(),
            &[GateOp::CP { control: 0, target: 1, phi: -0.5 }, GateOp::Ry { target: 0, phi: -0.3 }]
        );
    }
}
