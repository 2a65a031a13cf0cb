use super::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::grid::Grid;

/// Phase-polynomial coefficients of `exp(-i V(r_m) dt) = exp(i (m^2 alpha + m beta + gamma))`.
/// `gamma` is a global phase and is never applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// `P(-v_min dt)` on qubit `n - 2`: the wells are the indices with that bit set.
pub fn double_well_op(n_qubits: usize, v_min: f64, dt: f64) -> Result<Circuit> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(
            "double-well operator needs at least 2 qubits".into(),
        ));
    }
    let mut c = Circuit::new(n_qubits);
    c.push(GateOp::P {
        target: n_qubits - 2,
        phi: -v_min * dt,
    })?;
    Ok(c)
}

pub fn harmonic_angles(grid: &Grid, k: f64, r_eq: f64, dt: f64) -> Result<PotentialAngles> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "force constant must be non-negative, got {k}"
        )));
    }
    let dr = grid.delta_r();
    let alpha = -k * dr * dr * dt / 2.0;
    let offset = 2.0 * grid.r_min() - 2.0 * r_eq + dr;
    let beta = alpha * offset / dr;
    let gamma = alpha * (offset / (2.0 * dr)).powi(2);
    Ok(PotentialAngles { alpha, beta, gamma })
}

pub fn harmonic_op(n_qubits: usize, angles: &PotentialAngles) -> Result<Circuit> {
    phase_polynomial(n_qubits, angles.alpha, angles.beta, |j| j)
}

/// Diagonal `e^{i (m^2 quad + m lin)}` from the binary expansion of `m`:
/// `P(2^j lin)` and `P(4^j quad)` on each bit, `CP(2^{j+k+1} quad)` on each pair.
/// `wire` maps a bit position of `m` to the qubit carrying it.
pub(super) fn phase_polynomial(
    n_qubits: usize,
    quad: f64,
    lin: f64,
    wire: impl Fn(usize) -> usize,
) -> Result<Circuit> {
    if n_qubits == 0 {
        return Err(Error::QubitCount(0));
    }
    let mut c = Circuit::new(n_qubits);
    for j in 0..n_qubits {
        c.push(GateOp::P {
            target: wire(j),
            phi: (1u64 << j) as f64 * lin,
        })?;
    }
    for j in 0..n_qubits {
        c.push(GateOp::P {
            target: wire(j),
            phi: (1u64 << (2 * j)) as f64 * quad,
        })?;
    }
    for k in 1..n_qubits {
        for j in 0..k {
            c.push(GateOp::CP {
                control: wire(j),
                target: wire(k),
                phi: (1u64 << (j + k + 1)) as f64 * quad,
            })?;
        }
    }
    Ok(c)
}
