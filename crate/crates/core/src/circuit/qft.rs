use std::f64::consts::PI;

use super::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QftOptions {
    /// Number of smallest controlled-phase angle classes dropped (0 = exact).
    pub approximation_degree: usize,
    pub include_swaps: bool,
}

impl QftOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn approximate(degree: usize) -> Self {
        QftOptions {
            approximation_degree: degree,
            include_swaps: false,
        }
    }
}

/// Quantum Fourier transform `|x> -> M^{-1/2} sum_y e^{2 pi i x y / M} |y>`.
///
/// Without swaps the output register holds `y` bit-reversed. A controlled phase
/// `pi / 2^k` is dropped when `k > n - 1 - approximation_degree`.
pub fn qft(n_qubits: usize, opts: &QftOptions, inverse: bool) -> Result<Circuit> {
    if n_qubits == 0 {
        return Err(Error::QubitCount(0));
    }
    if opts.approximation_degree > n_qubits - 1 {
        return Err(Error::InvalidArgument(format!(
            "approximation degree {} exceeds n - 1 = {}",
            opts.approximation_degree,
            n_qubits - 1
        )));
    }
    let max_k = n_qubits - 1 - opts.approximation_degree;
    let mut c = Circuit::new(n_qubits);
    for j in (0..n_qubits).rev() {
        c.push(GateOp::H { target: j })?;
        for k in (0..j).rev() {
            let order = j - k;
            if order > max_k {
                continue;
            }
            c.push(GateOp::CP {
                control: j,
                target: k,
                phi: PI / (1u64 << order) as f64,
            })?;
        }
    }
    if opts.include_swaps {
        for i in 0..n_qubits / 2 {
            push_swap(&mut c, i, n_qubits - 1 - i)?;
        }
    }
    c.annotate(
        "qft",
        format!(
            "n={n_qubits} degree={} swaps={}",
            opts.approximation_degree, opts.include_swaps
        ),
    );
    Ok(if inverse { c.inverse() } else { c })
}

// SWAP as three CNOTs, each CNOT = H(t) CZ H(t).
fn push_swap(c: &mut Circuit, a: usize, b: usize) -> Result<()> {
    for (ctrl, tgt) in [(a, b), (b, a), (a, b)] {
        c.push(GateOp::H { target: tgt })?;
        c.push(GateOp::CP {
            control: ctrl,
            target: tgt,
            phi: PI,
        })?;
        c.push(GateOp::H { target: tgt })?;
    }
    Ok(())
}
