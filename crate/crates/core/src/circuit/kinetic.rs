use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Mutex;

use num_complex::Complex64;

use super::potential::phase_polynomial;
use super::qft::{qft, QftOptions};
use super::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::grid::Grid;
use crate::oracle;
use crate::state::StateVector;

/// `exp(-i p_m^2 dt / 2 mu) = exp(i (m^2 theta + m phi + delta))`; `delta` is never applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticAngles {
    pub theta: f64,
    pub phi: f64,
    pub delta: f64,
}

pub fn kinetic_angles(grid: &Grid, mu: f64, dt: f64) -> Result<KineticAngles> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgument(format!("mass must be positive, got {mu}")));
    }
    let size = grid.size() as f64;
    let theta = -(2.0 * PI / grid.extent()).powi(2) * dt / (2.0 * mu);
    Ok(KineticAngles {
        theta,
        phi: -theta * size,
        delta: theta * size * size / 4.0,
    })
}

/// Kinetic phase polynomial addressed to the bit-reversed register left by the
/// swap-free QFT: bit `j` of the momentum index lives on qubit `n - 1 - j`.
pub fn kinetic_phase_op(n_qubits: usize, angles: &KineticAngles) -> Result<Circuit> {
    phase_polynomial(n_qubits, angles.theta, angles.phi, |j| n_qubits - 1 - j)
}

/// Where the `X` on qubit 0 goes inside the QFT ... IQFT sandwich.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XPlacement {
    /// `X` right after the QFT and again right before the IQFT.
    Sandwich,
    /// A single `X` between the QFT and the phase block.
    BeforePhase,
    /// A single `X` between the phase block and the IQFT.
    AfterPhase,
}

impl XPlacement {
    const CANDIDATES: [XPlacement; 3] = [
        XPlacement::Sandwich,
        XPlacement::BeforePhase,
        XPlacement::AfterPhase,
    ];
}

impl fmt::Display for XPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            XPlacement::Sandwich => "sandwich",
            XPlacement::BeforePhase => "before-phase",
            XPlacement::AfterPhase => "after-phase",
        })
    }
}

const SELF_TEST_MAX_QUBITS: usize = 6;
const SELF_TEST_TOLERANCE: f64 = 1e-12;

static VERIFIED: Mutex<BTreeMap<usize, XPlacement>> = Mutex::new(BTreeMap::new());

fn assemble(
    n_qubits: usize,
    angles: &KineticAngles,
    opts: &QftOptions,
    placement: XPlacement,
) -> Result<Circuit> {
    let forward = qft(n_qubits, opts, false)?;
    let backward = qft(n_qubits, opts, true)?;
    let phase = kinetic_phase_op(n_qubits, angles)?;
    let flip = Circuit::from_gates(n_qubits, vec![GateOp::X { target: 0 }])?;
    let mut c = forward;
    match placement {
        XPlacement::Sandwich => {
            c.append(&flip)?;
            c.append(&phase)?;
            c.append(&flip)?;
        }
        XPlacement::BeforePhase => {
            c.append(&flip)?;
            c.append(&phase)?;
        }
        XPlacement::AfterPhase => {
            c.append(&phase)?;
            c.append(&flip)?;
        }
    }
    c.append(&backward)?;
    Ok(c)
}

/// Largest deviation between the circuit and the FFT propagator over all basis
/// states, after removing one common global phase.
fn oracle_deviation(circuit: &Circuit, grid: &Grid, mu: f64, dt: f64) -> Result<f64> {
    let n = grid.n_qubits();
    let mut global: Option<Complex64> = None;
    let mut worst: f64 = 0.0;
    for m in 0..grid.size() {
        let mut s = StateVector::basis(n, m)?;
        s.apply_circuit(circuit, None)?;
        let reference = oracle::kinetic_apply(basis_vector(grid.size(), m).as_slice(), grid, mu, dt)?;
        let phase = *global.get_or_insert_with(|| {
            let ov: Complex64 = reference
                .iter()
                .zip(s.amplitudes())
                .map(|(a, b)| a.conj() * b)
                .sum();
            if ov.norm() > 0.0 {
                ov / ov.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        for (a, b) in reference.iter().zip(s.amplitudes()) {
            worst = worst.max((a * phase - b).norm());
        }
    }
    Ok(worst)
}

fn basis_vector(size: usize, m: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); size];
    v[m] = Complex64::new(1.0, 0.0);
    v
}

/// X-gate placement that makes the exact-QFT composite equal the FFT propagator.
///
/// Checked once per register size up to 6 qubits (generic test angles, all basis
/// states) and cached; larger registers reuse the 6-qubit result.
pub fn verified_x_placement(n_qubits: usize) -> Result<XPlacement> {
    if n_qubits == 0 {
        return Err(Error::QubitCount(0));
    }
    let probe = n_qubits.min(SELF_TEST_MAX_QUBITS);
    if let Some(p) = VERIFIED.lock().expect("placement cache poisoned").get(&probe) {
        return Ok(*p);
    }
    let grid = Grid::new(0.0, 5.0, probe)?;
    let (mu, dt) = (1.0, 0.37);
    let angles = kinetic_angles(&grid, mu, dt)?;
    let mut best = f64::INFINITY;
    for placement in XPlacement::CANDIDATES {
        let c = assemble(probe, &angles, &QftOptions::exact(), placement)?;
        let dev = oracle_deviation(&c, &grid, mu, dt)?;
        if dev < SELF_TEST_TOLERANCE {
            VERIFIED
                .lock()
                .expect("placement cache poisoned")
                .insert(probe, placement);
            return Ok(placement);
        }
        best = best.min(dev);
    }
    Err(Error::OracleSelfTest {
        n_qubits: probe,
        deviation: best,
    })
}

/// `exp(-i T dt)` as QFT, X reordering, kinetic phases, IQFT (no swaps).
pub fn kinetic_step(grid: &Grid, mu: f64, dt: f64, opts: &QftOptions) -> Result<Circuit> {
    if opts.include_swaps {
        return Err(Error::InvalidArgument(
            "dynamics circuits use the swap-free QFT".into(),
        ));
    }
    let n = grid.n_qubits();
    let placement = verified_x_placement(n)?;
    let angles = kinetic_angles(grid, mu, dt)?;
    let mut c = assemble(n, &angles, opts, placement)?;
    c.annotate("kinetic.x_placement", placement.to_string());
    Ok(c)
}
