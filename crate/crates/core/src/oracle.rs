//! Classical reference: unitary DFT, FFT split-operator propagation, and dense
//! matrices of small circuits built from Kronecker products.

use std::ops::Mul;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::grid::Grid;

/// Largest register `circuit_unitary` will realize densely.
pub const MAX_DENSE_QUBITS: usize = 10;

/// `F_k = M^{-1/2} sum_m psi_m e^{-2 pi i k m / M}`; `inverse` flips the exponent sign.
pub fn unitary_dft(psi: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    let len = psi.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "DFT length {len} is not a power of two"
        )));
    }
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(len)
    } else {
        planner.plan_fft_forward(len)
    };
    let mut out = psi.to_vec();
    fft.process(&mut out);
    let scale = 1.0 / (len as f64).sqrt();
    out.iter_mut().for_each(|a| *a *= scale);
    Ok(out)
}

/// `Z exp(-i p^2 dt / 2 mu) Z^dagger psi`, with DFT bin `k` carrying momentum `p_{k xor M/2}`.
pub fn kinetic_apply(psi: &[Complex64], grid: &Grid, mu: f64, dt: f64) -> Result<Vec<Complex64>> {
    check_len(grid.size(), psi.len())?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgument(format!("mass must be positive, got {mu}")));
    }
    let momenta = grid.momentum();
    let half = grid.size() / 2;
    let mut spectrum = unitary_dft(psi, false)?;
    for (bin, a) in spectrum.iter_mut().enumerate() {
        let p = momenta.points()[bin ^ half];
        *a *= Complex64::from_polar(1.0, -p * p * dt / (2.0 * mu));
    }
    unitary_dft(&spectrum, true)
}

fn potential_phase(psi: &mut [Complex64], potential: &[f64], tau: f64) {
    for (a, v) in psi.iter_mut().zip(potential) {
        *a *= Complex64::from_polar(1.0, -v * tau);
    }
}

/// Strang-split trajectory: one state per step, the initial state excluded.
pub fn split_operator_propagate(
    psi0: &[Complex64],
    grid: &Grid,
    potential: &[f64],
    mu: f64,
    dt: f64,
    steps: usize,
) -> Result<Vec<Vec<Complex64>>> {
    check_len(grid.size(), psi0.len())?;
    check_len(grid.size(), potential.len())?;
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be >= 1".into()));
    }
    let mut psi = psi0.to_vec();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        potential_phase(&mut psi, potential, dt / 2.0);
        psi = kinetic_apply(&psi, grid, mu, dt)?;
        potential_phase(&mut psi, potential, dt / 2.0);
        out.push(psi.clone());
    }
    Ok(out)
}

/// A wavefunction on its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    pub grid: Grid,
    pub psi: Vec<Complex64>,
}

impl OracleState {
    pub fn new(grid: Grid, psi: Vec<Complex64>) -> Result<Self> {
        check_len(grid.size(), psi.len())?;
        Ok(OracleState { grid, psi })
    }

    pub fn propagate(&self, potential: &[f64], mu: f64, dt: f64, steps: usize) -> Result<Vec<OracleState>> {
        Ok(split_operator_propagate(&self.psi, &self.grid, potential, mu, dt, steps)?
            .into_iter()
            .map(|psi| OracleState {
                grid: self.grid.clone(),
                psi,
            })
            .collect())
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn dagger(&self) -> Self {
        let mut out = DenseMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn kron(&self, other: &DenseMatrix) -> Self {
        let dim = self.dim * other.dim;
        let mut out = DenseMatrix::zeros(dim);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        out.data[(r1 * other.dim + r2) * dim + c1 * other.dim + c2] =
                            a * other.get(r2, c2);
                    }
                }
            }
        }
        out
    }

    fn add(&self, other: &DenseMatrix) -> Self {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn max_deviation(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest off-diagonal magnitude.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    worst = worst.max(self.get(r, c).norm());
                }
            }
        }
        worst
    }

    /// `max |U^dagger U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        (&self.dagger() * self).max_deviation(&DenseMatrix::identity(self.dim))
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out.data[r * n..(r + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

fn from_2x2(m: [[Complex64; 2]; 2]) -> DenseMatrix {
    DenseMatrix {
        dim: 2,
        data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
    }
}

/// `F_{n-1} (x) ... (x) F_0`, the most significant qubit leftmost.
fn kron_chain(n_qubits: usize, factor: impl Fn(usize) -> DenseMatrix) -> DenseMatrix {
    (0..n_qubits)
        .rev()
        .fold(DenseMatrix::identity(1), |acc, q| acc.kron(&factor(q)))
}

/// Full-register matrix of one gate.
pub fn embed_gate(gate: &GateOp, n_qubits: usize) -> DenseMatrix {
    let g = from_2x2(gate.target_matrix());
    let id = DenseMatrix::identity(2);
    let target = gate.target();
    match gate.control() {
        None => kron_chain(n_qubits, |q| if q == target { g.clone() } else { id.clone() }),
        Some(control) => {
            let zero = Complex64::new(0.0, 0.0);
            let one = Complex64::new(1.0, 0.0);
            let p0 = from_2x2([[one, zero], [zero, zero]]);
            let p1 = from_2x2([[zero, zero], [zero, one]]);
            let idle = kron_chain(n_qubits, |q| if q == control { p0.clone() } else { id.clone() });
            let active = kron_chain(n_qubits, |q| {
                if q == control {
                    p1.clone()
                } else if q == target {
                    g.clone()
                } else {
                    id.clone()
                }
            });
            idle.add(&active)
        }
    }
}

/// Product of the embedded gate matrices, first gate rightmost.
pub fn circuit_unitary(circuit: &Circuit) -> Result<DenseMatrix> {
    let n = circuit.n_qubits();
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "dense realization supports 1..={MAX_DENSE_QUBITS} qubits, got {n}"
        )));
    }
    let mut u = DenseMatrix::identity(1 << n);
    for gate in circuit.gates() {
        u = &embed_gate(gate, n) * &u;
    }
    Ok(u)
}
