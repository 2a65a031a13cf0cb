//! Dense `2^n`-amplitude register, little-endian: qubit `j` is bit `j` of the index.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::MAX_QUBITS;

/// Per-gate stochastic Pauli noise, sampled with ChaCha8 seeded from `seed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub p_err: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(p_err: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_err) {
            return Err(Error::InvalidArgument(format!(
                "noise probability must lie in [0, 1], got {p_err}"
            )));
        }
        Ok(NoiseSpec { p_err, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pauli {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(n_qubits));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::new(n_qubits)?;
        if index >= s.len() {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// State holding `amplitudes`, whose length fixes the qubit count.
    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let mut s = Self::new(len.trailing_zeros() as usize)?;
        s.set_amplitudes(amplitudes)?;
        Ok(s)
    }

    /// Replaces the amplitudes; the input must be unit-norm to 1e-9 and is renormalized exactly.
    pub fn set_amplitudes(&mut self, amplitudes: &[Complex64]) -> Result<()> {
        if amplitudes.len() != self.amplitudes.len() {
            return Err(Error::LengthMismatch {
                expected: self.amplitudes.len(),
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero amplitude vector".into()));
        }
        if !((norm - 1.0).abs() <= 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector has norm {norm}, expected 1"
            )));
        }
        self.amplitudes
            .iter_mut()
            .zip(amplitudes)
            .for_each(|(dst, src)| *dst = src / norm);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            GateOp::P { target, phi } => {
                let phase = Complex64::from_polar(1.0, phi);
                let bit = 1 << target;
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a *= phase;
                    }
                }
            }
            GateOp::CP {
                control,
                target,
                phi,
            } => {
                let phase = Complex64::from_polar(1.0, phi);
                let mask = (1 << control) | (1 << target);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a *= phase;
                    }
                }
            }
            GateOp::X { target } => self.for_pairs(target, |a0, a1| std::mem::swap(a0, a1)),
            GateOp::H { target } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                self.for_pairs(target, |a0, a1| {
                    let (x, y) = (*a0, *a1);
                    *a0 = (x + y) * h;
                    *a1 = (x - y) * h;
                });
            }
            GateOp::Ry { target, phi } => {
                let (s, c) = (phi / 2.0).sin_cos();
                self.for_pairs(target, |a0, a1| {
                    let (x, y) = (*a0, *a1);
                    *a0 = x * c - y * s;
                    *a1 = x * s + y * c;
                });
            }
        }
        Ok(())
    }

    /// Applies the gates in order. With noise, each gate is followed with probability
    /// `p_err` by a uniformly chosen Pauli on a uniformly chosen qubit.
    pub fn apply_circuit(&mut self, circuit: &Circuit, noise: Option<&NoiseSpec>) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "circuit acts on {} qubits, state has {}",
                circuit.n_qubits(),
                self.n_qubits
            )));
        }
        let mut rng = noise
            .filter(|spec| spec.p_err > 0.0)
            .map(|spec| (spec.p_err, ChaCha8Rng::seed_from_u64(spec.seed)));
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
            if let Some((p_err, rng)) = rng.as_mut() {
                if rng.random::<f64>() < *p_err {
                    let pauli = match rng.random_range(0..3) {
                        0 => Pauli::X,
                        1 => Pauli::Y,
                        _ => Pauli::Z,
                    };
                    let qubit = rng.random_range(0..self.n_qubits);
                    self.apply_pauli(pauli, qubit);
                }
            }
        }
        Ok(())
    }

    fn apply_pauli(&mut self, pauli: Pauli, qubit: usize) {
        let i = Complex64::new(0.0, 1.0);
        match pauli {
            Pauli::X => self.for_pairs(qubit, |a0, a1| std::mem::swap(a0, a1)),
            Pauli::Y => self.for_pairs(qubit, |a0, a1| {
                let (x, y) = (*a0, *a1);
                *a0 = -i * y;
                *a1 = i * x;
            }),
            Pauli::Z => self.for_pairs(qubit, |_, a1| *a1 = -*a1),
        }
    }

    fn for_pairs(&mut self, target: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let stride = 1 << target;
        for block in self.amplitudes.chunks_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                f(a0, a1);
            }
        }
    }

    /// Multinomial read-out histogram over basis indices.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be >= 1".into()));
        }
        let mut cumulative = Vec::with_capacity(self.len());
        let mut total = 0.0;
        for a in &self.amplitudes {
            total += a.norm_sqr();
            cumulative.push(total);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0u64; self.len()];
        let last = self.len() - 1;
        for _ in 0..shots {
            let u = rng.random::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c <= u).min(last);
            counts[idx] += 1;
        }
        Ok(counts)
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_state() {
        let s = StateVector::new(4).unwrap();
        assert_eq!(s.probabilities()[0], 1.0);
        assert!(s.probabilities()[1..].iter().all(|&p| p == 0.0));
        assert_eq!(StateVector::new(1).unwrap().amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(StateVector::new(0).is_err());
        assert!(StateVector::new(25).is_err());
    }

    #[test]
    fn set_amplitudes_renormalizes() {
        let mut s = StateVector::new(2).unwrap();
        let scale = (1.0f64 + 1e-10).sqrt();
        let v = vec![c(0.5 * scale, 0.0); 4];
        s.set_amplitudes(&v).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(s.set_amplitudes(&[c(0.0, 0.0); 4]).is_err());
        assert!(s.set_amplitudes(&[c(1.0, 0.0); 3]).is_err());
        let mut s4 = StateVector::new(4).unwrap();
        assert!(s4.set_amplitudes(&[c(0.0, 0.0); 12]).is_err());
    }

    #[test]
    fn phase_zero_is_identity() {
        let mut s = StateVector::from_amplitudes(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let before = s.clone();
        s.apply_gate(&GateOp::P { target: 0, phi: 0.0 }).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn second_quarter_by_rotations() {
        let mut s = StateVector::new(4).unwrap();
        s.apply_gate(&GateOp::Ry { target: 2, phi: PI }).unwrap();
        s.apply_gate(&GateOp::Ry { target: 0, phi: PI / 2.0 }).unwrap();
        s.apply_gate(&GateOp::Ry { target: 1, phi: PI / 2.0 }).unwrap();
        for (m, a) in s.amplitudes().iter().enumerate() {
            let expect = if (4..8).contains(&m) { 0.5 } else { 0.0 };
            assert!((a - c(expect, 0.0)).norm() < 1e-15, "m = {m}: {a}");
        }
    }

    #[test]
    fn x_sets_little_endian_bit() {
        for n in 1..=6 {
            for j in 0..n {
                let mut s = StateVector::new(n).unwrap();
                s.apply_gate(&GateOp::X { target: j }).unwrap();
                assert_eq!(s.amplitudes()[1 << j], c(1.0, 0.0));
            }
        }
    }

    #[test]
    fn gate_index_errors() {
        let mut s = StateVector::new(3).unwrap();
        assert!(s.apply_gate(&GateOp::H { target: 3 }).is_err());
        assert!(s
            .apply_gate(&GateOp::CP { control: 1, target: 1, phi: 0.3 })
            .is_err());
        assert!(s
            .apply_gate(&GateOp::CP { control: 5, target: 1, phi: 0.3 })
            .is_err());
    }

    #[test]
    fn circuit_size_mismatch() {
        let mut s = StateVector::new(3).unwrap();
        assert!(s.apply_circuit(&Circuit::new(2), None).is_err());
        let before = s.clone();
        s.apply_circuit(&Circuit::new(3), None).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn sampling_basis_state() {
        let s = StateVector::basis(4, 5).unwrap();
        let counts = s.sample_counts(1000, 7).unwrap();
        assert_eq!(counts[5], 1000);
        assert_eq!(counts.iter().sum::<u64>(), 1000);
        assert!(s.sample_counts(0, 7).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let mut s = StateVector::new(3).unwrap();
        for q in 0..3 {
            s.apply_gate(&GateOp::Ry { target: q, phi: 0.4 + q as f64 }).unwrap();
        }
        assert_eq!(s.sample_counts(5000, 11).unwrap(), s.sample_counts(5000, 11).unwrap());
        assert_ne!(s.sample_counts(5000, 11).unwrap(), s.sample_counts(5000, 12).unwrap());
    }

    #[test]
    fn overlap_basics() {
        let a = StateVector::basis(1, 0).unwrap();
        let b = StateVector::basis(1, 1).unwrap();
        assert_eq!(a.overlap(&b).unwrap(), c(0.0, 0.0));
        let s = StateVector::from_amplitudes(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert!((s.overlap(&s).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let theta = 0.7;
        let phase = Complex64::from_polar(1.0, theta);
        let rotated: Vec<_> = s.amplitudes().iter().map(|a| a * phase).collect();
        let t = StateVector::from_amplitudes(&rotated).unwrap();
        assert!((s.overlap(&t).unwrap() - phase).norm() < 1e-14);
        assert!(s.overlap(&StateVector::new(2).unwrap()).is_err());
    }

    #[test]
    fn noise_spec_range() {
        assert!(NoiseSpec::new(1.5, 0).is_err());
        assert!(NoiseSpec::new(0.1, 0).is_ok());
    }
}
