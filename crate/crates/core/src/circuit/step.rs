use super::kinetic::kinetic_step;
use super::potential::{double_well_op, harmonic_angles, harmonic_op};
use super::qft::QftOptions;
use super::Circuit;
use crate::error::{Error, Result};
use crate::grid::{Grid, PotentialSpec};

/// How the circuit for physical time `j dt` is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PropagationMode {
    /// `j` split steps of `dt`.
    #[default]
    MultiStep,
    /// One split step of `j dt`.
    SingleStep,
}

/// `V(dt/2) T(dt) V(dt/2)`: the half-step potential circuit is applied first and last.
pub fn split_step(
    potential_half: &Circuit,
    grid: &Grid,
    mu: f64,
    dt: f64,
    opts: &QftOptions,
) -> Result<Circuit> {
    if potential_half.n_qubits() != grid.n_qubits() {
        return Err(Error::InvalidArgument(format!(
            "potential circuit has {} qubits, grid has {}",
            potential_half.n_qubits(),
            grid.n_qubits()
        )));
    }
    let kinetic = kinetic_step(grid, mu, dt, opts)?;
    potential_half.clone().then(&kinetic)?.then(potential_half)
}

/// `init` followed by the step circuits reaching time `j dt`.
pub fn build_propagation(
    init: &Circuit,
    step_builder: impl Fn(f64) -> Result<Circuit>,
    dt: f64,
    j: usize,
    mode: PropagationMode,
) -> Result<Circuit> {
    if j == 0 {
        return Err(Error::InvalidArgument("propagation needs j >= 1".into()));
    }
    let mut c = init.clone();
    match mode {
        PropagationMode::MultiStep => {
            let step = step_builder(dt)?;
            for _ in 0..j {
                c.append(&step)?;
            }
        }
        PropagationMode::SingleStep => c.append(&step_builder(j as f64 * dt)?)?,
    }
    Ok(c)
}

/// Builds potential and split-step circuits for one scenario.
#[derive(Debug, Clone)]
pub struct StepFactory {
    grid: Grid,
    potential: PotentialSpec,
    mu: f64,
    qft: QftOptions,
    merge_half_steps: bool,
}

impl StepFactory {
    pub fn new(grid: Grid, potential: PotentialSpec, mu: f64, qft: QftOptions) -> Result<Self> {
        potential.validate()?;
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass must be positive, got {mu}")));
        }
        Ok(StepFactory {
            grid,
            potential,
            mu,
            qft,
            merge_half_steps: false,
        })
    }

    /// Fuse the adjacent half-step potentials of consecutive steps into one full step.
    /// The result is the same unitary with fewer gates; off by default.
    pub fn with_merged_half_steps(mut self, merge: bool) -> Self {
        self.merge_half_steps = merge;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `exp(-i V tau)` without its global phase.
    pub fn potential_circuit(&self, tau: f64) -> Result<Circuit> {
        let n = self.grid.n_qubits();
        match self.potential {
            PotentialSpec::Flat => Ok(Circuit::new(n)),
            PotentialSpec::DoubleWell { v_min } => double_well_op(n, v_min, tau),
            PotentialSpec::Harmonic { r_eq, omega, mu } => {
                let angles = harmonic_angles(&self.grid, mu * omega * omega, r_eq, tau)?;
                harmonic_op(n, &angles)
            }
        }
    }

    pub fn step(&self, dt: f64) -> Result<Circuit> {
        split_step(&self.potential_circuit(dt / 2.0)?, &self.grid, self.mu, dt, &self.qft)
    }

    /// `init` plus the evolution to `j dt` in the given mode.
    pub fn propagation(
        &self,
        init: &Circuit,
        dt: f64,
        j: usize,
        mode: PropagationMode,
    ) -> Result<Circuit> {
        if !self.merge_half_steps || mode == PropagationMode::SingleStep || j == 1 {
            return build_propagation(init, |tau| self.step(tau), dt, j, mode);
        }
        let half = self.potential_circuit(dt / 2.0)?;
        let full = self.potential_circuit(dt)?;
        let kinetic = kinetic_step(&self.grid, self.mu, dt, &self.qft)?;
        let mut c = init.clone().then(&half)?;
        for i in 0..j {
            c.append(&kinetic)?;
            c.append(if i + 1 == j { &half } else { &full })?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::step_packet_init;
    use crate::oracle;
    use crate::state::StateVector;
    use num_complex::Complex64;

    fn aligned_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
        let ov: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        let phase = ov / ov.norm();
        a.iter().zip(b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn flat_step_is_kinetic_step() {
        let g = Grid::new(0.0, 5.0, 4).unwrap();
        let f = StepFactory::new(g.clone(), PotentialSpec::Flat, 2.0, QftOptions::exact()).unwrap();
        let kin = kinetic_step(&g, 2.0, 0.7, &QftOptions::exact()).unwrap();
        assert_eq!(f.step(0.7).unwrap().gates(), kin.gates());
    }

    #[test]
    fn zero_step_is_identity() {
        let g = Grid::new(0.0, 5.0, 4).unwrap();
        let pot = PotentialSpec::DoubleWell { v_min: -0.01 };
        let f = StepFactory::new(g, pot, 2.0, QftOptions::exact()).unwrap();
        let c = f.step(0.0).unwrap();
        for m in 0..16 {
            let mut s = StateVector::basis(4, m).unwrap();
            s.apply_circuit(&c, None).unwrap();
            let want = StateVector::basis(4, m).unwrap();
            assert!(aligned_deviation(want.amplitudes(), s.amplitudes()) < 1e-12);
        }
    }

    #[test]
    fn double_well_step_matches_oracle() {
        let g = Grid::new(0.0, 5.0, 5).unwrap();
        let pot = PotentialSpec::DoubleWell { v_min: -0.005 };
        let mu = 1715.7;
        let f = StepFactory::new(g.clone(), pot, mu, QftOptions::exact()).unwrap();
        let c = f.propagation(&step_packet_init(5).unwrap(), 50.0, 1, PropagationMode::MultiStep).unwrap();
        let mut s = StateVector::new(5).unwrap();
        s.apply_circuit(&c, None).unwrap();
        let psi0 = crate::grid::step_amplitudes(&g).unwrap();
        let v = pot.sample(&g).unwrap();
        let traj = oracle::split_operator_propagate(&psi0, &g, &v, mu, 50.0, 1).unwrap();
        assert!(aligned_deviation(&traj[0], s.amplitudes()) < 1e-12);
    }

    #[test]
    fn single_and_multi_agree_at_one_step() {
        let g = Grid::new(0.0, 5.0, 3).unwrap();
        let f = StepFactory::new(g, PotentialSpec::Flat, 1.0, QftOptions::exact()).unwrap();
        let init = Circuit::new(3);
        let a = f.propagation(&init, 0.3, 1, PropagationMode::MultiStep).unwrap();
        let b = f.propagation(&init, 0.3, 1, PropagationMode::SingleStep).unwrap();
        assert_eq!(a, b);
        assert!(f.propagation(&init, 0.3, 0, PropagationMode::MultiStep).is_err());
    }

    #[test]
    fn merged_half_steps_same_unitary_fewer_gates() {
        let g = Grid::new(0.0, 5.0, 4).unwrap();
        let pot = PotentialSpec::Harmonic { r_eq: 2.5, omega: 0.018, mu: 1715.7 };
        let plain = StepFactory::new(g.clone(), pot, 1715.7, QftOptions::exact()).unwrap();
        let merged = plain.clone().with_merged_half_steps(true);
        let init = Circuit::new(4);
        let a = plain.propagation(&init, 10.0, 4, PropagationMode::MultiStep).unwrap();
        let b = merged.propagation(&init, 10.0, 4, PropagationMode::MultiStep).unwrap();
        assert!(b.len() < a.len());
        let ua = oracle::circuit_unitary(&a).unwrap();
        let ub = oracle::circuit_unitary(&b).unwrap();
        assert!(ua.max_deviation(&ub) < 1e-12);
    }
}
