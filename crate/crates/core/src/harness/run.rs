use num_complex::Complex64;

use super::scenario::{InitMode, Readout, ScenarioConfig};
use crate::circuit::{
    gaussian_packet_init, momentum_kick, step_packet_init, Circuit, CircuitStats, PropagationMode,
    StepFactory,
};
use crate::error::{Error, Result};
use crate::grid::{self, Grid, Observables, WavePacketSpec};
use crate::oracle;
use crate::state::{NoiseSpec, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Quantum,
    Classical,
}

/// Read-out at `t = step * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub observables: Observables,
    /// `|<oracle|psi>|^2` against the classical state at the same step (1 on the classical path).
    pub overlap_oracle: f64,
    pub probabilities: Vec<f64>,
    pub oracle_probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub scenario: String,
    pub path: PathKind,
    pub grid: Grid,
    pub records: Vec<StepRecord>,
    /// Census of the deepest circuit executed (the one for the last step).
    pub circuit_stats: Option<CircuitStats>,
    pub init_stats: Option<CircuitStats>,
    pub init_fidelity: Option<f64>,
}

impl RunResult {
    pub fn final_record(&self) -> &StepRecord {
        self.records.last().expect("a run has at least the t = 0 record")
    }

    pub fn final_probabilities(&self) -> &[f64] {
        &self.final_record().probabilities
    }
}

/// Distinct, reproducible seed for the read-out after step `j`.
fn step_seed(seed: u64, j: usize) -> u64 {
    seed.wrapping_add((j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Classical reference states for steps `0..=n_steps`, honoring the propagation mode.
fn oracle_trajectory(config: &ScenarioConfig, grid: &Grid) -> Result<Vec<Vec<Complex64>>> {
    let psi0 = config.packet.amplitudes(grid)?;
    let v = config.potential.sample(grid)?;
    let mu = config.mu();
    let mut states = vec![psi0.clone()];
    if config.n_steps == 0 {
        return Ok(states);
    }
    match config.propagation {
        PropagationMode::MultiStep => {
            states.extend(oracle::split_operator_propagate(&psi0, grid, &v, mu, config.dt, config.n_steps)?);
        }
        PropagationMode::SingleStep => {
            for j in 1..=config.n_steps {
                let mut one =
                    oracle::split_operator_propagate(&psi0, grid, &v, mu, j as f64 * config.dt, 1)?;
                states.push(one.pop().expect("one step requested"));
            }
        }
    }
    Ok(states)
}

fn exact_observables(psi: &[Complex64], grid: &Grid, config: &ScenarioConfig, v: &[f64]) -> Result<Observables> {
    grid::observables(psi, grid, Some(v), Some(config.mu()))
}

pub fn run_classical_path(config: &ScenarioConfig) -> Result<RunResult> {
    config.validate()?;
    let grid = config.grid()?;
    let v = config.potential.sample(&grid)?;
    let records = oracle_trajectory(config, &grid)?
        .iter()
        .enumerate()
        .map(|(step, psi)| {
            let probabilities = grid::probabilities(psi);
            Ok(StepRecord {
                step,
                t: step as f64 * config.dt,
                observables: exact_observables(psi, &grid, config, &v)?,
                overlap_oracle: 1.0,
                oracle_probabilities: probabilities.clone(),
                probabilities,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunResult {
        scenario: config.name.clone(),
        path: PathKind::Classical,
        grid,
        records,
        circuit_stats: None,
        init_stats: None,
        init_fidelity: None,
    })
}

/// Preparation circuit for the configured packet and, for a fitted initializer, its fidelity.
pub fn initial_circuit(config: &ScenarioConfig, grid: &Grid) -> Result<(Circuit, Option<f64>)> {
    match config.packet {
        WavePacketSpec::StepSecondQuarter => Ok((step_packet_init(grid.n_qubits())?, Some(1.0))),
        WavePacketSpec::Gaussian { momentum, .. } => {
            let target: Vec<f64> = config.packet.amplitudes(grid)?.iter().map(|a| a.norm()).collect();
            let prep = gaussian_packet_init(&target)?;
            let circuit = prep.circuit.then(&momentum_kick(grid, momentum)?)?;
            Ok((circuit, Some(prep.fidelity)))
        }
    }
}

/// Circuit for read-out step `j` (`j = 0` is the initializer alone). With exact
/// injection the initializer is empty and the packet is written into the register.
pub fn propagation_circuit(config: &ScenarioConfig, j: usize) -> Result<Circuit> {
    let grid = config.grid()?;
    let init = match config.init_mode {
        InitMode::ExactInjection => Circuit::new(grid.n_qubits()),
        InitMode::ShallowCircuit => initial_circuit(config, &grid)?.0,
    };
    if j == 0 {
        return Ok(init);
    }
    StepFactory::new(grid, config.potential, config.mu(), config.qft)?.propagation(
        &init,
        config.dt,
        j,
        config.propagation,
    )
}

pub fn run_quantum_path(config: &ScenarioConfig) -> Result<RunResult> {
    config.validate()?;
    let grid = config.grid()?;
    let n = grid.n_qubits();
    let v = config.potential.sample(&grid)?;
    let reference = oracle_trajectory(config, &grid)?;
    let factory = StepFactory::new(grid.clone(), config.potential, config.mu(), config.qft)?;

    let (init, init_fidelity) = match config.init_mode {
        InitMode::ExactInjection => (Circuit::new(n), None),
        InitMode::ShallowCircuit => initial_circuit(config, &grid)?,
    };
    let injected = match config.init_mode {
        InitMode::ExactInjection => Some(config.packet.amplitudes(&grid)?),
        InitMode::ShallowCircuit => None,
    };
    // Multi-step circuits for successive j share the same step; build it once.
    let step = match config.propagation {
        PropagationMode::MultiStep if config.n_steps > 0 => Some(factory.step(config.dt)?),
        _ => None,
    };

    let mut records = Vec::with_capacity(config.n_steps + 1);
    let mut last_stats = None;
    for (j, oracle_psi) in reference.iter().enumerate() {
        let circuit = match (j, &step) {
            (0, _) => init.clone(),
            (_, Some(step)) => {
                let mut c = init.clone();
                for _ in 0..j {
                    c.append(step)?;
                }
                c
            }
            (_, None) => factory.propagation(&init, config.dt, j, config.propagation)?,
        };
        let mut state = StateVector::new(n)?;
        if let Some(psi0) = &injected {
            state.set_amplitudes(psi0)?;
        }
        let noise = config
            .noise
            .map(|spec| NoiseSpec::new(spec.p_err, step_seed(spec.seed, j)))
            .transpose()?;
        state.apply_circuit(&circuit, noise.as_ref())?;
        last_stats = Some(circuit.stats());

        let oracle_state = StateVector::from_amplitudes(oracle_psi)?;
        let overlap_oracle = oracle_state.overlap(&state)?.norm_sqr();
        let (probabilities, observables) = match config.readout {
            Readout::ExactProbabilities => (
                state.probabilities(),
                exact_observables(state.amplitudes(), &grid, config, &v)?,
            ),
            Readout::Shots { count, seed } => {
                let counts = state.sample_counts(count, step_seed(seed, j))?;
                let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / count as f64).collect();
                let obs = Observables::from_probabilities(&probs, &grid)?;
                (probs, obs)
            }
        };
        records.push(StepRecord {
            step: j,
            t: j as f64 * config.dt,
            observables,
            overlap_oracle,
            probabilities,
            oracle_probabilities: grid::probabilities(oracle_psi),
        });
    }
    Ok(RunResult {
        scenario: config.name.clone(),
        path: PathKind::Quantum,
        grid,
        records,
        circuit_stats: last_stats,
        init_stats: Some(init.stats()),
        init_fidelity,
    })
}

/// Both paths of one scenario.
pub fn run_both(config: &ScenarioConfig) -> Result<(RunResult, RunResult)> {
    let quantum = run_quantum_path(config)?;
    let classical = run_classical_path(config)?;
    if quantum.records.len() != classical.records.len() {
        return Err(Error::InvalidArgument("paths produced different record counts".into()));
    }
    Ok((quantum, classical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PotentialSpec;
    use crate::harness::scenario::Preset;

    #[test]
    fn zero_steps_gives_initial_record() {
        let mut c = Preset::TunnelingB.config();
        c.n_steps = 0;
        c.init_mode = InitMode::ShallowCircuit;
        let r = run_quantum_path(&c).unwrap();
        assert_eq!(r.records.len(), 1);
        let p = &r.records[0].probabilities;
        for (m, pm) in p.iter().enumerate() {
            let want = if (8..16).contains(&m) { 1.0 / 8.0 } else { 0.0 };
            assert!((pm - want).abs() < 1e-14);
        }
    }

    #[test]
    fn record_count_and_times() {
        let c = Preset::HarmonicB.config();
        let r = run_quantum_path(&c).unwrap();
        assert_eq!(r.records.len(), 9);
        assert_eq!(r.records[8].t, 350.0);
        assert!(r.records.iter().all(|rec| (rec.overlap_oracle - 1.0).abs() < 1e-10));
    }

    #[test]
    fn resting_packet_on_flat_potential_stays_put() {
        let mut c = Preset::FreeParticleB.config();
        c.potential = PotentialSpec::Flat;
        let r = run_classical_path(&c).unwrap();
        let r0 = r.records[0].observables.mean_r;
        for rec in &r.records {
            assert!((rec.observables.mean_r - r0).abs() < 1e-9);
        }
    }

    #[test]
    fn shallow_gaussian_init_matches_target() {
        let mut c = Preset::FreeParticleB.config();
        c.init_mode = InitMode::ShallowCircuit;
        let r = run_quantum_path(&c).unwrap();
        let f = r.init_fidelity.unwrap();
        assert!(f >= 0.99);
        assert!((r.records[0].overlap_oracle - f).abs() < 1e-9);
    }

    #[test]
    fn off_centre_packet_reports_fit_shortfall() {
        let mut c = Preset::FreeParticleA.config();
        c.init_mode = InitMode::ShallowCircuit;
        match run_quantum_path(&c) {
            Err(Error::FidelityBelowThreshold { achieved, required }) => {
                assert!(achieved > 0.9 && achieved < required);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shots_readout_is_seeded() {
        let mut c = Preset::TunnelingB.config();
        c.readout = Readout::Shots { count: 2000, seed: 11 };
        let a = run_quantum_path(&c).unwrap();
        let b = run_quantum_path(&c).unwrap();
        assert_eq!(a, b);
        let total: f64 = a.records[3].probabilities.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
