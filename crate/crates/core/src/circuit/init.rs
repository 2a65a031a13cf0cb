use std::f64::consts::PI;

use num_complex::Complex64;

use super::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::grid::Grid;
use crate::state::StateVector;

/// Fidelity a fitted preparation circuit must reach against its target.
pub const MIN_PREP_FIDELITY: f64 = 0.99;

const FIT_MAX_SWEEPS: usize = 500;
const FIT_TOLERANCE: f64 = 1e-10;

/// Uniform probability over `[M/4, M/2)`: `Ry(pi)` on qubit `n - 2`, `Ry(pi/2)` below it.
pub fn step_packet_init(n_qubits: usize) -> Result<Circuit> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(
            "step packet needs at least 2 qubits".into(),
        ));
    }
    let mut c = Circuit::new(n_qubits);
    c.push(GateOp::Ry {
        target: n_qubits - 2,
        phi: PI,
    })?;
    for q in 0..n_qubits - 2 {
        c.push(GateOp::Ry {
            target: q,
            phi: PI / 2.0,
        })?;
    }
    Ok(c)
}

/// Linear phase `e^{i p r_m}` up to a global phase: `P(2^j p dr)` on qubit `j`.
pub fn momentum_kick(grid: &Grid, momentum: f64) -> Result<Circuit> {
    let mut c = Circuit::new(grid.n_qubits());
    if momentum == 0.0 {
        return Ok(c);
    }
    let step = momentum * grid.delta_r();
    for j in 0..grid.n_qubits() {
        c.push(GateOp::P {
            target: j,
            phi: (1u64 << j) as f64 * step,
        })?;
    }
    Ok(c)
}

/// Which higher qubit conditions each lower qubit's rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrepTopology {
    /// Every lower qubit is conditioned on the most significant qubit.
    Star,
    /// Qubit `j` is conditioned on qubit `j + 1`.
    Chain,
    /// Per-qubit choice of a more significant conditioning qubit.
    Tree,
}

impl PrepTopology {
    fn parents(self, n_qubits: usize) -> Vec<usize> {
        (0..n_qubits.saturating_sub(1))
            .map(|j| match self {
                PrepTopology::Star | PrepTopology::Tree => n_qubits - 1,
                PrepTopology::Chain => j + 1,
            })
            .collect()
    }
}

/// Fitted shallow preparation circuit.
#[derive(Debug, Clone)]
pub struct StatePrep {
    pub circuit: Circuit,
    pub fidelity: f64,
    pub topology: PrepTopology,
    /// Conditioning qubit of each lower qubit `j < n - 1`.
    pub parents: Vec<usize>,
    /// Two-qubit constructions (one per conditioned qubit, each two `CP(pi)` gates natively).
    pub controlled_rotations: usize,
    pub sweeps: usize,
}

/// Rotation angles: `root` on the MSB; `branch[j] = [angle if parent is 0, angle if parent is 1]`.
#[derive(Debug, Clone)]
struct PrepAngles {
    root: f64,
    branch: Vec<[f64; 2]>,
}

struct PrepModel<'a> {
    n: usize,
    /// `parents[j]` conditions qubit `j`; always a more significant qubit.
    parents: Vec<usize>,
    target: &'a [f64],
}

impl PrepModel<'_> {
    fn amplitude(&self, angles: &PrepAngles, m: usize) -> f64 {
        let half = |theta: f64, bit: usize| {
            if bit == 0 {
                (theta / 2.0).cos()
            } else {
                (theta / 2.0).sin()
            }
        };
        let n = self.n;
        let mut a = half(angles.root, (m >> (n - 1)) & 1);
        for j in 0..n - 1 {
            let parent_bit = (m >> self.parents[j]) & 1;
            a *= half(angles.branch[j][parent_bit], (m >> j) & 1);
            if a == 0.0 {
                break;
            }
        }
        a
    }

    fn overlap(&self, angles: &PrepAngles) -> f64 {
        self.target
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != 0.0)
            .map(|(m, &t)| t * self.amplitude(angles, m))
            .sum()
    }

    /// Rotation angles reproducing the target's conditional bit marginals.
    fn marginal_start(&self) -> PrepAngles {
        let n = self.n;
        let probs: Vec<f64> = self.target.iter().map(|t| t * t).collect();
        let angle = |one: f64, total: f64| {
            if total <= 0.0 {
                0.0
            } else {
                2.0 * one.sqrt().atan2((total - one).max(0.0).sqrt())
            }
        };
        let msb_one: f64 = probs
            .iter()
            .enumerate()
            .filter(|(m, _)| (m >> (n - 1)) & 1 == 1)
            .map(|(_, p)| p)
            .sum();
        let root = angle(msb_one, probs.iter().sum());
        let branch = (0..n - 1)
            .map(|j| {
                let parent = self.parents[j];
                let mut out = [0.0; 2];
                for (c, slot) in out.iter_mut().enumerate() {
                    let (mut total, mut one) = (0.0, 0.0);
                    for (m, p) in probs.iter().enumerate() {
                        if (m >> parent) & 1 == c {
                            total += p;
                            if (m >> j) & 1 == 1 {
                                one += p;
                            }
                        }
                    }
                    *slot = angle(one, total);
                }
                out
            })
            .collect();
        PrepAngles { root, branch }
    }

    /// Coordinate ascent on `<target|out>`. The overlap is `r + a cos(x) + b sin(x)` in
    /// each half-angle `x`, so every coordinate update is exact.
    fn fit(&self) -> (PrepAngles, usize) {
        let mut angles = self.marginal_start();
        let mut previous = self.overlap(&angles).powi(2);
        let mut sweeps = 0;
        while sweeps < FIT_MAX_SWEEPS {
            sweeps += 1;
            self.update(&mut angles, |a| &mut a.root);
            for j in 0..self.n - 1 {
                for c in 0..2 {
                    self.update(&mut angles, |a| &mut a.branch[j][c]);
                }
            }
            let objective = self.overlap(&angles).powi(2);
            if (objective - previous).abs() < FIT_TOLERANCE {
                break;
            }
            previous = objective;
        }
        (angles, sweeps)
    }

    fn update(&self, angles: &mut PrepAngles, slot: impl Fn(&mut PrepAngles) -> &mut f64) {
        let mut probe = |theta: f64| {
            *slot(angles) = theta;
            self.overlap(angles)
        };
        let at0 = probe(0.0);
        let at_pi = probe(PI);
        let at_2pi = probe(2.0 * PI);
        let r = (at0 + at_2pi) / 2.0;
        let a = (at0 - at_2pi) / 2.0;
        let b = at_pi - r;
        *slot(angles) = 2.0 * b.atan2(a);
    }

    fn circuit(&self, angles: &PrepAngles) -> Result<Circuit> {
        let n = self.n;
        let mut c = Circuit::new(n);
        c.push(GateOp::Ry {
            target: n - 1,
            phi: angles.root,
        })?;
        for j in (0..n - 1).rev() {
            let parent = self.parents[j];
            let [when0, when1] = angles.branch[j];
            // Ry(s) CZ Ry(d) CZ rotates by s + d with the parent at 0 and s - d at 1.
            c.push(GateOp::Ry {
                target: j,
                phi: (when0 + when1) / 2.0,
            })?;
            c.push(GateOp::CP {
                control: parent,
                target: j,
                phi: PI,
            })?;
            c.push(GateOp::Ry {
                target: j,
                phi: (when0 - when1) / 2.0,
            })?;
            c.push(GateOp::CP {
                control: parent,
                target: j,
                phi: PI,
            })?;
        }
        Ok(c)
    }
}

fn validate_target(target: &[f64]) -> Result<usize> {
    let len = target.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "target length {len} is not a power of two >= 2"
        )));
    }
    if let Some(bad) = target.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "target amplitudes must be non-negative, found {bad}"
        )));
    }
    let norm = target.iter().map(|t| t * t).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "target must have unit norm, got {norm}"
        )));
    }
    let peak = target
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let tol = 1e-12;
    let rising = target[..=peak].windows(2).all(|w| w[1] >= w[0] - tol);
    let falling = target[peak..].windows(2).all(|w| w[1] <= w[0] + tol);
    if !(rising && falling) {
        return Err(Error::InvalidArgument("target is not unimodal".into()));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Shallow preparation of a real, non-negative, unimodal target: one `Ry` on the
/// most significant qubit and `n - 1` conditioned rotations, angles fitted classically.
///
/// Star and chain conditioning are fitted first; the better one is then refined
/// greedily, letting each qubit (high to low) pick whichever more significant
/// qubit conditions it best.
pub fn gaussian_packet_init(target: &[f64]) -> Result<StatePrep> {
    let n = validate_target(target)?;
    let fit = |parents: Vec<usize>| {
        let model = PrepModel { n, parents, target };
        let (angles, sweeps) = model.fit();
        let fid = model.overlap(&angles).powi(2);
        (fid, model.parents, angles, sweeps)
    };
    let star = fit(PrepTopology::Star.parents(n));
    let chain = fit(PrepTopology::Chain.parents(n));
    let (mut topology, mut best) = if chain.0 > star.0 {
        (PrepTopology::Chain, chain)
    } else {
        (PrepTopology::Star, star)
    };
    for j in (0..n.saturating_sub(2)).rev() {
        for k in j + 1..n {
            if k == best.1[j] {
                continue;
            }
            let mut parents = best.1.clone();
            parents[j] = k;
            let trial = fit(parents);
            if trial.0 > best.0 + 1e-12 {
                best = trial;
                topology = PrepTopology::Tree;
            }
        }
    }
    let (_, parents, angles, sweeps) = best;
    let model = PrepModel { n, parents, target };
    let mut circuit = model.circuit(&angles)?;
    circuit.annotate("init.topology", format!("{topology:?}").to_lowercase());

    let mut out = StateVector::new(n)?;
    out.apply_circuit(&circuit, None)?;
    let ov: Complex64 = target
        .iter()
        .zip(out.amplitudes())
        .map(|(t, a)| t * a)
        .sum();
    let fidelity = ov.norm_sqr();
    if fidelity < MIN_PREP_FIDELITY {
        return Err(Error::FidelityBelowThreshold {
            achieved: fidelity,
            required: MIN_PREP_FIDELITY,
        });
    }
    Ok(StatePrep {
        circuit,
        fidelity,
        topology,
        parents: model.parents,
        controlled_rotations: n - 1,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateKind;

    fn gaussian(n: usize, centre: f64, sigma: f64) -> Vec<f64> {
        let p: Vec<f64> = (0..1usize << n)
            .map(|m| (-(m as f64 - centre).powi(2) / (2.0 * sigma * sigma)).exp())
            .collect();
        let total: f64 = p.iter().sum();
        p.iter().map(|x| (x / total).sqrt()).collect()
    }

    fn probabilities_after(c: &Circuit) -> Vec<f64> {
        let mut s = StateVector::new(c.n_qubits()).unwrap();
        s.apply_circuit(c, None).unwrap();
        s.probabilities()
    }

    #[test]
    fn step_four_qubits() {
        let p = probabilities_after(&step_packet_init(4).unwrap());
        for (m, pm) in p.iter().enumerate() {
            let want = if (4..8).contains(&m) { 0.25 } else { 0.0 };
            assert!((pm - want).abs() < 1e-15);
        }
    }

    #[test]
    fn step_seven_qubits() {
        let p = probabilities_after(&step_packet_init(7).unwrap());
        for (m, pm) in p.iter().enumerate() {
            let want = if (32..64).contains(&m) { 1.0 / 32.0 } else { 0.0 };
            assert!((pm - want).abs() < 1e-14);
        }
    }

    #[test]
    fn step_two_qubits_is_single_point() {
        let p = probabilities_after(&step_packet_init(2).unwrap());
        assert!((p[1] - 1.0).abs() < 1e-15);
        assert!(step_packet_init(1).is_err());
    }

    #[test]
    fn one_qubit_target_is_exact() {
        let theta: f64 = 0.7;
        let prep = gaussian_packet_init(&[theta.cos(), theta.sin()]).unwrap();
        assert_eq!(prep.circuit.gates(), &[GateOp::Ry { target: 0, phi: 2.0 * theta }]);
        assert!((prep.fidelity - 1.0).abs() < 1e-14);
        assert_eq!(prep.controlled_rotations, 0);
    }

    #[test]
    fn four_qubit_construction_count() {
        let prep = gaussian_packet_init(&gaussian(4, 7.5, 1.2)).unwrap();
        assert_eq!(prep.controlled_rotations, 3);
        let on_msb = prep
            .circuit
            .gates()
            .iter()
            .filter(|g| g.kind() == GateKind::Ry && g.target() == 3)
            .count();
        assert_eq!(on_msb, 1);
        assert_eq!(prep.circuit.stats().cp, 2 * 3);
        assert!(prep.fidelity >= MIN_PREP_FIDELITY);
    }

    #[test]
    fn centred_targets_reach_threshold() {
        for n in 3..=7 {
            let size = (1usize << n) as f64;
            for sigma in [0.77, 1.5, 2.0, 3.0] {
                let prep = gaussian_packet_init(&gaussian(n, size / 2.0 - 0.5, sigma)).unwrap();
                assert!(prep.fidelity >= MIN_PREP_FIDELITY, "n={n} sigma={sigma}");
            }
        }
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(gaussian_packet_init(&[0.6, 0.8, 0.0]).is_err());
        assert!(gaussian_packet_init(&[0.6, -0.8]).is_err());
        assert!(gaussian_packet_init(&[0.5, 0.5]).is_err());
        let bimodal = [0.6, 0.0, 0.0, 0.8];
        assert!(gaussian_packet_init(&bimodal).is_err());
    }

    #[test]
    fn momentum_kick_is_linear_phase() {
        let g = Grid::new(0.0, 5.0, 5).unwrap();
        let p = 7.3;
        let c = momentum_kick(&g, p).unwrap();
        let amp = Complex64::new(1.0 / (g.size() as f64).sqrt(), 0.0);
        let mut s = StateVector::from_amplitudes(&vec![amp; g.size()]).unwrap();
        s.apply_circuit(&c, None).unwrap();
        let global = Complex64::from_polar(1.0, p * g.points()[0]);
        for (m, a) in s.amplitudes().iter().enumerate() {
            let want = amp * Complex64::from_polar(1.0, p * g.points()[m]);
            assert!((a * global - want).norm() < 1e-12);
        }
    }
}
