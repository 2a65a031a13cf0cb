//! Coordinate and momentum grids, analytic potentials and packets, and the
//! observables read off a probability distribution.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle;
use crate::MAX_QUBITS;

/// Largest boundary amplitude tolerated for an admitted Gaussian packet.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;

/// Equidistant cell-centred grid `r_m = r_min + (m + 1/2) dr`, `M = 2^n` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    r_min: f64,
    r_max: f64,
    n_qubits: usize,
    points: Vec<f64>,
}

impl Grid {
    pub fn new(r_min: f64, r_max: f64, n_qubits: usize) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite()) || r_max <= r_min {
            return Err(Error::InvalidGrid(format!(
                "extent must be positive, got [{r_min}, {r_max}]"
            )));
        }
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(n_qubits));
        }
        let size = 1usize << n_qubits;
        let dr = (r_max - r_min) / size as f64;
        let points = (0..size)
            .map(|m| r_min + (0.5 + m as f64) * dr)
            .collect();
        Ok(Grid {
            r_min,
            r_max,
            n_qubits,
            points,
        })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of grid points `M`.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn extent(&self) -> f64 {
        self.r_max - self.r_min
    }

    pub fn delta_r(&self) -> f64 {
        self.extent() / self.size() as f64
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn momentum(&self) -> MomentumGrid {
        MomentumGrid::new(self)
    }
}

/// Conjugate momentum grid `p_m = 2pi/(r_max - r_min) (m - M/2)`, monotonic in `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    delta_p: f64,
    p_max: f64,
    points: Vec<f64>,
}

impl MomentumGrid {
    pub fn new(grid: &Grid) -> Self {
        let size = grid.size();
        let delta_p = 2.0 * PI / grid.extent();
        let half = (size / 2) as i64;
        let points = (0..size as i64)
            .map(|m| delta_p * (m - half) as f64)
            .collect();
        MomentumGrid {
            delta_p,
            p_max: size as f64 * delta_p / 2.0,
            points,
        }
    }

    pub fn delta_p(&self) -> f64 {
        self.delta_p
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

/// Potential energy curve in atomic units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    Flat,
    /// Two square wells of depth `v_min` on index ranges `[M/4, M/2)` and `[3M/4, M)`;
    /// the barriers sit at `V = 0`.
    DoubleWell { v_min: f64 },
    /// `V = k (r - r_eq)^2 / 2` with `k = mu omega^2`.
    Harmonic { r_eq: f64, omega: f64, mu: f64 },
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialSpec::Flat => Ok(()),
            PotentialSpec::DoubleWell { v_min } => {
                if v_min.is_finite() && v_min <= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidPotential(format!(
                        "well depth must be <= 0, got {v_min}"
                    )))
                }
            }
            PotentialSpec::Harmonic { r_eq, omega, mu } => {
                let k = mu * omega * omega;
                if r_eq.is_finite() && mu > 0.0 && k > 0.0 && k.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidPotential(format!(
                        "harmonic force constant must be positive (mu = {mu}, omega = {omega})"
                    )))
                }
            }
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, PotentialSpec::Flat)
    }

    /// `V_m` on every grid point.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        self.validate()?;
        match *self {
            PotentialSpec::Flat => Ok(vec![0.0; grid.size()]),
            PotentialSpec::DoubleWell { v_min } => {
                let n = grid.n_qubits();
                if n < 2 {
                    return Err(Error::InvalidPotential(
                        "double well needs at least 2 qubits".into(),
                    ));
                }
                let bit = 1usize << (n - 2);
                Ok((0..grid.size())
                    .map(|m| if m & bit != 0 { v_min } else { 0.0 })
                    .collect())
            }
            PotentialSpec::Harmonic { r_eq, omega, mu } => {
                let k = mu * omega * omega;
                Ok(grid
                    .points()
                    .iter()
                    .map(|&r| 0.5 * k * (r - r_eq) * (r - r_eq))
                    .collect())
            }
        }
    }
}

/// Initial wave packet shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WavePacketSpec {
    /// `A exp(-((r - center)/width)^2 + i r momentum)`.
    Gaussian {
        center: f64,
        width: f64,
        momentum: f64,
    },
    /// Uniform probability over indices `[M/4, M/2)`.
    StepSecondQuarter,
}

impl WavePacketSpec {
    /// Amplitudes normalized to unit 2-norm (no `dr` weight).
    pub fn amplitudes(&self, grid: &Grid) -> Result<Vec<Complex64>> {
        match *self {
            WavePacketSpec::Gaussian {
                center,
                width,
                momentum,
            } => gaussian_amplitudes(grid, center, width, momentum),
            WavePacketSpec::StepSecondQuarter => step_amplitudes(grid),
        }
    }
}

pub fn gaussian_amplitudes(
    grid: &Grid,
    center: f64,
    width: f64,
    momentum: f64,
) -> Result<Vec<Complex64>> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidPacket(format!(
            "width must be positive, got {width}"
        )));
    }
    if !(center.is_finite() && momentum.is_finite()) {
        return Err(Error::InvalidPacket("non-finite packet parameter".into()));
    }
    let mut psi: Vec<Complex64> = grid
        .points()
        .iter()
        .map(|&r| {
            let x = (r - center) / width;
            Complex64::from_polar((-x * x).exp(), r * momentum)
        })
        .collect();
    let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidPacket(
            "packet has no weight on the grid".into(),
        ));
    }
    psi.iter_mut().for_each(|a| *a /= norm);
    let edge = psi[0].norm().max(psi[psi.len() - 1].norm());
    if edge > BOUNDARY_TOLERANCE {
        return Err(Error::InvalidPacket(format!(
            "boundary amplitude {edge:e} exceeds {BOUNDARY_TOLERANCE:e}; packet does not fit the grid"
        )));
    }
    Ok(psi)
}

pub fn step_amplitudes(grid: &Grid) -> Result<Vec<Complex64>> {
    let size = grid.size();
    if grid.n_qubits() < 2 {
        return Err(Error::InvalidPacket(
            "step packet needs at least 2 qubits".into(),
        ));
    }
    let width = size / 4;
    let value = Complex64::new(1.0 / (width as f64).sqrt(), 0.0);
    Ok((0..size)
        .map(|m| {
            if (width..2 * width).contains(&m) {
                value
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub norm: f64,
    pub mean_r: f64,
    pub sigma: f64,
    /// Probability outside the window `[M/8, 5M/8)`; `None` when `M` is not a multiple of 8.
    pub p_tunnel: Option<f64>,
    pub energy: Option<f64>,
}

impl Observables {
    /// Position observables of an (unnormalized-weight) distribution `|psi_m|^2`.
    pub fn from_probabilities(probs: &[f64], grid: &Grid) -> Result<Self> {
        check_len(grid.size(), probs.len())?;
        let mut norm = 0.0;
        let mut first = 0.0;
        let mut second = 0.0;
        for (&p, &r) in probs.iter().zip(grid.points()) {
            norm += p;
            first += p * r;
            second += p * r * r;
        }
        Ok(Observables {
            norm,
            mean_r: first,
            sigma: (second - first * first).max(0.0).sqrt(),
            p_tunnel: tunneling_probability(probs).ok(),
            energy: None,
        })
    }
}

/// `p = 1 - sum_{m = M/8}^{5M/8 - 1} P_m`.
pub fn tunneling_probability(probs: &[f64]) -> Result<f64> {
    let size = probs.len();
    if size % 8 != 0 || size == 0 {
        return Err(Error::InvalidArgument(format!(
            "tunneling window needs M divisible by 8, got M = {size}"
        )));
    }
    let kept: f64 = probs[size / 8..5 * size / 8].iter().sum();
    Ok((1.0 - kept).clamp(0.0, 1.0))
}

pub fn probabilities(psi: &[Complex64]) -> Vec<f64> {
    psi.iter().map(|a| a.norm_sqr()).collect()
}

/// Observables of `psi`; the energy is filled in when both `potential` and `mu` are given.
pub fn observables(
    psi: &[Complex64],
    grid: &Grid,
    potential: Option<&[f64]>,
    mu: Option<f64>,
) -> Result<Observables> {
    check_len(grid.size(), psi.len())?;
    let mut obs = Observables::from_probabilities(&probabilities(psi), grid)?;
    if let (Some(v), Some(mu)) = (potential, mu) {
        obs.energy = Some(energy_expectation(psi, grid, v, mu)?);
    }
    Ok(obs)
}

/// `<psi|V|psi> + sum_k p_k^2/(2 mu) |psi~_k|^2`, the kinetic part from the unitary DFT.
pub fn energy_expectation(psi: &[Complex64], grid: &Grid, potential: &[f64], mu: f64) -> Result<f64> {
    check_len(grid.size(), psi.len())?;
    check_len(grid.size(), potential.len())?;
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument(format!("mass must be positive, got {mu}")));
    }
    let pot: f64 = psi
        .iter()
        .zip(potential)
        .map(|(a, &v)| a.norm_sqr() * v)
        .sum();
    let spectrum = oracle::unitary_dft(psi, false)?;
    let momenta = grid.momentum();
    let half = grid.size() / 2;
    let kin: f64 = spectrum
        .iter()
        .enumerate()
        .map(|(bin, a)| {
            let p = momenta.points()[bin ^ half];
            a.norm_sqr() * p * p / (2.0 * mu)
        })
        .sum();
    Ok(pot + kin)
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing() {
        let g = Grid::new(0.0, 5.0, 8).unwrap();
        assert_eq!(g.size(), 256);
        assert_eq!(g.delta_r(), 0.01953125);
    }

    #[test]
    fn grid_endpoints() {
        let g = Grid::new(0.0, 5.0, 4).unwrap();
        assert!((g.points()[0] - 0.15625).abs() < 1e-15);
        assert!((g.points()[15] - 4.84375).abs() < 1e-15);
        assert!(g.points().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(Grid::new(1.0, 1.0, 4).is_err());
        assert!(Grid::new(2.0, 1.0, 4).is_err());
        assert!(Grid::new(0.0, 1.0, 0).is_err());
        assert!(Grid::new(0.0, 1.0, 25).is_err());
    }

    #[test]
    fn momentum_grid_values() {
        let g = Grid::new(0.0, 5.0, 4).unwrap();
        let p = g.momentum();
        assert!((p.delta_p() - 1.256637).abs() < 1e-6);
        assert!((p.p_max() - 10.05310).abs() < 1e-5);
        assert_eq!(p.points()[8], 0.0);
        assert!(p.points().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn nyquist_identity() {
        for n in 1..=10 {
            let g = Grid::new(-1.3, 7.2, n).unwrap();
            let p = g.momentum();
            let lhs = g.delta_r() * p.delta_p() * g.size() as f64;
            assert!((lhs - 2.0 * PI).abs() < 1e-14);
        }
    }

    #[test]
    fn momentum_square_expansion() {
        let g = Grid::new(0.0, 5.0, 7).unwrap();
        let size = g.size() as f64;
        let scale = (2.0 * PI / g.extent()).powi(2);
        for (m, &p) in g.momentum().points().iter().enumerate() {
            let m = m as f64;
            let expanded = scale * (m * m - m * size + size * size / 4.0);
            assert!((expanded - p * p).abs() < 1e-12 * (1.0 + p * p));
        }
    }

    #[test]
    fn double_well_mapping() {
        let g = Grid::new(0.0, 5.0, 4).unwrap();
        let v = PotentialSpec::DoubleWell { v_min: -0.017 }.sample(&g).unwrap();
        for (m, &vm) in v.iter().enumerate() {
            let in_well = (4..8).contains(&m) || (12..16).contains(&m);
            assert_eq!(vm, if in_well { -0.017 } else { 0.0 });
        }
    }

    #[test]
    fn double_well_needs_two_qubits() {
        let g = Grid::new(0.0, 5.0, 1).unwrap();
        assert!(PotentialSpec::DoubleWell { v_min: -1.0 }.sample(&g).is_err());
        assert!(PotentialSpec::DoubleWell { v_min: 1.0 }.validate().is_err());
    }

    #[test]
    fn harmonic_minimum_on_grid_point() {
        let g = Grid::new(0.0, 5.0, 6).unwrap();
        let r_eq = g.points()[20];
        let v = PotentialSpec::Harmonic {
            r_eq,
            omega: 0.018,
            mu: 1700.0,
        }
        .sample(&g)
        .unwrap();
        assert_eq!(v[20], 0.0);
        assert!(PotentialSpec::Harmonic { r_eq, omega: 0.0, mu: 1.0 }.validate().is_err());
    }

    #[test]
    fn gaussian_real_without_momentum() {
        let g = Grid::new(0.0, 5.0, 8).unwrap();
        let psi = gaussian_amplitudes(&g, 2.5, 0.3, 0.0).unwrap();
        assert!(psi.iter().all(|a| a.im == 0.0));
    }

    #[test]
    fn gaussian_moments() {
        let g = Grid::new(0.0, 5.0, 8).unwrap();
        let psi = gaussian_amplitudes(&g, 1.0, 0.25, 30.0).unwrap();
        let obs = observables(&psi, &g, None, None).unwrap();
        assert!((obs.mean_r - 1.0).abs() < g.delta_r() / 2.0);
        let psi = gaussian_amplitudes(&g, 1.0, 0.25, 0.0).unwrap();
        let obs = observables(&psi, &g, None, None).unwrap();
        assert!((obs.sigma - 0.125).abs() < 0.00125);
        assert!((obs.norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_rejects_wide_packet() {
        let g = Grid::new(0.0, 5.0, 6).unwrap();
        assert!(gaussian_amplitudes(&g, 0.5, 1.0, 0.0).is_err());
        assert!(gaussian_amplitudes(&g, 2.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn uniform_distribution_centre() {
        for n in 1..=9 {
            let g = Grid::new(-2.0, 3.0, n).unwrap();
            let probs = vec![1.0 / g.size() as f64; g.size()];
            let obs = Observables::from_probabilities(&probs, &g).unwrap();
            assert!((obs.mean_r - 0.5).abs() < 1e-14);
            assert!((obs.norm - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn step_packet_inside_window() {
        let g = Grid::new(0.0, 5.0, 7).unwrap();
        let psi = step_amplitudes(&g).unwrap();
        let obs = observables(&psi, &g, None, None).unwrap();
        assert!(obs.p_tunnel.unwrap().abs() < 1e-14);
        assert!((obs.norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tunneling_window_needs_multiple_of_eight() {
        assert!(tunneling_probability(&[0.25; 4]).is_err());
        let g = Grid::new(0.0, 1.0, 2).unwrap();
        let obs = Observables::from_probabilities(&[0.25; 4], &g).unwrap();
        assert!(obs.p_tunnel.is_none());
    }

    #[test]
    fn observables_length_mismatch() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        assert!(Observables::from_probabilities(&[1.0; 4], &g).is_err());
    }

    #[test]
    fn energy_of_tunneling_packet() {
        let g = Grid::new(0.0, 5.0, 7).unwrap();
        let v = PotentialSpec::DoubleWell { v_min: -0.017 }.sample(&g).unwrap();
        let psi = step_amplitudes(&g).unwrap();
        let mu = crate::units::amu_to_au(0.9412);
        let e = energy_expectation(&psi, &g, &v, mu).unwrap();
        assert!((e - -0.46e-3).abs() < 0.15 * 0.46e-3, "energy {e}");
    }
}
