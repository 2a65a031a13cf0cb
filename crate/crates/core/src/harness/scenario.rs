use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::circuit::{PropagationMode, QftOptions};
use crate::error::{Error, Result};
use crate::grid::{Grid, PotentialSpec, WavePacketSpec};
use crate::state::NoiseSpec;
use crate::units;

/// How the initial packet enters the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    /// Exact amplitudes written into the state vector.
    #[default]
    ExactInjection,
    /// The shallow preparation circuit (step or fitted Gaussian-like initializer).
    ShallowCircuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Readout {
    #[default]
    ExactProbabilities,
    Shots { count: u64, seed: u64 },
}

/// One complete experiment. Lengths in Bohr, times in a.u., mass in amu,
/// potential parameters in atomic units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub r_min: f64,
    pub r_max: f64,
    pub n_qubits: usize,
    pub mu_amu: f64,
    pub potential: PotentialSpec,
    pub packet: WavePacketSpec,
    pub dt: f64,
    pub n_steps: usize,
    pub init_mode: InitMode,
    pub qft: QftOptions,
    pub propagation: PropagationMode,
    pub readout: Readout,
    pub noise: Option<NoiseSpec>,
}

impl ScenarioConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.r_min, self.r_max, self.n_qubits)
    }

    /// Reduced mass in electron masses.
    pub fn mu(&self) -> f64 {
        units::amu_to_au(self.mu_amu)
    }

    pub fn t_fin(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    /// The options of the oracle-equivalence benchmark: exact injection, exact QFT,
    /// exact probabilities, multi-step, no noise.
    pub fn is_exact(&self) -> bool {
        self.init_mode == InitMode::ExactInjection
            && self.qft.approximation_degree == 0
            && self.propagation == PropagationMode::MultiStep
            && self.readout == Readout::ExactProbabilities
            && self.noise.is_none_or(|n| n.p_err == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::config("name", "must not be empty"));
        }
        if !(self.r_min.is_finite() && self.r_max.is_finite() && self.r_max > self.r_min) {
            return Err(Error::config("r_max", "must exceed r_min"));
        }
        if self.n_qubits == 0 || self.n_qubits > crate::MAX_QUBITS {
            return Err(Error::config(
                "n_qubits",
                format!("must lie in 1..={}", crate::MAX_QUBITS),
            ));
        }
        if !(self.mu_amu > 0.0 && self.mu_amu.is_finite()) {
            return Err(Error::config("mass_amu", "must be positive"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.qft.include_swaps {
            return Err(Error::config("qft", "dynamics circuits use the swap-free QFT"));
        }
        if self.qft.approximation_degree >= self.n_qubits {
            return Err(Error::config(
                "qft_approx",
                format!("must be at most n_qubits - 1 = {}", self.n_qubits - 1),
            ));
        }
        if let Readout::Shots { count: 0, .. } = self.readout {
            return Err(Error::config("shots", "must be >= 1"));
        }
        if let Some(noise) = self.noise {
            NoiseSpec::new(noise.p_err, noise.seed).map_err(|e| Error::config("noise", e.to_string()))?;
        }
        self.potential
            .validate()
            .map_err(|e| Error::config("potential", e.to_string()))?;
        if let PotentialSpec::Harmonic { mu, .. } = self.potential {
            if (mu - self.mu()).abs() > 1e-9 * self.mu() {
                return Err(Error::config("potential", "harmonic mass differs from mass_amu"));
            }
        }
        let grid = self.grid().map_err(|e| Error::config("n_qubits", e.to_string()))?;
        self.potential
            .sample(&grid)
            .map_err(|e| Error::config("potential", e.to_string()))?;
        self.packet
            .amplitudes(&grid)
            .map_err(|e| Error::config("packet", e.to_string()))?;
        Ok(())
    }
}

/// The benchmark scenarios: `A` variants are the 7-8 qubit emulator runs, `B` variants
/// the scaled 5-qubit runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Preset {
    FreeParticleA,
    TunnelingA,
    HarmonicA,
    FreeParticleB,
    TunnelingB,
    HarmonicB,
}

/// HF-like reduced mass shared by every preset.
pub const PRESET_MASS_AMU: f64 = 0.9412;
/// Vibrational frequency of the harmonic presets in cm^-1.
pub const PRESET_OMEGA_CM: f64 = 3978.6;

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::FreeParticleA,
        Preset::TunnelingA,
        Preset::HarmonicA,
        Preset::FreeParticleB,
        Preset::TunnelingB,
        Preset::HarmonicB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::FreeParticleA => "FreeParticleA",
            Preset::TunnelingA => "TunnelingA",
            Preset::HarmonicA => "HarmonicA",
            Preset::FreeParticleB => "FreeParticleB",
            Preset::TunnelingB => "TunnelingB",
            Preset::HarmonicB => "HarmonicB",
        }
    }

    /// Case-insensitive lookup.
    pub fn from_name(name: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(name.trim()))
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))
    }

    pub fn config(self) -> ScenarioConfig {
        let mu = units::amu_to_au(PRESET_MASS_AMU);
        let omega = units::wavenumber_to_au(PRESET_OMEGA_CM);
        let (n_qubits, potential, packet, dt, n_steps) = match self {
            Preset::FreeParticleA => (
                8,
                PotentialSpec::Flat,
                gaussian(1.0, 0.25, 30.0),
                1.5,
                100,
            ),
            Preset::TunnelingA => (
                7,
                PotentialSpec::DoubleWell {
                    v_min: units::millihartree(-17.0),
                },
                WavePacketSpec::StepSecondQuarter,
                3.0,
                100,
            ),
            Preset::HarmonicA => (
                8,
                PotentialSpec::Harmonic { r_eq: 2.5, omega, mu },
                gaussian(1.5, 0.36, 0.0),
                11.0,
                100,
            ),
            Preset::FreeParticleB => (5, PotentialSpec::Flat, gaussian(2.5, 0.23, 0.0), 31.25, 8),
            Preset::TunnelingB => (
                5,
                PotentialSpec::DoubleWell {
                    v_min: units::millihartree(-5.0),
                },
                WavePacketSpec::StepSecondQuarter,
                50.0,
                8,
            ),
            Preset::HarmonicB => (
                5,
                PotentialSpec::Harmonic { r_eq: 3.0, omega, mu },
                gaussian(2.5, 0.23, 0.0),
                43.75,
                8,
            ),
        };
        ScenarioConfig {
            name: self.name().to_string(),
            r_min: 0.0,
            r_max: 5.0,
            n_qubits,
            mu_amu: PRESET_MASS_AMU,
            potential,
            packet,
            dt,
            n_steps,
            init_mode: InitMode::default(),
            qft: QftOptions::exact(),
            propagation: PropagationMode::MultiStep,
            readout: Readout::ExactProbabilities,
            noise: None,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn gaussian(center: f64, width: f64, momentum: f64) -> WavePacketSpec {
    WavePacketSpec::Gaussian {
        center,
        width,
        momentum,
    }
}

/// Flat TOML scenario document. Every key is optional when `preset` names a base
/// scenario; the keys present override it.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    name: Option<String>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    n_qubits: Option<i64>,
    mass_amu: Option<f64>,
    /// `flat`, `double-well` or `harmonic`.
    potential: Option<String>,
    v_min_mh: Option<f64>,
    r_eq: Option<f64>,
    omega_cm: Option<f64>,
    /// `gaussian` or `step`.
    packet: Option<String>,
    center: Option<f64>,
    width: Option<f64>,
    momentum: Option<f64>,
    dt: Option<f64>,
    n_steps: Option<i64>,
    /// `exact` or `circuit`.
    init: Option<String>,
    qft_approx: Option<i64>,
    /// `multi` or `single`.
    mode: Option<String>,
    shots: Option<i64>,
    seed: Option<i64>,
    noise: Option<f64>,
}

fn required<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::config(field, "missing (no preset to inherit from)"))
}

fn non_negative(value: i64, field: &str) -> Result<u64> {
    u64::try_from(value).map_err(|_| Error::config(field, format!("must be >= 0, got {value}")))
}

pub fn parse_init_mode(s: &str) -> Result<InitMode> {
    match s {
        "exact" => Ok(InitMode::ExactInjection),
        "circuit" => Ok(InitMode::ShallowCircuit),
        other => Err(Error::config("init", format!("expected `exact` or `circuit`, got `{other}`"))),
    }
}

pub fn parse_mode(s: &str) -> Result<PropagationMode> {
    match s {
        "multi" => Ok(PropagationMode::MultiStep),
        "single" => Ok(PropagationMode::SingleStep),
        other => Err(Error::config("mode", format!("expected `multi` or `single`, got `{other}`"))),
    }
}

impl RawConfig {
    fn resolve(self) -> Result<ScenarioConfig> {
        let base = self.preset.as_deref().map(Preset::from_name).transpose()?.map(Preset::config);
        let b = base.as_ref();
        let n_qubits = match self.n_qubits {
            Some(n) => non_negative(n, "n_qubits")? as usize,
            None => required(b.map(|c| c.n_qubits), "n_qubits")?,
        };
        let n_steps = match self.n_steps {
            Some(n) => non_negative(n, "n_steps")? as usize,
            None => required(b.map(|c| c.n_steps), "n_steps")?,
        };
        let mu_amu = required(self.mass_amu.or(b.map(|c| c.mu_amu)), "mass_amu")?;
        let mu = units::amu_to_au(mu_amu);

        let base_potential = b.map(|c| c.potential);
        let kind = match self.potential.as_deref() {
            Some(k) => k.to_string(),
            None => match required(base_potential, "potential")? {
                PotentialSpec::Flat => "flat".into(),
                PotentialSpec::DoubleWell { .. } => "double-well".into(),
                PotentialSpec::Harmonic { .. } => "harmonic".into(),
            },
        };
        let potential = match kind.as_str() {
            "flat" => PotentialSpec::Flat,
            "double-well" => {
                let v_min = match (self.v_min_mh, base_potential) {
                    (Some(v), _) => units::millihartree(v),
                    (None, Some(PotentialSpec::DoubleWell { v_min })) => v_min,
                    _ => return Err(Error::config("v_min_mh", "missing for double-well potential")),
                };
                PotentialSpec::DoubleWell { v_min }
            }
            "harmonic" => {
                let inherited = match base_potential {
                    Some(PotentialSpec::Harmonic { r_eq, omega, .. }) => Some((r_eq, omega)),
                    _ => None,
                };
                let r_eq = self
                    .r_eq
                    .or(inherited.map(|h| h.0))
                    .ok_or_else(|| Error::config("r_eq", "missing for harmonic potential"))?;
                let omega = self
                    .omega_cm
                    .map(units::wavenumber_to_au)
                    .or(inherited.map(|h| h.1))
                    .ok_or_else(|| Error::config("omega_cm", "missing for harmonic potential"))?;
                PotentialSpec::Harmonic { r_eq, omega, mu }
            }
            other => {
                return Err(Error::config(
                    "potential",
                    format!("expected `flat`, `double-well` or `harmonic`, got `{other}`"),
                ))
            }
        };

        let base_packet = b.map(|c| c.packet);
        let packet_kind = match self.packet.as_deref() {
            Some(k) => k.to_string(),
            None => match required(base_packet, "packet")? {
                WavePacketSpec::Gaussian { .. } => "gaussian".into(),
                WavePacketSpec::StepSecondQuarter => "step".into(),
            },
        };
        let packet = match packet_kind.as_str() {
            "step" => WavePacketSpec::StepSecondQuarter,
            "gaussian" => {
                let inherited = match base_packet {
                    Some(WavePacketSpec::Gaussian {
                        center,
                        width,
                        momentum,
                    }) => Some((center, width, momentum)),
                    _ => None,
                };
                let center = self
                    .center
                    .or(inherited.map(|g| g.0))
                    .ok_or_else(|| Error::config("center", "missing for gaussian packet"))?;
                let width = self
                    .width
                    .or(inherited.map(|g| g.1))
                    .ok_or_else(|| Error::config("width", "missing for gaussian packet"))?;
                if !(width > 0.0) {
                    return Err(Error::config("width", format!("must be positive, got {width}")));
                }
                let momentum = self.momentum.or(inherited.map(|g| g.2)).unwrap_or(0.0);
                gaussian(center, width, momentum)
            }
            other => {
                return Err(Error::config(
                    "packet",
                    format!("expected `gaussian` or `step`, got `{other}`"),
                ))
            }
        };

        let seed = self.seed.map(|s| non_negative(s, "seed")).transpose()?.unwrap_or(0);
        let readout = match self.shots {
            Some(s) => Readout::Shots {
                count: non_negative(s, "shots")?,
                seed,
            },
            None => b.map(|c| c.readout).unwrap_or_default(),
        };
        let noise = match self.noise {
            Some(p) => Some(NoiseSpec::new(p, seed).map_err(|e| Error::config("noise", e.to_string()))?),
            None => b.and_then(|c| c.noise),
        };
        let qft = match self.qft_approx {
            Some(d) => QftOptions::approximate(non_negative(d, "qft_approx")? as usize),
            None => b.map(|c| c.qft).unwrap_or_default(),
        };
        let config = ScenarioConfig {
            name: required(self.name.or(b.map(|c| c.name.clone())), "name")?,
            r_min: required(self.r_min.or(b.map(|c| c.r_min)), "r_min")?,
            r_max: required(self.r_max.or(b.map(|c| c.r_max)), "r_max")?,
            n_qubits,
            mu_amu,
            potential,
            packet,
            dt: required(self.dt.or(b.map(|c| c.dt)), "dt")?,
            n_steps,
            init_mode: match self.init.as_deref() {
                Some(s) => parse_init_mode(s)?,
                None => b.map(|c| c.init_mode).unwrap_or_default(),
            },
            qft,
            propagation: match self.mode.as_deref() {
                Some(s) => parse_mode(s)?,
                None => b.map(|c| c.propagation).unwrap_or_default(),
            },
            readout,
            noise,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses a TOML scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::config("document", e.message()))?;
    raw.resolve()
}

/// A preset name, or a path to a TOML scenario document.
pub fn load_scenario(source: &str) -> Result<ScenarioConfig> {
    if let Ok(preset) = Preset::from_name(source) {
        return Ok(preset.config());
    }
    let path = Path::new(source);
    if !path.exists() {
        return Err(Error::UnknownPreset(source.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}
