use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qmdsim::circuit::{MIN_PREP_FIDELITY, QftOptions};
use qmdsim::harness::{
    self, compare_runs, emit_outputs, fmt_sig, load_scenario, parse_init_mode, parse_mode,
    Preset, Readout, ScenarioConfig,
};
use qmdsim::qasm::export_qasm;
use qmdsim::{Error, NoiseSpec, PotentialSpec, WavePacketSpec};

/// Grid-based wave-packet dynamics: gate-level emulation vs FFT reference.
#[derive(Parser)]
#[command(name = "qmdsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the quantum (circuit) path of a scenario.
    Run(RunArgs),
    /// Run both paths and compare their observables.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// Fail (exit 2) when any observable deviates by more than this.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Write the OpenQASM 2.0 circuit for read-out step J.
    ExportQasm {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        step: usize,
    },
    /// List the built-in presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// Preset name or path to a TOML scenario file.
    scenario: String,
    /// `multi` (j steps of dt) or `single` (one step of j*dt).
    #[arg(long)]
    mode: Option<String>,
    /// Number of smallest controlled-phase classes dropped from the QFT.
    #[arg(long = "qft-approx")]
    qft_approx: Option<usize>,
    /// Sample this many shots per read-out instead of exact probabilities.
    #[arg(long)]
    shots: Option<u64>,
    /// Seed for shot sampling and gate noise.
    #[arg(long)]
    seed: Option<u64>,
    /// Per-gate Pauli error probability.
    #[arg(long)]
    noise: Option<f64>,
    /// `exact` (amplitude injection) or `circuit` (shallow initializer).
    #[arg(long)]
    init: Option<String>,
    /// Output directory (for export-qasm: output file).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> Result<ScenarioConfig, Error> {
        let mut config = load_scenario(&self.scenario)?;
        if let Some(mode) = &self.mode {
            config.propagation = parse_mode(mode)?;
        }
        if let Some(d) = self.qft_approx {
            config.qft = QftOptions::approximate(d);
        }
        let seed = self.seed.unwrap_or(0);
        if let Some(count) = self.shots {
            config.readout = Readout::Shots { count, seed };
        }
        if let Some(p) = self.noise {
            config.noise = Some(NoiseSpec::new(p, seed)?);
        }
        if let Some(init) = &self.init {
            config.init_mode = parse_init_mode(init)?;
        }
        config.validate()?;
        Ok(config)
    }
}

enum Outcome {
    Success,
    ThresholdFailure,
}

fn run(args: &RunArgs) -> Result<Outcome, Error> {
    let config = args.config()?;
    let result = harness::run_quantum_path(&config)?;
    let report = harness::report_text(&config, &[&result], None, None);
    if let Some(dir) = &args.out {
        emit_outputs(dir, &config, &result, None, None, None)?;
    }
    print!("{report}");
    Ok(Outcome::Success)
}

fn compare(args: &RunArgs, tolerance: Option<f64>) -> Result<Outcome, Error> {
    let config = args.config()?;
    let (quantum, classical) = harness::run_both(&config)?;
    let report = compare_runs(&quantum, &classical)?;
    let threshold = tolerance.or(config.is_exact().then_some(harness::EXACT_PATH_TOLERANCE));
    let passed = threshold.is_none_or(|t| report.max_deviation() < t);
    let verdict = threshold.map(|t| {
        format!(
            "{}: max deviation {} vs tolerance {}",
            if passed { "PASS" } else { "FAIL" },
            fmt_sig(report.max_deviation()),
            fmt_sig(t)
        )
    });
    if let Some(dir) = &args.out {
        emit_outputs(dir, &config, &quantum, Some(&classical), Some(&report), verdict.as_deref())?;
    }
    print!(
        "{}",
        harness::report_text(&config, &[&quantum, &classical], Some(&report), verdict.as_deref())
    );
    Ok(if passed {
        Outcome::Success
    } else {
        Outcome::ThresholdFailure
    })
}

fn export(args: &RunArgs, step: usize) -> Result<Outcome, Error> {
    let config = args.config()?;
    if step > config.n_steps {
        return Err(Error::InvalidArgument(format!(
            "step {step} exceeds the scenario's {} steps",
            config.n_steps
        )));
    }
    let circuit = harness::propagation_circuit(&config, step)?;
    let mut text = format!(
        "// {} read-out step {step}, t = {}\n",
        config.name,
        fmt_sig(step as f64 * config.dt)
    );
    if config.init_mode == harness::InitMode::ExactInjection {
        text.push_str("// initial packet is injected as amplitudes; use --init circuit to include it\n");
    }
    text.push_str(&export_qasm(&circuit));
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?,
        None => print!("{text}"),
    }
    Ok(Outcome::Success)
}

fn presets() {
    println!("{:<14} {:>2} {:>7} {:>5} {:>8}  potential; packet", "name", "n", "dt", "steps", "t_fin");
    for p in Preset::ALL {
        let c = p.config();
        let potential = match c.potential {
            PotentialSpec::Flat => "flat".to_string(),
            PotentialSpec::DoubleWell { v_min } => format!("double well {} mH", fmt_sig(v_min * 1e3)),
            PotentialSpec::Harmonic { r_eq, .. } => {
                format!("harmonic r_eq={} omega={} cm^-1", fmt_sig(r_eq), harness::PRESET_OMEGA_CM)
            }
        };
        let packet = match c.packet {
            WavePacketSpec::Gaussian {
                center,
                width,
                momentum,
            } => format!(
                "gaussian r_s={} a={} p_s={}",
                fmt_sig(center),
                fmt_sig(width),
                fmt_sig(momentum)
            ),
            WavePacketSpec::StepSecondQuarter => "step [M/4, M/2)".to_string(),
        };
        println!(
            "{:<14} {:>2} {:>7} {:>5} {:>8}  {potential}; {packet}",
            p.name(),
            c.n_qubits,
            fmt_sig(c.dt),
            c.n_steps,
            fmt_sig(c.t_fin())
        );
    }
    println!(
        "all presets: r in [0, 5] Bohr, mass {} amu; shallow Gaussian initializers must reach fidelity {}",
        harness::PRESET_MASS_AMU,
        MIN_PREP_FIDELITY
    );
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => run(args),
        Command::Compare { run, tolerance } => compare(run, *tolerance),
        Command::ExportQasm { run, step } => export(run, *step),
        Command::Presets => {
            presets();
            Ok(Outcome::Success)
        }
    };
    match outcome {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ThresholdFailure) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
