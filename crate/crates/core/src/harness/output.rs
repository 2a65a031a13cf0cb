use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::compare::ComparisonReport;
use super::run::{PathKind, RunResult};
use super::scenario::{InitMode, Readout, ScenarioConfig};
use crate::circuit::PropagationMode;
use crate::error::{Error, Result};
use crate::grid::{PotentialSpec, WavePacketSpec};
use crate::units;

pub const SERIES_HEADER: &str = "step,t,mean_r,sigma,p_tunnel,norm,overlap_oracle";

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form outside `[1e-5, 1e12)`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn series_csv(result: &RunResult) -> String {
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for rec in &result.records {
        let o = &rec.observables;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            rec.step,
            fmt_sig(rec.t),
            fmt_sig(o.mean_r),
            fmt_sig(o.sigma),
            o.p_tunnel.map(fmt_sig).unwrap_or_default(),
            fmt_sig(o.norm),
            fmt_sig(rec.overlap_oracle)
        );
    }
    out
}

/// One frame per record: `m,r,prob_quantum,prob_classical`.
pub fn frame_csv(result: &RunResult, index: usize) -> String {
    let rec = &result.records[index];
    let mut out = String::from("m,r,prob_quantum,prob_classical\n");
    for (m, ((r, pq), pc)) in result
        .grid
        .points()
        .iter()
        .zip(&rec.probabilities)
        .zip(&rec.oracle_probabilities)
        .enumerate()
    {
        let _ = writeln!(out, "{m},{},{},{}", fmt_sig(*r), fmt_sig(*pq), fmt_sig(*pc));
    }
    out
}

fn describe_config(config: &ScenarioConfig, out: &mut String) {
    let _ = writeln!(out, "scenario        {}", config.name);
    let _ = writeln!(
        out,
        "grid            [{}, {}] Bohr, n = {}, M = {}",
        fmt_sig(config.r_min),
        fmt_sig(config.r_max),
        config.n_qubits,
        1usize << config.n_qubits
    );
    let _ = writeln!(out, "mass            {} amu", fmt_sig(config.mu_amu));
    let potential = match config.potential {
        PotentialSpec::Flat => "flat".to_string(),
        PotentialSpec::DoubleWell { v_min } => {
            format!("double well, V_min = {} mHartree", fmt_sig(v_min * 1000.0))
        }
        PotentialSpec::Harmonic { r_eq, omega, .. } => format!(
            "harmonic, r_eq = {} Bohr, omega = {} cm^-1",
            fmt_sig(r_eq),
            fmt_sig(omega * units::HARTREE_IN_WAVENUMBERS)
        ),
    };
    let _ = writeln!(out, "potential       {potential}");
    let packet = match config.packet {
        WavePacketSpec::Gaussian {
            center,
            width,
            momentum,
        } => format!(
            "gaussian, r_s = {}, a = {}, p_s = {}",
            fmt_sig(center),
            fmt_sig(width),
            fmt_sig(momentum)
        ),
        WavePacketSpec::StepSecondQuarter => "step on [M/4, M/2)".to_string(),
    };
    let _ = writeln!(out, "packet          {packet}");
    let _ = writeln!(
        out,
        "time            dt = {}, steps = {}, t_fin = {}",
        fmt_sig(config.dt),
        config.n_steps,
        fmt_sig(config.t_fin())
    );
    let init = match config.init_mode {
        InitMode::ExactInjection => "exact injection",
        InitMode::ShallowCircuit => "shallow circuit",
    };
    let mode = match config.propagation {
        PropagationMode::MultiStep => "multi-step",
        PropagationMode::SingleStep => "single-step",
    };
    let readout = match config.readout {
        Readout::ExactProbabilities => "exact probabilities".to_string(),
        Readout::Shots { count, seed } => format!("{count} shots, seed {seed}"),
    };
    let noise = match config.noise {
        Some(n) => format!("p_err = {}, seed {}", fmt_sig(n.p_err), n.seed),
        None => "none".into(),
    };
    let _ = writeln!(out, "init            {init}");
    let _ = writeln!(out, "qft             approximation degree {}", config.qft.approximation_degree);
    let _ = writeln!(out, "propagation     {mode}");
    let _ = writeln!(out, "readout         {readout}");
    let _ = writeln!(out, "noise           {noise}");
}

fn describe_run(result: &RunResult, out: &mut String) {
    let label = match result.path {
        PathKind::Quantum => "quantum path",
        PathKind::Classical => "classical path",
    };
    let _ = writeln!(out, "\n[{label}]");
    if let Some(f) = result.init_fidelity {
        let _ = writeln!(out, "init fidelity   {}", fmt_sig(f));
    }
    if let Some(s) = result.init_stats {
        let _ = writeln!(out, "init circuit    {s}");
    }
    if let Some(s) = result.circuit_stats {
        let _ = writeln!(out, "last circuit    {s}");
    }
    let first = &result.records[0].observables;
    let last = &result.final_record().observables;
    let _ = writeln!(out, "mean_r          {} -> {}", fmt_sig(first.mean_r), fmt_sig(last.mean_r));
    let _ = writeln!(out, "sigma           {} -> {}", fmt_sig(first.sigma), fmt_sig(last.sigma));
    if let (Some(p0), Some(p1)) = (first.p_tunnel, last.p_tunnel) {
        let _ = writeln!(out, "p_tunnel        {} -> {}", fmt_sig(p0), fmt_sig(p1));
    }
    if let (Some(e0), Some(e1)) = (first.energy, last.energy) {
        let _ = writeln!(out, "energy          {} -> {} Hartree", fmt_sig(e0), fmt_sig(e1));
    }
    let _ = writeln!(out, "final norm      {}", fmt_sig(last.norm));
    let _ = writeln!(
        out,
        "final overlap   {}",
        fmt_sig(result.final_record().overlap_oracle)
    );
}

fn describe_comparison(report: &ComparisonReport, out: &mut String) {
    let _ = writeln!(out, "\n[comparison]");
    let _ = writeln!(out, "max |d mean_r|  {}", fmt_sig(report.max_mean_r));
    let _ = writeln!(out, "max |d sigma|   {}", fmt_sig(report.max_sigma));
    let _ = writeln!(out, "max |d p|       {}", fmt_sig(report.max_p_tunnel));
    let _ = writeln!(out, "final TV dist.  {}", fmt_sig(report.final_tv_distance));
}

pub fn report_text(
    config: &ScenarioConfig,
    runs: &[&RunResult],
    comparison: Option<&ComparisonReport>,
    verdict: Option<&str>,
) -> String {
    let mut out = String::new();
    describe_config(config, &mut out);
    for run in runs {
        describe_run(run, &mut out);
    }
    if let Some(c) = comparison {
        describe_comparison(c, &mut out);
    }
    if let Some(v) = verdict {
        let _ = writeln!(out, "\n{v}");
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes `series.csv`, `frames/step_####.csv` and `report.txt`. A second run, when
/// given, is written to `series_classical.csv`; frames always pair each read-out
/// with the classical reference distribution.
pub fn emit_outputs(
    out_dir: &Path,
    config: &ScenarioConfig,
    primary: &RunResult,
    secondary: Option<&RunResult>,
    comparison: Option<&ComparisonReport>,
    verdict: Option<&str>,
) -> Result<()> {
    let frames = out_dir.join("frames");
    fs::create_dir_all(&frames).map_err(|e| Error::io(&frames, e))?;
    write(&out_dir.join("series.csv"), &series_csv(primary))?;
    if let Some(second) = secondary {
        write(&out_dir.join("series_classical.csv"), &series_csv(second))?;
    }
    for i in 0..primary.records.len() {
        let path = frames.join(format!("step_{:04}.csv", primary.records[i].step));
        write(&path, &frame_csv(primary, i))?;
    }
    let mut runs = vec![primary];
    runs.extend(secondary);
    write(&out_dir.join("report.txt"), &report_text(config, &runs, comparison, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run::run_quantum_path;
    use crate::harness::scenario::Preset;

    #[test]
    fn significant_digit_format() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(3.25), "3.25");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(-1234.5678), "-1234.5678");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-07");
        assert_eq!(fmt_sig(2.0e13), "2e+13");
        assert_eq!(fmt_sig(0.999999999999999), "1");
        assert_eq!(fmt_sig(0.000123456789012345), "0.000123456789012");
    }

    #[test]
    fn series_rows_and_frames() {
        let r = run_quantum_path(&Preset::TunnelingB.config()).unwrap();
        let csv = series_csv(&r);
        assert_eq!(csv.lines().count(), 10);
        assert_eq!(csv.lines().next().unwrap(), SERIES_HEADER);
        let frame = frame_csv(&r, 8);
        assert_eq!(frame.lines().count(), 33);
    }

    #[test]
    fn emits_files() {
        let dir = tempfile::tempdir().unwrap();
        let config = Preset::FreeParticleB.config();
        let r = run_quantum_path(&config).unwrap();
        emit_outputs(dir.path(), &config, &r, None, None, None).unwrap();
        assert!(dir.path().join("series.csv").exists());
        assert!(dir.path().join("report.txt").exists());
        let frames = std::fs::read_dir(dir.path().join("frames")).unwrap().count();
        assert_eq!(frames, 9);
    }
}
