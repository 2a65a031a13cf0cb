use std::fs;
use std::process::{Command, Output};

use qmdsim::harness::{load_scenario, propagation_circuit, InitMode};
use qmdsim::qasm::parse_qasm;

fn qmdsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmdsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn presets_lists_all_six() {
    let o = qmdsim(&["presets"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["FreeParticleA", "TunnelingA", "HarmonicA", "FreeParticleB", "TunnelingB", "HarmonicB"] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn validation_errors_exit_one() {
    assert_eq!(qmdsim(&["run", "NoSuchPreset"]).status.code(), Some(1));
    assert_eq!(qmdsim(&["run", "HarmonicB", "--qft-approx", "9"]).status.code(), Some(1));
    assert_eq!(qmdsim(&["run", "HarmonicB", "--mode", "sideways"]).status.code(), Some(1));
    assert_eq!(qmdsim(&["run", "HarmonicB", "--bogus"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "preset = \"HarmonicB\"\ndt = -2.0\n").unwrap();
    let o = qmdsim(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`dt`"));
}

#[test]
fn exact_compare_passes() {
    let o = qmdsim(&["compare", "TunnelingB"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn threshold_failure_exits_two() {
    let o = qmdsim(&["compare", "HarmonicB", "--qft-approx", "2", "--tolerance", "1e-6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
    // Non-exact options without a tolerance only report.
    assert_eq!(qmdsim(&["compare", "HarmonicB", "--qft-approx", "2"]).status.code(), Some(0));
}

#[test]
fn run_writes_series_and_frames() {
    let dir = tempfile::tempdir().unwrap();
    let o = qmdsim(&["run", "TunnelingB", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let series = fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert_eq!(series.lines().count(), 10);
    assert_eq!(series.lines().next().unwrap(), "step,t,mean_r,sigma,p_tunnel,norm,overlap_oracle");
    let frames = fs::read_dir(dir.path().join("frames")).unwrap().count();
    assert_eq!(frames, 9);
    assert!(dir.path().join("report.txt").exists());
}

#[test]
fn final_frame_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let o = qmdsim(&["compare", "TunnelingA", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let frame = fs::read_to_string(dir.path().join("frames/step_0100.csv")).unwrap();
    let (mut q, mut c) = (0.0, 0.0);
    for line in frame.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        q += cols[2];
        c += cols[3];
    }
    assert!((q - 1.0).abs() < 1e-9 && (c - 1.0).abs() < 1e-9);
}

#[test]
fn exported_qasm_reparses_to_the_same_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("step2.qasm");
    let o = qmdsim(&["export-qasm", "TunnelingB", "--step", "2", "--init", "circuit", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let parsed = parse_qasm(&fs::read_to_string(&path).unwrap()).unwrap();
    let mut config = load_scenario("TunnelingB").unwrap();
    config.init_mode = InitMode::ShallowCircuit;
    let built = propagation_circuit(&config, 2).unwrap();
    assert_eq!(parsed.gates(), built.gates());
    assert_eq!(qmdsim(&["export-qasm", "TunnelingB", "--step", "9"]).status.code(), Some(1));
}
