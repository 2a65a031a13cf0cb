//! Scenario presets, quantum-vs-classical runs, comparisons and file output.

mod compare;
mod output;
mod run;
mod scenario;

pub use compare::{compare_runs, ComparisonReport, StepDeviation};
pub use output::{emit_outputs, fmt_sig, frame_csv, report_text, series_csv, SERIES_HEADER};
pub use run::{
    initial_circuit, propagation_circuit, run_both, run_classical_path, run_quantum_path,
    PathKind, RunResult, StepRecord,
};
pub use scenario::{
    load_scenario, parse_init_mode, parse_mode, parse_scenario, InitMode, Preset, Readout,
    ScenarioConfig, PRESET_MASS_AMU, PRESET_OMEGA_CM,
};

/// Threshold applied by `compare` to exact configurations.
pub const EXACT_PATH_TOLERANCE: f64 = 1e-10;
