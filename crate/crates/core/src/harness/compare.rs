use super::run::RunResult;
use crate::circuit::CircuitStats;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDeviation {
    pub step: usize,
    pub t: f64,
    pub mean_r: f64,
    pub sigma: f64,
    /// `None` when neither run has a tunneling window.
    pub p_tunnel: Option<f64>,
}

impl StepDeviation {
    pub fn max(&self) -> f64 {
        self.mean_r.max(self.sigma).max(self.p_tunnel.unwrap_or(0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub scenario: String,
    pub steps: Vec<StepDeviation>,
    pub max_mean_r: f64,
    pub max_sigma: f64,
    pub max_p_tunnel: f64,
    /// Total-variation distance between the final distributions.
    pub final_tv_distance: f64,
    pub stats_a: Option<CircuitStats>,
    pub stats_b: Option<CircuitStats>,
}

impl ComparisonReport {
    /// Largest deviation of any observable at any step.
    pub fn max_deviation(&self) -> f64 {
        self.max_mean_r.max(self.max_sigma).max(self.max_p_tunnel)
    }

    pub fn final_step(&self) -> Option<&StepDeviation> {
        self.steps.last()
    }
}

fn diff_opt(a: Option<f64>, b: Option<f64>) -> Result<Option<f64>> {
    match (a, b) {
        (Some(x), Some(y)) => Ok(Some((x - y).abs())),
        (None, None) => Ok(None),
        _ => Err(Error::InvalidArgument(
            "runs disagree on whether the tunneling probability is defined".into(),
        )),
    }
}

/// Per-step absolute deviations of the position observables of `a` and `b`.
pub fn compare_runs(a: &RunResult, b: &RunResult) -> Result<ComparisonReport> {
    if a.records.len() != b.records.len() {
        return Err(Error::LengthMismatch {
            expected: a.records.len(),
            actual: b.records.len(),
        });
    }
    if a.grid != b.grid {
        return Err(Error::InvalidArgument("runs use different grids".into()));
    }
    let steps = a
        .records
        .iter()
        .zip(&b.records)
        .map(|(x, y)| {
            Ok(StepDeviation {
                step: x.step,
                t: x.t,
                mean_r: (x.observables.mean_r - y.observables.mean_r).abs(),
                sigma: (x.observables.sigma - y.observables.sigma).abs(),
                p_tunnel: diff_opt(x.observables.p_tunnel, y.observables.p_tunnel)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_of = |f: fn(&StepDeviation) -> f64| steps.iter().map(f).fold(0.0, f64::max);
    let final_tv_distance = 0.5
        * a.final_probabilities()
            .iter()
            .zip(b.final_probabilities())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>();
    Ok(ComparisonReport {
        scenario: a.scenario.clone(),
        max_mean_r: max_of(|s| s.mean_r),
        max_sigma: max_of(|s| s.sigma),
        max_p_tunnel: max_of(|s| s.p_tunnel.unwrap_or(0.0)),
        steps,
        final_tv_distance,
        stats_a: a.circuit_stats,
        stats_b: b.circuit_stats,
    })
}
