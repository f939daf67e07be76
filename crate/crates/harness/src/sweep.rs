//! Quenched Monte Carlo sweeps over system sizes and noise strengths.

use std::time::Instant;

use encdec_core::observables::RunRecord;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{HarnessError, Result};
use crate::pipeline::{run_realization, Outcome, SizeContext};

#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub strength: f64,
    /// Records in realization order, degenerate realizations excluded.
    pub records: Vec<RunRecord>,
    pub degenerate: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeResult {
    pub n: usize,
    pub k: usize,
    pub points: Vec<PointResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    pub sizes: Vec<SizeResult>,
    pub wall_time: f64,
}

impl SweepResult {
    pub fn size(&self, n: usize) -> Option<&SizeResult> {
        self.sizes.iter().find(|s| s.n == n)
    }

    pub fn degenerate_total(&self) -> usize {
        self.sizes.iter().flat_map(|s| &s.points).map(|p| p.degenerate).sum()
    }
}

impl SizeResult {
    /// Grid point closest to `strength`.
    pub fn point(&self, strength: f64) -> Option<&PointResult> {
        self.points.iter().min_by(|a, b| (a.strength - strength).abs().total_cmp(&(b.strength - strength).abs()))
    }
}

/// Run every realization at every `(N, strength)` of `config`. Realizations
/// run in parallel on the current rayon pool; results do not depend on the
/// number of workers.
pub fn run_quenched_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let start = Instant::now();
    let mut sizes = Vec::with_capacity(config.sizes.len());
    for &n in &config.sizes {
        let ctx = SizeContext::new(config, n)?;
        let outcomes: Vec<Vec<Outcome>> = (0..config.realizations as u64)
            .into_par_iter()
            .map(|i| run_realization(&ctx, i))
            .collect::<Result<_>>()?;
        let mut points: Vec<PointResult> = config
            .grid
            .iter()
            .map(|&strength| PointResult { strength, records: Vec::with_capacity(outcomes.len()), degenerate: 0 })
            .collect();
        for row in outcomes {
            for (point, outcome) in points.iter_mut().zip(row) {
                match outcome {
                    Outcome::Record(r) => point.records.push(*r),
                    Outcome::Degenerate { .. } => point.degenerate += 1,
                }
            }
        }
        for p in &points {
            if p.degenerate as f64 > config.abort_fraction * config.realizations as f64 {
                return Err(HarnessError::DegenerateAbort {
                    n,
                    strength: p.strength,
                    excluded: p.degenerate,
                    total: config.realizations,
                });
            }
        }
        sizes.push(SizeResult { n, k: ctx.layout.n_logical(), points });
    }
    Ok(SweepResult { config: config.clone(), sizes, wall_time: start.elapsed().as_secs_f64() })
}

/// Device-noise sweep: the layered noise model evaluated along the coherent angle grid.
pub fn run_noisy_device(config: &ExperimentConfig) -> Result<SweepResult> {
    if config.kind != ExperimentKind::NoisyDevice {
        return Err(HarnessError::Config("run_noisy_device needs the noisy_device experiment kind".into()));
    }
    run_quenched_sweep(config)
}
