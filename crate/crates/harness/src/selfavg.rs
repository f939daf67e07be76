//! Quenched versus annealed averages and relative fluctuations across system sizes.

use encdec_core::observables::{fluctuation_ratio, RunRecord, ValueKind};
use encdec_core::stats::{jackknife_from_sums, linear_fit};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{HarnessError, Result};
use crate::sweep::{run_quenched_sweep, SweepResult};

/// Differences below this are treated as exactly zero.
const ZERO_DIFFERENCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Ok,
    /// Some value vanishes, so no logarithmic fit exists.
    Degenerate,
}

/// `|quenched - annealed|` for one quantity at one `(N, strength)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferencePoint {
    pub quantity: String,
    pub n: usize,
    pub strength: f64,
    pub quenched: f64,
    pub annealed: f64,
    pub difference: f64,
    /// Jackknife error of the signed difference.
    pub error: f64,
    /// `difference * 2^N`.
    pub scaled_difference: f64,
}

/// Relative fluctuations of `m2` and `p2` with jackknife errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationPoint {
    pub n: usize,
    pub strength: f64,
    pub m2: (f64, f64),
    pub p2: (f64, f64),
}

/// Fit of `log y = c - rate * N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub quantity: String,
    pub strength: f64,
    pub rate: Option<f64>,
    pub r_squared: Option<f64>,
    pub status: FitStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfAvgReport {
    pub differences: Vec<DifferencePoint>,
    pub fluctuations: Vec<FluctuationPoint>,
    pub fits: Vec<DecayFit>,
}

impl SelfAvgReport {
    pub fn fit(&self, quantity: &str, strength: f64) -> Option<&DecayFit> {
        self.fits.iter().find(|f| f.quantity == quantity && (f.strength - strength).abs() < 1e-12)
    }

    pub fn difference(&self, quantity: &str, n: usize, strength: f64) -> Option<&DifferencePoint> {
        self.differences
            .iter()
            .find(|d| d.quantity == quantity && d.n == n && (d.strength - strength).abs() < 1e-12)
    }
}

pub const FLUCTUATION_M2: &str = "fluctuation_m2";
pub const FLUCTUATION_P2: &str = "fluctuation_p2";

/// Name of an entropy quantity in reports, e.g. `entanglement_q2`.
pub fn entropy_quantity(kind: ValueKind, q: f64) -> String {
    format!("{}_q{}", kind.name(), q)
}

/// Fidelity difference `mean(m2/p2) - mean(m2)/mean(p2)` (jackknife bias
/// corrected), its jackknife error, and the quenched mean.
pub fn fidelity_difference(records: &[RunRecord]) -> Result<(f64, f64, f64)> {
    let f: Vec<f64> = records.iter().map(|r| r.parts.fidelity).collect();
    let m: Vec<f64> = records.iter().map(|r| r.parts.m2).collect();
    let p: Vec<f64> = records.iter().map(|r| r.parts.p2).collect();
    let j = jackknife_from_sums(&[&f, &m, &p], |s, n| s[0] / n as f64 - s[1] / s[2])?;
    Ok((j.corrected, j.error, encdec_core::stats::mean(&f)))
}

/// Entropy difference between the quenched mean and the annealed
/// `log2(E num / E den) / (1 - q)`, bias corrected like
/// [`fidelity_difference`]; `None` when the records carry no moments.
fn entropy_difference(records: &[RunRecord], kind: ValueKind, q: f64) -> Result<Option<(f64, f64, f64)>> {
    let mut cols: [Vec<f64>; 3] = Default::default();
    for r in records {
        let Some(v) = r.values.iter().find(|v| v.kind == kind && v.q == Some(q)) else {
            return Ok(None);
        };
        let (Some(num), Some(den)) = (v.numerator, v.denominator) else {
            return Ok(None);
        };
        cols[0].push(v.value);
        cols[1].push(num);
        cols[2].push(den);
    }
    let annealed = |s: &[f64]| (s[1] / s[2]).log2() / (1.0 - q);
    let j = jackknife_from_sums(&[&cols[0], &cols[1], &cols[2]], |s, n| s[0] / n as f64 - annealed(s))?;
    let totals = [0.0, cols[1].iter().sum(), cols[2].iter().sum()];
    Ok(Some((j.corrected, j.error, annealed(&totals))))
}

fn decay_fit(quantity: &str, strength: f64, points: &[(usize, f64)]) -> Result<DecayFit> {
    if points.iter().any(|&(_, y)| !(y > ZERO_DIFFERENCE) || !y.is_finite()) {
        return Ok(DecayFit { quantity: quantity.into(), strength, rate: None, r_squared: None, status: FitStatus::Degenerate });
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(DecayFit {
        quantity: quantity.into(),
        strength,
        rate: Some(-fit.slope),
        r_squared: Some(fit.r_squared),
        status: FitStatus::Ok,
    })
}

/// Differences, fluctuation ratios and their exponential decay fits from a finished sweep.
pub fn analyze_selfaveraging(sweep: &SweepResult) -> Result<SelfAvgReport> {
    if sweep.sizes.len() < 4 {
        return Err(HarnessError::Config(format!(
            "self-averaging needs at least 4 sizes, got {}",
            sweep.sizes.len()
        )));
    }
    let config = &sweep.config;
    let mut differences = Vec::new();
    let mut fluctuations = Vec::new();
    for size in &sweep.sizes {
        let scale = (size.n as f64).exp2();
        for point in &size.points {
            let (d, err, quenched) = fidelity_difference(&point.records)?;
            differences.push(DifferencePoint {
                quantity: ValueKind::Fidelity.name().into(),
                n: size.n,
                strength: point.strength,
                quenched,
                annealed: quenched - d,
                difference: d.abs(),
                error: err,
                scaled_difference: d.abs() * scale,
            });
            for kind in config.request().kinds {
                for &q in config.q.iter().filter(|q| q.is_finite()) {
                    if let Some((d, err, annealed)) = entropy_difference(&point.records, kind, q)? {
                        differences.push(DifferencePoint {
                            quantity: entropy_quantity(kind, q),
                            n: size.n,
                            strength: point.strength,
                            quenched: annealed + d,
                            annealed,
                            difference: d.abs(),
                            error: err,
                            scaled_difference: d.abs() * scale,
                        });
                    }
                }
            }
            let m: Vec<f64> = point.records.iter().map(|r| r.parts.m2).collect();
            let p: Vec<f64> = point.records.iter().map(|r| r.parts.p2).collect();
            fluctuations.push(FluctuationPoint {
                n: size.n,
                strength: point.strength,
                m2: fluctuation_ratio(&m)?,
                p2: fluctuation_ratio(&p)?,
            });
        }
    }
    let mut fits = Vec::new();
    let mut quantities: Vec<String> = Vec::new();
    for d in &differences {
        if !quantities.contains(&d.quantity) {
            quantities.push(d.quantity.clone());
        }
    }
    for &s in &config.grid {
        for qn in &quantities {
            let pts: Vec<(usize, f64)> = differences
                .iter()
                .filter(|d| &d.quantity == qn && d.strength == s)
                .map(|d| (d.n, d.difference))
                .collect();
            fits.push(decay_fit(qn, s, &pts)?);
        }
        let at: Vec<&FluctuationPoint> = fluctuations.iter().filter(|f| f.strength == s).collect();
        let m: Vec<(usize, f64)> = at.iter().map(|f| (f.n, f.m2.0)).collect();
        let p: Vec<(usize, f64)> = at.iter().map(|f| (f.n, f.p2.0)).collect();
        fits.push(decay_fit(FLUCTUATION_M2, s, &m)?);
        fits.push(decay_fit(FLUCTUATION_P2, s, &p)?);
    }
    Ok(SelfAvgReport { differences, fluctuations, fits })
}

/// Run the sweep described by `config` and analyze it.
pub fn run_selfaveraging_study(config: &ExperimentConfig) -> Result<(SweepResult, SelfAvgReport)> {
    if config.kind != ExperimentKind::Selfavg {
        return Err(HarnessError::Config("run_selfaveraging_study needs the selfavg experiment kind".into()));
    }
    let sweep = run_quenched_sweep(config)?;
    let report = analyze_selfaveraging(&sweep)?;
    Ok((sweep, report))
}
