//! Closed-form curves as `(kind, N, k, r, q, strength, value)` rows.

use std::path::Path;

use encdec_core::noise::ErrorKind;
use encdec_core::theory::{
    codespace_slopes, critical_alpha, critical_alpha_printed, critical_lambda, dimension_participation_logical,
    disorder_scaling_constants, slope_entanglement_logical, slope_thermo_logical, solve_disordered_critical,
    ScalingFunction,
};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, OutputFormat, TheoryQuantity};
use crate::error::{HarnessError, Result};
use crate::table::{fidelity_theory, write_csv, write_json, HeaderOnly};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryRow {
    pub kind: String,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub r: f64,
    pub q: Option<f64>,
    pub strength: Option<f64>,
    pub value: f64,
}

impl HeaderOnly for TheoryRow {
    fn header() -> &'static [&'static str] {
        &["kind", "N", "k", "r", "q", "strength", "value"]
    }
}

fn rate(config: &ExperimentConfig) -> Result<f64> {
    match (config.rate, config.logical, config.sizes.first()) {
        (_, Some(k), Some(&n)) => Ok(k as f64 / n as f64),
        (Some(r), _, _) => Ok(r),
        _ => Err(HarnessError::Config("theory export needs a rate".into())),
    }
}

/// Rows for every requested quantity over the configured sizes, grid and `q` values.
pub fn theory_rows(config: &ExperimentConfig) -> Result<Vec<TheoryRow>> {
    config.validate()?;
    let r = rate(config)?;
    let r1 = config.subsystem_fraction;
    let mut rows = Vec::new();
    let sized = |rows: &mut Vec<TheoryRow>, kind: &str, f: &dyn Fn(usize, usize, f64) -> Result<f64>| -> Result<()> {
        for &n in &config.sizes {
            let k = config.logical_qubits(n)?;
            for &s in &config.grid {
                rows.push(TheoryRow {
                    kind: kind.into(),
                    n: Some(n),
                    k: Some(k),
                    r: k as f64 / n as f64,
                    q: None,
                    strength: Some(s),
                    value: f(n, k, s)?,
                });
            }
        }
        Ok(())
    };
    let per_q = |rows: &mut Vec<TheoryRow>, kind: &str, f: &dyn Fn(f64, f64) -> Result<f64>| -> Result<()> {
        for &q in &config.q {
            for &s in &config.grid {
                rows.push(TheoryRow { kind: kind.into(), n: None, k: None, r, q: Some(q), strength: Some(s), value: f(q, s)? });
            }
        }
        Ok(())
    };
    for &quantity in &config.theory {
        let name = quantity.name();
        match quantity {
            TheoryQuantity::Fidelity => {
                sized(&mut rows, name, &|n, k, s| Ok(fidelity_theory(config.model, n, k, s)?.unwrap_or(f64::NAN)))?
            }
            TheoryQuantity::ScalingLogistic => {
                let f = ScalingFunction::logistic_depolarizing(r)?;
                sized(&mut rows, name, &|n, _, s| Ok(f.eval(n, s)))?
            }
            TheoryQuantity::ScalingErf => {
                let kind = if config.model.is_coherent() {
                    ErrorKind::CoherentDisordered
                } else {
                    ErrorKind::DepolarizingDisordered
                };
                let c = disorder_scaling_constants(kind, r)?;
                let f = ScalingFunction::erf(c.critical, Some(c.alpha1), Some(c.amplitude))?;
                sized(&mut rows, name, &|n, _, s| Ok(f.eval(n, s)))?
            }
            TheoryQuantity::SlopeEntanglement => {
                per_q(&mut rows, name, &|q, s| Ok(slope_entanglement_logical(q, r, r1, s)?))?
            }
            TheoryQuantity::SlopeThermodynamic => per_q(&mut rows, name, &|q, s| Ok(slope_thermo_logical(q, r, s)?))?,
            TheoryQuantity::DimensionParticipation => {
                per_q(&mut rows, name, &|q, s| Ok(dimension_participation_logical(q, r, s)?))?
            }
            TheoryQuantity::SlopeEntanglementCodespace => {
                per_q(&mut rows, name, &|q, s| Ok(codespace_slopes(q, r, s)?.entanglement))?
            }
            TheoryQuantity::DimensionParticipationCodespace => {
                per_q(&mut rows, name, &|q, s| Ok(codespace_slopes(q, r, s)?.participation))?
            }
            TheoryQuantity::Critical => {
                let mut push = |kind: &str, value: f64| {
                    rows.push(TheoryRow { kind: kind.into(), n: None, k: None, r, q: None, strength: None, value })
                };
                match config.model {
                    ErrorKind::Coherent | ErrorKind::DeviceNoise => {
                        push(name, critical_alpha(r)?.value);
                        push("critical_printed", critical_alpha_printed(r)?.value);
                    }
                    ErrorKind::Depolarizing => push(name, critical_lambda(r)?.value),
                    kind => push(name, solve_disordered_critical(kind, r)?.value),
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_theory(rows: &[TheoryRow], path: &Path, format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(path, rows),
        OutputFormat::Json => write_json(path, rows),
    }
}
