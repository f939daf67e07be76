//! Raw and aggregated result tables, their theory overlay, and persistence.

use std::fs;
use std::path::{Path, PathBuf};

use encdec_core::noise::{ErrorKind, ErrorModel};
use encdec_core::observables::ValueKind;
use encdec_core::rng::rng_from_seed;
use encdec_core::stats::{mean_sem, CompensatedSum};
use encdec_core::theory::{annealed_fidelity_coherent, annealed_fidelity_depolarizing, Strengths};
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::{HarnessError, Result};
use crate::sweep::SweepResult;

/// One measured value of one realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub experiment_id: String,
    /// Experiment kind.
    pub kind: String,
    pub backend: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub r: f64,
    pub model: String,
    pub strength: f64,
    pub disorder_w: Option<f64>,
    pub epsilon: Option<f64>,
    pub q: Option<f64>,
    pub subsystem: String,
    pub realization: u64,
    pub seed: u64,
    pub m2: f64,
    pub p2: f64,
    pub fidelity: f64,
    pub value_kind: String,
    pub value: f64,
    pub post_prob: f64,
}

/// Mean over realizations of one value kind at one `(N, strength, q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregatedRow {
    pub experiment_id: String,
    /// Value kind (fidelity, entanglement, ...).
    pub kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    pub r: f64,
    pub model: String,
    pub strength: f64,
    pub q: Option<f64>,
    pub subsystem: String,
    pub mean: f64,
    pub sem: f64,
    pub n_real: usize,
    /// `mean(m2) / mean(p2)` for fidelity rows.
    pub annealed_ratio: Option<f64>,
    pub theory_value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerateCount {
    #[serde(rename = "N")]
    pub n: usize,
    pub strength: f64,
    pub excluded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment_id: String,
    pub config: ExperimentConfig,
    pub master_seed: u64,
    pub seed_scheme: String,
    pub code_version: String,
    pub wall_time_seconds: f64,
    pub degenerate: Vec<DegenerateCount>,
    pub files: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub manifest: Manifest,
    pub raw: Vec<RawRow>,
    pub aggregated: Vec<AggregatedRow>,
}

pub const SEED_SCHEME: &str =
    "size seed = splitmix(master, N); stream seed = splitmix(size seed, realization, stage); generator chacha8";

/// Draws used for the disorder average of the closed form.
pub const DISORDER_THEORY_SAMPLES: usize = 20_000;
const DISORDER_THEORY_SEED: u64 = 0x7468_656f_7279;

/// Closed-form overlay for a fidelity row: the annealed fidelity for uniform
/// noise, its disorder average for disordered noise, and the noiseless
/// coherent value for the device model.
pub fn fidelity_theory(model: ErrorKind, n: usize, k: usize, strength: f64) -> Result<Option<f64>> {
    let value = match model {
        ErrorKind::Coherent | ErrorKind::DeviceNoise => {
            annealed_fidelity_coherent(n, k, Strengths::Uniform(strength))?
        }
        ErrorKind::Depolarizing => annealed_fidelity_depolarizing(n, k, Strengths::Uniform(strength))?,
        ErrorKind::CoherentDisordered | ErrorKind::DepolarizingDisordered => {
            disorder_averaged_fidelity(model, n, k, strength, DISORDER_THEORY_SAMPLES)?
        }
    };
    Ok(Some(value))
}

/// Average of the closed form over `samples` independent disorder patterns
/// (a fixed stream, independent of any experiment seed).
pub fn disorder_averaged_fidelity(kind: ErrorKind, n: usize, k: usize, width: f64, samples: usize) -> Result<f64> {
    let mut rng = rng_from_seed(DISORDER_THEORY_SEED ^ n as u64);
    let model = ErrorModel::new(kind, width)?;
    let mut acc = CompensatedSum::default();
    for _ in 0..samples {
        let m = model.instantiate_disorder(n, &mut rng)?;
        let sites = m.realized_sites().expect("instantiated");
        let f = match kind {
            ErrorKind::CoherentDisordered => annealed_fidelity_coherent(n, k, Strengths::PerSite(sites))?,
            _ => annealed_fidelity_depolarizing(n, k, Strengths::PerSite(sites))?,
        };
        acc.add(f);
    }
    Ok(acc.value() / samples as f64)
}

/// Flatten a sweep into raw rows: one fidelity row per record plus one row per entropy.
pub fn raw_rows(sweep: &SweepResult) -> Vec<RawRow> {
    let c = &sweep.config;
    let mut rows = Vec::new();
    for size in &sweep.sizes {
        let r = size.k as f64 / size.n as f64;
        for point in &size.points {
            for rec in &point.records {
                let base = RawRow {
                    experiment_id: c.experiment_id.clone(),
                    kind: c.kind.name().into(),
                    backend: c.backend.name().into(),
                    n: size.n,
                    k: size.k,
                    r,
                    model: c.model.name().into(),
                    strength: point.strength,
                    disorder_w: c.model.is_disordered().then_some(point.strength),
                    epsilon: rec.model.epsilon(),
                    q: None,
                    subsystem: ValueKind::Fidelity.subsystem().into(),
                    realization: rec.realization,
                    seed: rec.seed,
                    m2: rec.parts.m2,
                    p2: rec.parts.p2,
                    fidelity: rec.parts.fidelity,
                    value_kind: ValueKind::Fidelity.name().into(),
                    value: rec.parts.fidelity,
                    post_prob: rec.parts.p2,
                };
                let entropies: Vec<RawRow> = rec
                    .values
                    .iter()
                    .map(|v| RawRow {
                        q: v.q,
                        subsystem: v.kind.subsystem().into(),
                        value_kind: v.kind.name().into(),
                        value: v.value,
                        ..base.clone()
                    })
                    .collect();
                rows.push(base);
                rows.extend(entropies);
            }
        }
    }
    rows
}

#[derive(PartialEq)]
struct GroupKey {
    n: usize,
    k: usize,
    model: String,
    strength: f64,
    value_kind: String,
    q: Option<f64>,
    subsystem: String,
}

impl GroupKey {
    fn of(row: &RawRow) -> Self {
        GroupKey {
            n: row.n,
            k: row.k,
            model: row.model.clone(),
            strength: row.strength,
            value_kind: row.value_kind.clone(),
            q: row.q,
            subsystem: row.subsystem.clone(),
        }
    }
}

/// Aggregate raw rows into per-`(N, strength, kind, q)` means, in order of
/// first appearance.
pub fn aggregate(raw: &[RawRow]) -> Result<Vec<AggregatedRow>> {
    let mut groups: Vec<(GroupKey, Vec<&RawRow>)> = Vec::new();
    for row in raw {
        let key = GroupKey::of(row);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    groups
        .into_iter()
        .map(|(key, rows)| {
            let first = rows[0];
            let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
            let (mean, sem) = mean_sem(&values);
            let is_fidelity = key.value_kind == ValueKind::Fidelity.name();
            let annealed_ratio = is_fidelity.then(|| {
                let (mut m, mut p) = (CompensatedSum::default(), CompensatedSum::default());
                rows.iter().for_each(|r| {
                    m.add(r.m2);
                    p.add(r.p2);
                });
                m.value() / p.value()
            });
            let theory_value = if is_fidelity {
                let kind = parse_model(&key.model)?;
                fidelity_theory(kind, key.n, key.k, key.strength)?
            } else {
                None
            };
            Ok(AggregatedRow {
                experiment_id: first.experiment_id.clone(),
                kind: key.value_kind,
                n: key.n,
                k: key.k,
                r: first.r,
                model: key.model,
                strength: key.strength,
                q: key.q,
                subsystem: key.subsystem,
                mean,
                sem,
                n_real: rows.len(),
                annealed_ratio,
                theory_value,
            })
        })
        .collect()
}

pub fn parse_model(name: &str) -> Result<ErrorKind> {
    [
        ErrorKind::Coherent,
        ErrorKind::CoherentDisordered,
        ErrorKind::Depolarizing,
        ErrorKind::DepolarizingDisordered,
        ErrorKind::DeviceNoise,
    ]
    .into_iter()
    .find(|k| k.name() == name)
    .ok_or_else(|| HarnessError::Analysis(format!("unknown model {name:?}")))
}

impl ResultTable {
    pub fn from_sweep(sweep: &SweepResult) -> Result<Self> {
        let raw = raw_rows(sweep);
        let aggregated = aggregate(&raw)?;
        let c = &sweep.config;
        let degenerate = sweep
            .sizes
            .iter()
            .flat_map(|s| {
                s.points.iter().filter(|p| p.degenerate > 0).map(|p| DegenerateCount {
                    n: s.n,
                    strength: p.strength,
                    excluded: p.degenerate,
                })
            })
            .collect();
        let manifest = Manifest {
            experiment_id: c.experiment_id.clone(),
            config: c.clone(),
            master_seed: c.seed,
            seed_scheme: SEED_SCHEME.into(),
            code_version: env!("CARGO_PKG_VERSION").into(),
            wall_time_seconds: sweep.wall_time,
            degenerate,
            files: file_names(&c.experiment_id, c.format),
        };
        Ok(Self { manifest, raw, aggregated })
    }

    /// Rows of one value kind (and `q`, when given) for size `n`.
    pub fn curve(&self, n: usize, kind: ValueKind, q: Option<f64>) -> Vec<&AggregatedRow> {
        self.aggregated.iter().filter(|r| r.n == n && r.kind == kind.name() && (q.is_none() || r.q == q)).collect()
    }

    /// Write raw, aggregated and manifest files into `dir`.
    pub fn emit(&self, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let names = file_names(&self.manifest.experiment_id, format);
        let paths: Vec<PathBuf> = names.iter().map(|n| dir.join(n)).collect();
        match format {
            OutputFormat::Csv => {
                write_csv(&paths[0], &self.raw)?;
                write_csv(&paths[1], &self.aggregated)?;
            }
            OutputFormat::Json => {
                write_json(&paths[0], &self.raw)?;
                write_json(&paths[1], &self.aggregated)?;
            }
        }
        let manifest = Manifest { files: names, ..self.manifest.clone() };
        write_json(&paths[2], &manifest)?;
        Ok(paths)
    }

    /// Read back a table written by [`ResultTable::emit`].
    pub fn load(dir: &Path, experiment_id: &str, format: OutputFormat) -> Result<Self> {
        let names = file_names(experiment_id, format);
        let paths: Vec<PathBuf> = names.iter().map(|n| dir.join(n)).collect();
        let (raw, aggregated) = match format {
            OutputFormat::Csv => (read_csv(&paths[0])?, read_csv(&paths[1])?),
            OutputFormat::Json => (read_json(&paths[0])?, read_json(&paths[1])?),
        };
        Ok(Self { manifest: read_json(&paths[2])?, raw, aggregated })
    }
}

pub fn file_names(id: &str, format: OutputFormat) -> Vec<String> {
    let ext = format.extension();
    vec![format!("{id}_raw.{ext}"), format!("{id}_aggregated.{ext}"), format!("{id}_manifest.json")]
}

/// Serialize rows to CSV; an empty slice still gets the header line.
pub fn write_csv<T: Serialize + HeaderOnly>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(|e| HarnessError::io(path, e))?;
    w.write_record(T::header()).map_err(|e| HarnessError::io(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| HarnessError::io(path, e))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::io(path, e))?;
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(|e| HarnessError::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::io(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::io(path, e))
}

/// Column names of a CSV row type, written even when there are no rows.
pub trait HeaderOnly {
    fn header() -> &'static [&'static str];
}

impl HeaderOnly for RawRow {
    fn header() -> &'static [&'static str] {
        &[
            "experiment_id",
            "kind",
            "backend",
            "N",
            "k",
            "r",
            "model",
            "strength",
            "disorder_w",
            "epsilon",
            "q",
            "subsystem",
            "realization",
            "seed",
            "m2",
            "p2",
            "fidelity",
            "value_kind",
            "value",
            "post_prob",
        ]
    }
}

impl HeaderOnly for AggregatedRow {
    fn header() -> &'static [&'static str] {
        &[
            "experiment_id",
            "kind",
            "N",
            "k",
            "r",
            "model",
            "strength",
            "q",
            "subsystem",
            "mean",
            "sem",
            "n_real",
            "annealed_ratio",
            "theory_value",
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disorder_average_reduces_to_uniform_at_zero_width() {
        let w = 1e-12;
        let f = disorder_averaged_fidelity(ErrorKind::DepolarizingDisordered, 6, 3, w, 10).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }
}
