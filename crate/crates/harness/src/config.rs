//! Experiment configuration, loaded from TOML or JSON and validated before any run.

use std::path::{Path, PathBuf};

use encdec_core::decoding::{ObservableRequest, Representation};
use encdec_core::layout::MAX_QUBITS;
use encdec_core::noise::ErrorKind;
use encdec_core::observables::ValueKind;
use encdec_core::SystemLayout;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Largest register the density backend accepts.
pub const MAX_DENSITY_QUBITS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Sweep,
    Selfavg,
    Collapse,
    NoisyDevice,
    TheoryExport,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Sweep => "sweep",
            ExperimentKind::Selfavg => "selfavg",
            ExperimentKind::Collapse => "collapse",
            ExperimentKind::NoisyDevice => "noisy_device",
            ExperimentKind::TheoryExport => "theory_export",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Backend {
    /// State vectors; coherent noise only.
    Pure,
    /// Exact density matrices, `N <= 10`.
    Density,
    /// Pauli trajectories on state vectors; fidelity only.
    Trajectory,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Pure => "pure",
            Backend::Density => "density",
            Backend::Trajectory => "trajectory",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum InitialState {
    AllZero,
    Ghz,
    /// Independent Haar-random single-qubit states, redrawn per realization.
    ProductRandom,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Closed-form quantities the `theory` subcommand can export.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum TheoryQuantity {
    /// Annealed fidelity of the configured model at each `(N, strength)`.
    Fidelity,
    /// Logistic finite-size form for uniform depolarizing noise.
    ScalingLogistic,
    /// Error-function finite-size form for disordered noise.
    ScalingErf,
    SlopeEntanglement,
    SlopeThermodynamic,
    DimensionParticipation,
    SlopeEntanglementCodespace,
    DimensionParticipationCodespace,
    /// Critical strength of the configured model.
    Critical,
}

impl TheoryQuantity {
    pub fn name(self) -> &'static str {
        match self {
            TheoryQuantity::Fidelity => "fidelity",
            TheoryQuantity::ScalingLogistic => "scaling_logistic",
            TheoryQuantity::ScalingErf => "scaling_erf",
            TheoryQuantity::SlopeEntanglement => "slope_entanglement",
            TheoryQuantity::SlopeThermodynamic => "slope_thermodynamic",
            TheoryQuantity::DimensionParticipation => "dimension_participation",
            TheoryQuantity::SlopeEntanglementCodespace => "slope_entanglement_codespace",
            TheoryQuantity::DimensionParticipationCodespace => "dimension_participation_codespace",
            TheoryQuantity::Critical => "critical",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CollapseSettings {
    pub nu_range: (f64, f64),
    /// Search window for the critical strength; the grid's range when absent.
    pub critical_range: Option<(f64, f64)>,
    pub bootstrap: usize,
    /// Value kind whose curves are collapsed.
    pub value_kind: ValueKind,
}

impl Default for CollapseSettings {
    fn default() -> Self {
        Self { nu_range: (0.3, 4.0), critical_range: None, bootstrap: 200, value_kind: ValueKind::Fidelity }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment_id: String,
    pub kind: ExperimentKind,
    pub model: ErrorKind,
    /// Depolarizing strength of the device model.
    pub epsilon: Option<f64>,
    pub sizes: Vec<usize>,
    /// Code rate `k / N`; ignored when `logical` is set.
    pub rate: Option<f64>,
    /// Explicit logical register size.
    pub logical: Option<usize>,
    pub grid: Vec<f64>,
    pub q: Vec<f64>,
    /// Entropies to record besides the fidelity.
    pub observables: Vec<ValueKind>,
    /// Size of `X1` as a fraction of `N`.
    pub subsystem_fraction: f64,
    pub realizations: usize,
    /// Trajectories per realization and grid point (trajectory backend).
    pub trajectories: usize,
    pub seed: u64,
    pub backend: Backend,
    /// Circuit depth in units of `N`; 2 by default and 1 for the device model.
    pub depth_factor: Option<usize>,
    pub initial_state: InitialState,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub theory: Vec<TheoryQuantity>,
    pub collapse: CollapseSettings,
    /// A grid point aborts when more than this fraction of realizations is degenerate.
    pub abort_fraction: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment_id: "experiment".into(),
            kind: ExperimentKind::Sweep,
            model: ErrorKind::Coherent,
            epsilon: None,
            sizes: vec![8],
            rate: Some(0.5),
            logical: None,
            grid: Vec::new(),
            q: vec![2.0],
            observables: Vec::new(),
            subsystem_fraction: 0.25,
            realizations: 1000,
            trajectories: 16,
            seed: 1,
            backend: Backend::Pure,
            depth_factor: None,
            initial_state: InitialState::AllZero,
            output: None,
            format: OutputFormat::Csv,
            theory: Vec::new(),
            collapse: CollapseSettings::default(),
            abort_fraction: 0.01,
        }
    }
}

fn config_error(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

/// Parse `lo:hi:steps` into `steps` evenly spaced points including both ends.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts[..] else {
        return Err(config_error(format!("grid must be lo:hi:steps, got {s:?}")));
    };
    let lo: f64 = lo.trim().parse().map_err(|_| config_error(format!("bad grid start {lo:?}")))?;
    let hi: f64 = hi.trim().parse().map_err(|_| config_error(format!("bad grid end {hi:?}")))?;
    let steps: usize = steps.trim().parse().map_err(|_| config_error(format!("bad grid size {steps:?}")))?;
    linspace(lo, hi, steps)
}

pub fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => Err(config_error("grid needs at least one point")),
        1 => Ok(vec![lo]),
        // Rounded to 1e-12 so decimal grids print as written.
        _ => Ok((0..steps).map(|i| ((lo + (hi - lo) * i as f64 / (steps - 1) as f64) * 1e12).round() / 1e12).collect()),
    }
}

impl ExperimentConfig {
    /// Load from a `.toml` or `.json` file (other extensions: TOML, then JSON).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        match ext {
            "json" => Self::from_json(&text),
            "toml" => Self::from_toml(&text),
            _ => Self::from_toml(&text).or_else(|_| Self::from_json(&text)),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config_error(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config_error(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_error(e.to_string()))
    }

    pub fn logical_qubits(&self, n: usize) -> Result<usize> {
        let k = match (self.logical, self.rate) {
            (Some(k), _) => k,
            (None, Some(r)) => {
                if !(r > 0.0 && r <= 1.0) {
                    return Err(config_error(format!("rate must lie in (0, 1], got {r}")));
                }
                (r * n as f64).round() as usize
            }
            (None, None) => return Err(config_error("either rate or logical must be set")),
        };
        if k == 0 || k > n {
            return Err(config_error(format!("logical register of {k} qubits does not fit N = {n}")));
        }
        Ok(k)
    }

    pub fn depth(&self, n: usize) -> usize {
        let c = self.depth_factor.unwrap_or(if self.model == ErrorKind::DeviceNoise { 1 } else { 2 });
        c * n
    }

    pub fn needs_bipartition(&self) -> bool {
        self.observables.contains(&ValueKind::Entanglement)
    }

    pub fn x1_size(&self, n: usize) -> usize {
        ((self.subsystem_fraction * n as f64 + 1e-9).floor() as usize).max(1)
    }

    /// Register layout for size `n`, with `X1` the first qubits when entanglement is requested.
    pub fn layout(&self, n: usize) -> Result<SystemLayout> {
        let layout = SystemLayout::new(n, self.logical_qubits(n)?)?;
        if self.needs_bipartition() {
            return Ok(layout.with_leading_x1(self.x1_size(n))?);
        }
        Ok(layout)
    }

    pub fn request(&self) -> ObservableRequest {
        let mut kinds: Vec<ValueKind> = Vec::new();
        for &k in &self.observables {
            if k != ValueKind::Fidelity && !kinds.contains(&k) {
                kinds.push(k);
            }
        }
        ObservableRequest { kinds, q: self.q.clone() }
    }

    pub fn representation(&self) -> Option<Representation> {
        match self.backend {
            Backend::Pure => Some(Representation::Pure),
            Backend::Density => Some(Representation::Density),
            Backend::Trajectory => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment_id.is_empty() || self.experiment_id.contains(['/', '\\']) {
            return Err(config_error(format!("invalid experiment_id {:?}", self.experiment_id)));
        }
        let is_theory = self.kind == ExperimentKind::TheoryExport;
        if self.sizes.is_empty() && !is_theory {
            return Err(config_error("no system sizes"));
        }
        for &n in &self.sizes {
            if n < 2 || n % 2 != 0 || n > MAX_QUBITS {
                return Err(config_error(format!("N = {n} must be even and between 2 and {MAX_QUBITS}")));
            }
            self.logical_qubits(n)?;
            if self.backend == Backend::Density && n > MAX_DENSITY_QUBITS && !is_theory {
                return Err(config_error(format!("density backend supports N <= {MAX_DENSITY_QUBITS}, got {n}")));
            }
            if self.needs_bipartition() {
                let (x1, k) = (self.x1_size(n), self.logical_qubits(n)?);
                if 2 * x1 > k {
                    return Err(config_error(format!("|X1| = {x1} exceeds half of k = {k} at N = {n}")));
                }
            }
        }
        if self.grid.is_empty() && !is_theory {
            return Err(config_error("empty strength grid"));
        }
        for &s in &self.grid {
            self.model.check_strength(s).map_err(|e| config_error(e.to_string()))?;
        }
        for &q in &self.q {
            if q.is_nan() || q <= 0.0 || q == 1.0 {
                return Err(config_error(format!("unsupported Renyi index {q}")));
            }
        }
        if self.q.is_empty() && !self.request().is_fidelity_only() {
            return Err(config_error("entropies requested without any q"));
        }
        if !(self.subsystem_fraction > 0.0 && self.subsystem_fraction <= 0.5) {
            return Err(config_error("subsystem_fraction must lie in (0, 1/2]"));
        }
        if self.realizations == 0 && !is_theory {
            return Err(config_error("realizations must be positive"));
        }
        if !(0.0..=1.0).contains(&self.abort_fraction) {
            return Err(config_error("abort_fraction must lie in [0, 1]"));
        }
        if self.depth_factor == Some(0) {
            return Err(config_error("depth_factor must be positive"));
        }
        let device = self.model == ErrorKind::DeviceNoise;
        if device != (self.kind == ExperimentKind::NoisyDevice) && !is_theory {
            return Err(config_error("the device_noise model goes with the noisy_device experiment kind"));
        }
        if device {
            match self.epsilon {
                Some(e) if (0.0..=1.0).contains(&e) => {}
                Some(e) => return Err(config_error(format!("epsilon = {e} outside [0, 1]"))),
                None => return Err(config_error("device_noise needs epsilon")),
            }
        }
        match self.backend {
            Backend::Pure if !self.model.is_coherent() && !is_theory => {
                return Err(config_error(format!("pure backend cannot simulate {} noise", self.model.name())));
            }
            Backend::Trajectory => {
                if self.model.is_coherent() {
                    return Err(config_error("trajectory backend is for depolarizing noise"));
                }
                if !self.request().is_fidelity_only() {
                    return Err(config_error("trajectory backend records the fidelity only"));
                }
                if self.trajectories == 0 {
                    return Err(config_error("trajectories must be positive"));
                }
            }
            _ => {}
        }
        if device && self.backend == Backend::Pure {
            return Err(config_error("device noise needs the trajectory or density backend"));
        }
        if device && !self.request().is_fidelity_only() {
            return Err(config_error("device runs record the fidelity only"));
        }
        match self.kind {
            ExperimentKind::Selfavg if self.sizes.len() < 4 => {
                Err(config_error(format!("self-averaging needs at least 4 sizes, got {}", self.sizes.len())))
            }
            ExperimentKind::Collapse if distinct(&self.sizes) < 3 => {
                Err(config_error("collapse needs at least 3 distinct sizes"))
            }
            _ => Ok(()),
        }
    }
}

fn distinct(sizes: &[usize]) -> usize {
    let mut s = sizes.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ExperimentConfig {
        ExperimentConfig { grid: vec![0.5, 1.0], ..Default::default() }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn backend_rules() {
        base().validate().unwrap();
        let c = ExperimentConfig { model: ErrorKind::Depolarizing, ..base() };
        assert!(c.validate().is_err());
        let c = ExperimentConfig { model: ErrorKind::Depolarizing, backend: Backend::Density, sizes: vec![12], ..base() };
        assert!(c.validate().is_err());
        let c = ExperimentConfig {
            model: ErrorKind::Depolarizing,
            backend: Backend::Trajectory,
            observables: vec![ValueKind::Thermodynamic],
            ..base()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn domains_and_sizes() {
        assert!(ExperimentConfig { grid: vec![2.0], ..base() }.validate().is_err());
        assert!(ExperimentConfig { sizes: vec![7], ..base() }.validate().is_err());
        assert!(ExperimentConfig { kind: ExperimentKind::Selfavg, sizes: vec![4, 6, 8], ..base() }
            .validate()
            .is_err());
        assert!(ExperimentConfig { q: vec![1.0], ..base() }.validate().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let c = ExperimentConfig { observables: vec![ValueKind::Entanglement], q: vec![2.0, 3.0], ..base() };
        let back = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn depth_rule() {
        assert_eq!(base().depth(8), 16);
        let c = ExperimentConfig { model: ErrorKind::DeviceNoise, ..base() };
        assert_eq!(c.depth(8), 8);
    }
}
