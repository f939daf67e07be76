//! Fidelity, Renyi entropies and fluctuation measures of decoded states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::ErrorModel;
use crate::state::linalg::clip_spectrum;
use crate::state::{MixedState, PureState, QuantumState};
use crate::stats::jackknife_from_sums;

/// Outcome of decoding one realization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityParts {
    /// Post-selected fidelity `m2 / p2`.
    pub fidelity: f64,
    /// Unnormalized overlap with the reference, including the post-selection weight.
    pub m2: f64,
    /// Post-selection probability.
    pub p2: f64,
}

/// A decoded logical state that can be overlapped with a pure reference.
pub trait LogicalOutput {
    fn overlap_with(&self, reference: &PureState) -> Result<f64>;
}

impl LogicalOutput for PureState {
    fn overlap_with(&self, reference: &PureState) -> Result<f64> {
        Ok(self.inner(reference)?.norm_sqr())
    }
}

impl LogicalOutput for MixedState {
    fn overlap_with(&self, reference: &PureState) -> Result<f64> {
        self.expectation(reference)
    }
}

/// Fidelity of a normalized decoded state obtained with probability `post_prob`.
pub fn fidelity<S: LogicalOutput>(decoded: &S, post_prob: f64, reference: &PureState) -> Result<FidelityParts> {
    let f = decoded.overlap_with(reference)?;
    Ok(FidelityParts { fidelity: f, m2: f * post_prob, p2: post_prob })
}

/// Fidelity from an unnormalized ancilla-zero block.
pub fn fidelity_from_block<S: LogicalOutput + Trace>(block: &S, reference: &PureState) -> Result<FidelityParts> {
    let m2 = block.overlap_with(reference)?;
    let p2 = block.trace_value();
    if p2 < crate::state::DEGENERATE_POST_SELECTION {
        return Err(Error::DegeneratePostSelection(p2));
    }
    Ok(FidelityParts { fidelity: m2 / p2, m2, p2 })
}

/// Trace of the (possibly unnormalized) state.
pub trait Trace {
    fn trace_value(&self) -> f64;
}

impl Trace for PureState {
    fn trace_value(&self) -> f64 {
        self.norm_sqr()
    }
}

impl Trace for MixedState {
    fn trace_value(&self) -> f64 {
        self.trace()
    }
}

fn check_index(q: f64) -> Result<()> {
    if q.is_nan() || q <= 0.0 || q == 1.0 {
        return Err(Error::UnsupportedRenyiIndex(q));
    }
    Ok(())
}

/// `sum p^q` over a nonnegative spectrum (the Renyi moment).
pub fn renyi_moment(spectrum: &[f64], q: f64) -> Result<f64> {
    check_index(q)?;
    if q.is_infinite() {
        return Err(Error::UnsupportedRenyiIndex(q));
    }
    Ok(spectrum.iter().filter(|&&p| p > 0.0).map(|p| p.powf(q)).sum())
}

/// Renyi entropy (base 2) of a normalized spectrum. `q = inf` gives the
/// min-entropy `-log2 max p`.
pub fn renyi_from_spectrum(spectrum: &[f64], q: f64) -> Result<f64> {
    check_index(q)?;
    if q.is_infinite() {
        let max = spectrum.iter().copied().fold(0.0, f64::max);
        return Ok(-max.log2());
    }
    Ok(renyi_moment(spectrum, q)?.log2() / (1.0 - q))
}

/// Renyi entropy of the reduced state on `keep`.
pub fn renyi_entropy<S: QuantumState>(state: &S, q: f64, keep: &[usize]) -> Result<f64> {
    check_index(q)?;
    let rho = state.reduced_density_matrix(keep)?;
    let eigs = clip_spectrum(rho.eigenvalues()?)?;
    renyi_from_spectrum(&eigs, q)
}

/// Spectrum of the reduced state on `keep`, clipped to be nonnegative.
pub fn reduced_spectrum<S: QuantumState>(state: &S, keep: &[usize]) -> Result<Vec<f64>> {
    clip_spectrum(state.reduced_density_matrix(keep)?.eigenvalues()?)
}

/// Participation entropy of a probability distribution.
pub fn participation_entropy(weights: &[f64], q: f64) -> Result<f64> {
    check_index(q)?;
    if let Some(&w) = weights.iter().find(|&&w| w < -1e-12) {
        return Err(Error::NegativeEigenvalue(w));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(total));
    }
    let clipped: Vec<f64> = weights.iter().map(|&w| w.max(0.0)).collect();
    renyi_from_spectrum(&clipped, q)
}

/// Which computational basis a participation entropy is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// Ancilla-projected, renormalized logical state.
    Logical,
    /// Full register before projection.
    Codespace,
}

pub fn participation_entropy_of<S: QuantumState>(state: &S, q: f64, space: Space) -> Result<f64> {
    match space {
        Space::Codespace => participation_entropy(&state.probabilities(), q),
        Space::Logical => {
            let (x, _) = state.project_ancillas()?;
            participation_entropy(&x.probabilities(), q)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Fidelity,
    /// Renyi entropy of `X1` in the decoded logical state.
    Entanglement,
    /// Renyi entropy of the whole decoded logical state.
    Thermodynamic,
    ParticipationLogical,
    ParticipationCodespace,
    /// Renyi entropy of the logical register before post-selection.
    EntanglementCodespace,
}

impl ValueKind {
    pub const ALL: [ValueKind; 6] = [
        ValueKind::Fidelity,
        ValueKind::Entanglement,
        ValueKind::Thermodynamic,
        ValueKind::ParticipationLogical,
        ValueKind::ParticipationCodespace,
        ValueKind::EntanglementCodespace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ValueKind::Fidelity => "fidelity",
            ValueKind::Entanglement => "entanglement",
            ValueKind::Thermodynamic => "thermodynamic",
            ValueKind::ParticipationLogical => "participation_logical",
            ValueKind::ParticipationCodespace => "participation_codespace",
            ValueKind::EntanglementCodespace => "entanglement_codespace",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Label of the subsystem the quantity refers to.
    pub fn subsystem(self) -> &'static str {
        match self {
            ValueKind::Fidelity | ValueKind::Thermodynamic | ValueKind::ParticipationLogical => "X",
            ValueKind::Entanglement => "X1",
            ValueKind::ParticipationCodespace => "codespace",
            ValueKind::EntanglementCodespace => "X|ancilla",
        }
    }

    /// Whether the quantity needs only the post-selected logical block.
    pub fn is_logical(self) -> bool {
        !matches!(self, ValueKind::ParticipationCodespace | ValueKind::EntanglementCodespace)
    }
}

/// One entropy measured on one realization. For finite `q` the numerator and
/// denominator are the unnormalized moments whose averages give the annealed
/// estimate `log2(E[num] / E[den]) / (1 - q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableValue {
    pub kind: ValueKind,
    pub q: Option<f64>,
    pub value: f64,
    pub numerator: Option<f64>,
    pub denominator: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub realization: u64,
    /// Seed of the realization's gate stream.
    pub seed: u64,
    pub model: ErrorModel,
    pub strength: f64,
    pub parts: FidelityParts,
    pub values: Vec<ObservableValue>,
}

/// Relative fluctuation `std / mean` (population form) with its jackknife error.
pub fn fluctuation_ratio(xs: &[f64]) -> Result<(f64, f64)> {
    if xs.len() < MIN_FLUCTUATION_SAMPLE {
        return Err(Error::InsufficientSample { needed: MIN_FLUCTUATION_SAMPLE, got: xs.len() });
    }
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let j = jackknife_from_sums(&[xs, &sq], |s, n| {
        let m = s[0] / n as f64;
        let var = (s[1] / n as f64 - m * m).max(0.0);
        var.sqrt() / m
    })?;
    Ok((j.estimate, j.error))
}

pub const MIN_FLUCTUATION_SAMPLE: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationRatios {
    pub m2: (f64, f64),
    pub p2: (f64, f64),
}

pub fn fluctuation_ratios(records: &[RunRecord]) -> Result<FluctuationRatios> {
    let m: Vec<f64> = records.iter().map(|r| r.parts.m2).collect();
    let p: Vec<f64> = records.iter().map(|r| r.parts.p2).collect();
    Ok(FluctuationRatios { m2: fluctuation_ratio(&m)?, p2: fluctuation_ratio(&p)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::SystemLayout;
    use crate::C64;

    #[test]
    fn uniform_distribution_entropy_is_log_dim() {
        let w = vec![0.125; 8];
        for q in [0.5, 2.0, 3.0, f64::INFINITY] {
            assert!((participation_entropy(&w, q).unwrap() - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bad_indices_and_weights() {
        assert!(participation_entropy(&[1.0], 1.0).is_err());
        assert!(participation_entropy(&[1.0], 0.0).is_err());
        assert_eq!(participation_entropy(&[0.5, 0.4], 2.0), Err(Error::Unnormalized(0.9)));
    }

    #[test]
    fn product_state_has_zero_entanglement() {
        let q = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let s = PureState::product(&[q, q, q]).unwrap();
        for order in [2.0, 3.0, f64::INFINITY] {
            assert!(renyi_entropy(&s, order, &[0]).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn fidelity_of_block_is_ratio() {
        let l = SystemLayout::bare(1).unwrap();
        let v = PureState::from_amplitudes(l.clone(), vec![C64::new(0.3, 0.0), C64::new(0.0, 0.4)]).unwrap();
        let r = PureState::zero(l);
        let f = fidelity_from_block(&v, &r).unwrap();
        assert!((f.m2 - 0.09).abs() < 1e-15 && (f.p2 - 0.25).abs() < 1e-15);
        assert!((f.fidelity - 0.36).abs() < 1e-15);
    }

    #[test]
    fn fluctuation_ratio_formula() {
        let xs: Vec<f64> = (0..40).map(|i| 1.0 + (i % 7) as f64 * 0.1).collect();
        let m = xs.iter().sum::<f64>() / 40.0;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / 40.0;
        let (r, e) = fluctuation_ratio(&xs).unwrap();
        assert!((r - v.sqrt() / m).abs() < 1e-12);
        assert!(e > 0.0);
        assert!(fluctuation_ratio(&xs[..10]).is_err());
    }
}
