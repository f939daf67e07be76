//! Decoding one circuit realization under a layer of noise and measuring the
//! post-selected output.

use std::sync::OnceLock;

use rand::Rng;

use crate::circuit::{BrickwallCircuit, Direction, NoisySchedule, PauliEvent};
use crate::error::{Error, Result};
use crate::noise::{
    apply_coherent_layer, apply_coherent_layer_mixed, apply_depolarizing_layer, apply_pauli, no_error_probability,
    sample_conditional_errors, ErrorKind, ErrorModel, Pauli,
};
use crate::observables::{
    fidelity_from_block, reduced_spectrum, renyi_from_spectrum, renyi_moment, FidelityParts, ObservableValue,
    ValueKind,
};
use crate::state::linalg::clip_spectrum;
use crate::state::{MixedState, PureState, QuantumState, DEGENERATE_POST_SELECTION};
use crate::C64;

/// The single layer of noise between encoder and decoder.
#[derive(Clone, Debug, PartialEq)]
pub enum NoiseLayer {
    /// `Z` rotation angle per qubit.
    Coherent(Vec<f64>),
    /// Depolarizing probability per qubit.
    Depolarizing(Vec<f64>),
}

impl NoiseLayer {
    /// Layer realized by `model` on `n` qubits. Disordered models must be
    /// instantiated first; the device model contributes its coherent angles.
    pub fn from_model(model: &ErrorModel, n: usize) -> Result<Self> {
        let s = model.site_strengths(n)?;
        Ok(match model.kind() {
            ErrorKind::Coherent | ErrorKind::CoherentDisordered | ErrorKind::DeviceNoise => NoiseLayer::Coherent(s),
            ErrorKind::Depolarizing | ErrorKind::DepolarizingDisordered => NoiseLayer::Depolarizing(s),
        })
    }
}

/// Entropies to record on every decoded state.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableRequest {
    /// Entropy kinds; [`ValueKind::Fidelity`] is always recorded and ignored here.
    pub kinds: Vec<ValueKind>,
    pub q: Vec<f64>,
}

impl ObservableRequest {
    pub fn fidelity_only() -> Self {
        Self::default()
    }

    fn entropies(&self) -> impl Iterator<Item = ValueKind> + '_ {
        self.kinds.iter().copied().filter(|&k| k != ValueKind::Fidelity)
    }

    pub fn needs_codespace(&self) -> bool {
        self.entropies().any(|k| !k.is_logical())
    }

    pub fn is_fidelity_only(&self) -> bool {
        self.entropies().next().is_none() || self.q.is_empty()
    }
}

/// Fidelity and requested entropies of one decoded state.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub parts: FidelityParts,
    pub values: Vec<ObservableValue>,
}

/// Which state representation carries the noisy evolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// State vector; coherent noise only.
    Pure,
    /// Density matrix.
    Density,
}

/// One encoder realization applied to one logical input.
#[derive(Debug)]
pub struct EncodedRealization {
    circuit: BrickwallCircuit,
    reference: PureState,
    encoded: PureState,
    images: OnceLock<Vec<PureState>>,
}

impl EncodedRealization {
    /// Encode `reference` (a state on the `k` logical qubits) with `circuit`.
    pub fn new(circuit: BrickwallCircuit, reference: PureState) -> Result<Self> {
        let mut encoded = PureState::embed_logical(circuit.layout().clone(), &reference)?;
        circuit.apply(&mut encoded, Direction::Forward)?;
        Ok(Self { circuit, reference, encoded, images: OnceLock::new() })
    }

    pub fn circuit(&self) -> &BrickwallCircuit {
        &self.circuit
    }

    pub fn reference(&self) -> &PureState {
        &self.reference
    }

    pub fn encoded(&self) -> &PureState {
        &self.encoded
    }

    /// Encoder images `U|x, 0>` of the logical basis states.
    fn images(&self) -> &[PureState] {
        self.images.get_or_init(|| {
            let layout = self.circuit.layout();
            (0..layout.logical_dim())
                .map(|x| {
                    let mut u = PureState::basis(layout.clone(), x).expect("logical index fits the register");
                    self.circuit.apply(&mut u, Direction::Forward).expect("same register");
                    u
                })
                .collect()
        })
    }

    /// Decode after `noise` and measure. Fails with
    /// [`Error::DegeneratePostSelection`] when the ancillas are almost never
    /// found in `|0>`.
    pub fn decode(&self, noise: &NoiseLayer, repr: Representation, request: &ObservableRequest) -> Result<Decoded> {
        match (noise, repr) {
            (NoiseLayer::Coherent(angles), Representation::Pure) => self.decode_pure(angles, request),
            (NoiseLayer::Depolarizing(_), Representation::Pure) => {
                Err(Error::InvalidLayout("depolarizing noise needs a density matrix".into()))
            }
            (_, Representation::Density) => self.decode_density(noise, request),
        }
    }

    fn decode_pure(&self, angles: &[f64], request: &ObservableRequest) -> Result<Decoded> {
        let mut psi = self.encoded.clone();
        apply_coherent_layer(&mut psi, angles)?;
        self.circuit.apply(&mut psi, Direction::Inverse)?;
        let block = psi.ancilla_zero_block();
        let parts = fidelity_from_block(&block, &self.reference)?;
        let mut logical = block;
        logical.amplitudes_mut().iter_mut().for_each(|a| *a /= parts.p2.sqrt());
        let mut values = logical_values(&logical, parts.p2, self.circuit.layout().x1(), request)?;
        if request.needs_codespace() {
            values.extend(codespace_values(&psi, request)?);
        }
        Ok(Decoded { parts, values })
    }

    fn decode_density(&self, noise: &NoiseLayer, request: &ObservableRequest) -> Result<Decoded> {
        let mut rho = self.encoded.to_density();
        match noise {
            NoiseLayer::Coherent(a) => apply_coherent_layer_mixed(&mut rho, a)?,
            NoiseLayer::Depolarizing(l) => apply_depolarizing_layer(&mut rho, l)?,
        }
        let (block, full) = if request.needs_codespace() {
            self.circuit.apply(&mut rho, Direction::Inverse)?;
            (rho.ancilla_zero_block(), Some(rho))
        } else {
            (self.project(&rho), None)
        };
        let parts = fidelity_from_block(&block, &self.reference)?;
        let mut logical = block;
        logical.scale(1.0 / parts.p2);
        let mut values = logical_values(&logical, parts.p2, self.circuit.layout().x1(), request)?;
        if let Some(f) = &full {
            values.extend(codespace_values(f, request)?);
        }
        Ok(Decoded { parts, values })
    }

    /// Ancilla-zero block of `U^dag rho U` without decoding the full matrix:
    /// entry `(x, y)` is `<u_x| rho |u_y>`.
    fn project(&self, rho: &MixedState) -> MixedState {
        let images = self.images();
        let (d, kd) = (rho.dim(), images.len());
        let data = rho.data();
        let mut out = vec![C64::new(0.0, 0.0); kd * kd];
        let mut w = vec![C64::new(0.0, 0.0); d];
        for (y, uy) in images.iter().enumerate() {
            let uy = uy.amplitudes();
            for (r, wr) in w.iter_mut().enumerate() {
                *wr = data[r * d..(r + 1) * d].iter().zip(uy).map(|(a, b)| a * b).sum();
            }
            for (x, ux) in images.iter().enumerate() {
                out[x * kd + y] = ux.amplitudes().iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            }
        }
        let k = self.circuit.layout().n_logical();
        MixedState::from_raw(crate::SystemLayout::bare(k).expect("logical size is valid"), out)
    }

    /// Overlap `m2` and post-selection weight `p2` after inserting Paulis
    /// between encoder and decoder. No degeneracy check: single
    /// trajectories may legitimately have tiny `p2`.
    pub fn pauli_trajectory(&self, errors: &[(usize, Pauli)]) -> Result<(f64, f64)> {
        let mut psi = self.encoded.clone();
        for &(q, p) in errors {
            apply_pauli(&mut psi, q, p)?;
        }
        self.circuit.apply(&mut psi, Direction::Inverse)?;
        let block = psi.ancilla_zero_block();
        Ok((block.inner(&self.reference)?.norm_sqr(), block.norm_sqr()))
    }

    /// Stratified trajectory estimate of `(m2, p2)` under depolarizing
    /// `rates`. The error-free branch (decoding returns the input exactly)
    /// enters with its exact weight; `trajectories` samples conditioned on at
    /// least one error estimate the rest.
    pub fn depolarizing_trajectories<R: Rng + ?Sized>(
        &self,
        rates: &[f64],
        trajectories: usize,
        rng: &mut R,
    ) -> Result<FidelityParts> {
        let w0 = no_error_probability(rates);
        let (mut me, mut pe) = (0.0, 0.0);
        if w0 < 1.0 && trajectories > 0 {
            for _ in 0..trajectories {
                let errors = sample_conditional_errors(rng, rates).expect("some site has a positive rate");
                let (m, p) = self.pauli_trajectory(&errors)?;
                me += m;
                pe += p;
            }
            me /= trajectories as f64;
            pe /= trajectories as f64;
        }
        stratified(w0, (1.0, 1.0), (me, pe))
    }
}

fn stratified(w0: f64, clean: (f64, f64), errors: (f64, f64)) -> Result<FidelityParts> {
    let m2 = w0 * clean.0 + (1.0 - w0) * errors.0;
    let p2 = w0 * clean.1 + (1.0 - w0) * errors.1;
    if p2 < DEGENERATE_POST_SELECTION {
        return Err(Error::DegeneratePostSelection(p2));
    }
    Ok(FidelityParts { fidelity: m2 / p2, m2, p2 })
}

/// Stratified trajectory estimate for the layered device model: the
/// error-free schedule is evolved exactly, and `trajectories` samples
/// conditioned on at least one Pauli error estimate the remainder.
pub fn device_trajectories<R: Rng + ?Sized>(
    schedule: &NoisySchedule,
    reference: &PureState,
    alpha: f64,
    trajectories: usize,
    rng: &mut R,
) -> Result<FidelityParts> {
    let layout = schedule.layout().clone();
    let input = PureState::embed_logical(layout, reference)?;
    let run = |events: &[PauliEvent]| -> Result<(f64, f64)> {
        let mut psi = input.clone();
        schedule.evolve_trajectory(&mut psi, alpha, events)?;
        let block = psi.ancilla_zero_block();
        Ok((block.inner(reference)?.norm_sqr(), block.norm_sqr()))
    };
    let clean = run(&[])?;
    let rates = schedule.flat_rates();
    let w0 = no_error_probability(&rates);
    let (mut me, mut pe) = (0.0, 0.0);
    if w0 < 1.0 && trajectories > 0 {
        for _ in 0..trajectories {
            let errors = sample_conditional_errors(rng, &rates).expect("some site has a positive rate");
            let events: Vec<PauliEvent> = errors.iter().map(|&(s, p)| schedule.event_from_flat(s, p)).collect();
            let (m, p) = run(&events)?;
            me += m;
            pe += p;
        }
        me /= trajectories as f64;
        pe /= trajectories as f64;
    }
    stratified(w0, clean, (me, pe))
}

/// Exact density-matrix fidelity for the layered device model.
pub fn device_density(schedule: &NoisySchedule, reference: &PureState, alpha: f64) -> Result<FidelityParts> {
    let input = PureState::embed_logical(schedule.layout().clone(), reference)?;
    let mut rho = input.to_density();
    schedule.evolve_density(&mut rho, alpha)?;
    fidelity_from_block(&rho.ancilla_zero_block(), reference)
}

fn entropy_value(kind: ValueKind, spectrum: &[f64], q: f64, weight: f64) -> Result<ObservableValue> {
    let value = renyi_from_spectrum(spectrum, q)?;
    let (numerator, denominator) = if q.is_finite() {
        let wq = weight.powf(q);
        (Some(wq * renyi_moment(spectrum, q)?), Some(wq))
    } else {
        (None, None)
    };
    Ok(ObservableValue { kind, q: Some(q), value, numerator, denominator })
}

/// Entropies of the normalized post-selected logical state. Numerators and
/// denominators carry the post-selection weight `p2^q`.
pub fn logical_values<S: QuantumState>(
    logical: &S,
    post_prob: f64,
    x1: Option<&[usize]>,
    request: &ObservableRequest,
) -> Result<Vec<ObservableValue>> {
    let mut out = Vec::new();
    for kind in request.entropies().filter(|k| k.is_logical()) {
        let spectrum = match kind {
            ValueKind::Entanglement => {
                let x1 = x1.ok_or_else(|| Error::InvalidLayout("entanglement needs a bipartition".into()))?;
                reduced_spectrum(logical, x1)?
            }
            ValueKind::Thermodynamic => {
                let all: Vec<usize> = (0..logical.layout().n_qubits()).collect();
                reduced_spectrum(logical, &all)?
            }
            _ => clip_spectrum(logical.probabilities())?,
        };
        for &q in &request.q {
            out.push(entropy_value(kind, &spectrum, q, post_prob)?);
        }
    }
    Ok(out)
}

/// Entropies of the full decoded state before post-selection.
pub fn codespace_values<S: QuantumState>(decoded: &S, request: &ObservableRequest) -> Result<Vec<ObservableValue>> {
    let mut out = Vec::new();
    for kind in request.entropies().filter(|k| !k.is_logical()) {
        let spectrum = match kind {
            ValueKind::EntanglementCodespace => {
                let logical: Vec<usize> = decoded.layout().logical_qubits().collect();
                reduced_spectrum(decoded, &logical)?
            }
            _ => clip_spectrum(decoded.probabilities())?,
        };
        for &q in &request.q {
            out.push(entropy_value(kind, &spectrum, q, 1.0)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::SystemLayout;
    use crate::rng::rng_from_seed;

    fn realization(n: usize, k: usize, seed: u64) -> EncodedRealization {
        let layout = SystemLayout::new(n, k).unwrap().with_leading_x1(1).unwrap();
        let circuit = BrickwallCircuit::build(&layout, 2 * n, seed).unwrap();
        let reference = PureState::zero(SystemLayout::bare(k).unwrap());
        EncodedRealization::new(circuit, reference).unwrap()
    }

    fn request() -> ObservableRequest {
        ObservableRequest { kinds: ValueKind::ALL.to_vec(), q: vec![2.0, 3.0] }
    }

    #[test]
    fn pure_and_density_routes_agree_for_coherent_noise() {
        let r = realization(6, 2, 5);
        let noise = NoiseLayer::Coherent(vec![0.9; 6]);
        let a = r.decode(&noise, Representation::Pure, &request()).unwrap();
        let b = r.decode(&noise, Representation::Density, &request()).unwrap();
        assert!((a.parts.fidelity - b.parts.fidelity).abs() < 1e-12);
        assert!((a.parts.p2 - b.parts.p2).abs() < 1e-12);
        assert_eq!(a.values.len(), b.values.len());
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_eq!(x.kind, y.kind);
            assert!((x.value - y.value).abs() < 1e-9, "{:?} {} {}", x.kind, x.value, y.value);
        }
    }

    #[test]
    fn projected_block_matches_full_decoding() {
        let r = realization(6, 3, 9);
        let noise = NoiseLayer::Depolarizing(vec![0.1, 0.5, 0.3, 0.0, 0.9, 0.2]);
        let fast = r.decode(&noise, Representation::Density, &ObservableRequest::fidelity_only()).unwrap();
        let slow = r.decode(&noise, Representation::Density, &request()).unwrap();
        assert!((fast.parts.m2 - slow.parts.m2).abs() < 1e-13);
        assert!((fast.parts.p2 - slow.parts.p2).abs() < 1e-13);
    }

    #[test]
    fn noiseless_decoding_recovers_the_input() {
        let r = realization(8, 4, 1);
        let d = r.decode(&NoiseLayer::Coherent(vec![0.0; 8]), Representation::Pure, &request()).unwrap();
        assert!((d.parts.fidelity - 1.0).abs() < 1e-12);
        for v in d.values.iter().filter(|v| v.kind.is_logical()) {
            assert!(v.value.abs() < 1e-9);
        }
    }

    #[test]
    fn trajectory_estimate_converges_to_density() {
        let r = realization(4, 2, 3);
        let rates = vec![0.4; 4];
        let exact = r
            .decode(&NoiseLayer::Depolarizing(rates.clone()), Representation::Density, &ObservableRequest::default())
            .unwrap()
            .parts;
        let est = r.depolarizing_trajectories(&rates, 20000, &mut rng_from_seed(11)).unwrap();
        assert!((est.m2 - exact.m2).abs() < 0.01, "{} {}", est.m2, exact.m2);
        assert!((est.p2 - exact.p2).abs() < 0.01, "{} {}", est.p2, exact.p2);
    }

    #[test]
    fn device_routes_agree_without_noise() {
        let layout = SystemLayout::new(4, 2).unwrap();
        let circuit = BrickwallCircuit::build(&layout, 4, 2).unwrap();
        let schedule = NoisySchedule::sample(circuit, 0.0, &mut rng_from_seed(1)).unwrap();
        let reference = PureState::zero(SystemLayout::bare(2).unwrap());
        let a = device_density(&schedule, &reference, 0.7).unwrap();
        let b = device_trajectories(&schedule, &reference, 0.7, 4, &mut rng_from_seed(2)).unwrap();
        assert!((a.fidelity - b.fidelity).abs() < 1e-12);
    }
}
