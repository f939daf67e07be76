use rand::Rng;

use super::brickwall::{BrickwallCircuit, Direction};
use crate::error::{Error, Result};
use crate::layout::SystemLayout;
use crate::noise::{
    apply_coherent_layer, apply_coherent_layer_mixed, apply_depolarizing_layer, apply_pauli, Pauli,
};
use crate::state::{MixedState, PureState};

/// Probability that a site of a noise layer carries depolarizing noise.
pub const MASK_PROBABILITY: f64 = 0.25;

/// A Pauli inserted after noise layer `layer` on `qubit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PauliEvent {
    pub layer: usize,
    pub qubit: usize,
    pub pauli: Pauli,
}

/// Layered device model: every brick-wall layer of the encoder and of the
/// decoder is followed by depolarizing noise of strength `epsilon` on a
/// random subset of qubits, and a coherent layer sits between the halves.
/// Noise layers are numbered `0..2T`: encoder layers first, then decoder
/// layers in the order they are applied.
#[derive(Clone, Debug, PartialEq)]
pub struct NoisySchedule {
    circuit: BrickwallCircuit,
    epsilon: f64,
    masks: Vec<Vec<bool>>,
}

impl NoisySchedule {
    /// Sample masks for `circuit`: each site of each noise layer is noisy
    /// with probability [`MASK_PROBABILITY`], independently.
    pub fn sample<R: Rng + ?Sized>(circuit: BrickwallCircuit, epsilon: f64, rng: &mut R) -> Result<Self> {
        let n = circuit.layout().n_qubits();
        let masks = (0..2 * circuit.depth())
            .map(|_| (0..n).map(|_| rng.random::<f64>() < MASK_PROBABILITY).collect())
            .collect();
        Self::from_parts(circuit, epsilon, masks)
    }

    pub fn from_parts(circuit: BrickwallCircuit, epsilon: f64, masks: Vec<Vec<bool>>) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::OutOfDomain { name: "epsilon", value: epsilon, domain: "[0, 1]" });
        }
        let n = circuit.layout().n_qubits();
        if masks.len() != 2 * circuit.depth() {
            return Err(Error::DimensionMismatch { expected: 2 * circuit.depth(), found: masks.len() });
        }
        if let Some(m) = masks.iter().find(|m| m.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: m.len() });
        }
        Ok(Self { circuit, epsilon, masks })
    }

    pub fn circuit(&self) -> &BrickwallCircuit {
        &self.circuit
    }

    pub fn layout(&self) -> &SystemLayout {
        self.circuit.layout()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn masks(&self) -> &[Vec<bool>] {
        &self.masks
    }

    pub fn noise_layers(&self) -> usize {
        self.masks.len()
    }

    /// Depolarizing probability at each qubit of noise layer `layer`.
    pub fn layer_rates(&self, layer: usize) -> Vec<f64> {
        self.masks[layer].iter().map(|&m| if m { self.epsilon } else { 0.0 }).collect()
    }

    /// All site rates flattened layer-major, for trajectory sampling.
    pub fn flat_rates(&self) -> Vec<f64> {
        (0..self.noise_layers()).flat_map(|l| self.layer_rates(l)).collect()
    }

    pub fn event_from_flat(&self, site: usize, pauli: Pauli) -> PauliEvent {
        let n = self.layout().n_qubits();
        PauliEvent { layer: site / n, qubit: site % n, pauli }
    }

    /// Brick-wall layer index and direction applied before noise layer `l`.
    fn gate_layer(&self, l: usize) -> (usize, Direction) {
        let t = self.circuit.depth();
        if l < t {
            (l, Direction::Forward)
        } else {
            (2 * t - 1 - l, Direction::Inverse)
        }
    }

    /// Exact evolution of a density matrix through encoder, coherent layer and decoder.
    pub fn evolve_density(&self, rho: &mut MixedState, alpha: f64) -> Result<()> {
        self.layout().check_register(crate::state::QuantumState::layout(rho))?;
        let n = self.layout().n_qubits();
        for l in 0..self.noise_layers() {
            if l == self.circuit.depth() {
                apply_coherent_layer_mixed(rho, &vec![alpha; n])?;
            }
            let (t, dir) = self.gate_layer(l);
            self.circuit.apply_layer(rho, t, dir);
            apply_depolarizing_layer(rho, &self.layer_rates(l))?;
        }
        Ok(())
    }

    /// One trajectory: noiseless evolution with the given Paulis inserted.
    /// `events` must be sorted by layer.
    pub fn evolve_trajectory(&self, psi: &mut PureState, alpha: f64, events: &[PauliEvent]) -> Result<()> {
        self.layout().check_register(crate::state::QuantumState::layout(psi))?;
        let n = self.layout().n_qubits();
        let mut next = 0;
        for l in 0..self.noise_layers() {
            if l == self.circuit.depth() {
                apply_coherent_layer(psi, &vec![alpha; n])?;
            }
            let (t, dir) = self.gate_layer(l);
            self.circuit.apply_layer(psi, t, dir);
            while next < events.len() && events[next].layer == l {
                apply_pauli(psi, events[next].qubit, events[next].pauli)?;
                next += 1;
            }
        }
        if next != events.len() {
            return Err(Error::InvalidLayout("Pauli events out of layer order".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::state::QuantumState;

    #[test]
    fn zero_noise_inverts_at_zero_angle() {
        let l = SystemLayout::new(4, 2).unwrap();
        let c = BrickwallCircuit::build(&l, 4, 3).unwrap();
        let s = NoisySchedule::sample(c, 0.0, &mut rng_from_seed(2)).unwrap();
        let mut psi = PureState::basis(l.clone(), 2).unwrap();
        s.evolve_trajectory(&mut psi, 0.0, &[]).unwrap();
        assert!((psi.amplitudes()[2].norm_sqr() - 1.0).abs() < 1e-12);
        let mut rho = MixedState::from_pure(&PureState::basis(l, 2).unwrap());
        s.evolve_density(&mut rho, 0.0).unwrap();
        assert!((rho.element(2, 2).re - 1.0).abs() < 1e-12);
        assert_eq!(rho.layout().n_qubits(), 4);
    }

    #[test]
    fn masks_have_schedule_shape() {
        let l = SystemLayout::new(6, 3).unwrap();
        let c = BrickwallCircuit::build(&l, 6, 3).unwrap();
        let s = NoisySchedule::sample(c, 0.01, &mut rng_from_seed(2)).unwrap();
        assert_eq!(s.noise_layers(), 12);
        assert_eq!(s.flat_rates().len(), 72);
        let e = s.event_from_flat(13, Pauli::X);
        assert_eq!((e.layer, e.qubit), (2, 1));
    }
}
