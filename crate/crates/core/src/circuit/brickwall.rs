use serde::{Deserialize, Serialize};

use super::gate::{sample_haar_gate, TwoQubitGate};
use crate::error::{Error, Result};
use crate::layout::SystemLayout;
use crate::rng::rng_from_seed;
use crate::state::QuantumState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    /// Pairs `(0,1), (2,3), ...`
    Even,
    /// Pairs `(1,2), (3,4), ..., (N-1,0)` with periodic wrap.
    Odd,
}

impl Parity {
    pub fn of_layer(t: usize) -> Self {
        if t % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Layers in order, gates as sampled (the encoder).
    Forward,
    /// Layers reversed, gates adjointed (the decoder).
    Inverse,
}

pub fn layer_pairs(n_qubits: usize, parity: Parity) -> Vec<(usize, usize)> {
    let half = n_qubits / 2;
    match parity {
        Parity::Even => (0..half).map(|i| (2 * i, 2 * i + 1)).collect(),
        Parity::Odd => (0..half).map(|i| (2 * i + 1, (2 * i + 2) % n_qubits)).collect(),
    }
}

/// Depth used unless configured otherwise: twice the register size.
pub fn default_depth(n_qubits: usize) -> usize {
    2 * n_qubits
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub parity: Parity,
    pub gates: Vec<TwoQubitGate>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrickwallCircuit {
    layout: SystemLayout,
    layers: Vec<Layer>,
    pairs: [Vec<(usize, usize)>; 2],
    seed: Option<u64>,
}

impl BrickwallCircuit {
    /// Sample `depth` layers of Haar gates, first layer even-aligned. Gates
    /// are drawn layer by layer, left to right, from one stream seeded by `seed`.
    pub fn build(layout: &SystemLayout, depth: usize, seed: u64) -> Result<Self> {
        check_register(layout)?;
        let mut rng = rng_from_seed(seed);
        let per_layer = layout.n_qubits() / 2;
        let layers = (0..depth)
            .map(|t| Layer {
                parity: Parity::of_layer(t),
                gates: (0..per_layer).map(|_| sample_haar_gate(&mut rng)).collect(),
            })
            .collect();
        let mut c = Self::assemble(layout, layers);
        c.seed = Some(seed);
        Ok(c)
    }

    /// Circuit from explicit layers; layer `t` must have parity of `t`.
    pub fn from_layers(layout: &SystemLayout, layers: Vec<Layer>) -> Result<Self> {
        check_register(layout)?;
        let per_layer = layout.n_qubits() / 2;
        for (t, layer) in layers.iter().enumerate() {
            if layer.parity != Parity::of_layer(t) {
                return Err(Error::InvalidLayout(format!("layer {t} has the wrong parity")));
            }
            if layer.gates.len() != per_layer {
                return Err(Error::DimensionMismatch { expected: per_layer, found: layer.gates.len() });
            }
            for g in &layer.gates {
                let dev = g.unitarity_deviation();
                if dev > super::gate::UNITARITY_TOLERANCE {
                    return Err(Error::NonUnitary(dev));
                }
            }
        }
        Ok(Self::assemble(layout, layers))
    }

    fn assemble(layout: &SystemLayout, layers: Vec<Layer>) -> Self {
        let n = layout.n_qubits();
        Self {
            layout: layout.clone(),
            layers,
            pairs: [layer_pairs(n, Parity::Even), layer_pairs(n, Parity::Odd)],
            seed: None,
        }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.gates.len()).sum()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn pairs(&self, t: usize) -> &[(usize, usize)] {
        match self.layers[t].parity {
            Parity::Even => &self.pairs[0],
            Parity::Odd => &self.pairs[1],
        }
    }

    /// Apply layer `t` (or its adjoint).
    pub fn apply_layer<S: QuantumState>(&self, state: &mut S, t: usize, dir: Direction) {
        let layer = &self.layers[t];
        for (g, &(i, j)) in layer.gates.iter().zip(self.pairs(t)) {
            match dir {
                Direction::Forward => state.apply_gate_unchecked(g, i, j),
                Direction::Inverse => state.apply_gate_unchecked(&g.adjoint(), i, j),
            }
        }
    }

    pub fn apply<S: QuantumState>(&self, state: &mut S, dir: Direction) -> Result<()> {
        self.layout.check_register(state.layout())?;
        match dir {
            Direction::Forward => (0..self.depth()).for_each(|t| self.apply_layer(state, t, dir)),
            Direction::Inverse => (0..self.depth()).rev().for_each(|t| self.apply_layer(state, t, dir)),
        }
        Ok(())
    }
}

fn check_register(layout: &SystemLayout) -> Result<()> {
    let n = layout.n_qubits();
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidLayout(format!("brick-wall circuits need an even register, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PureState;

    #[test]
    fn pairs_wrap_periodically() {
        assert_eq!(layer_pairs(6, Parity::Even), vec![(0, 1), (2, 3), (4, 5)]);
        assert_eq!(layer_pairs(6, Parity::Odd), vec![(1, 2), (3, 4), (5, 0)]);
        assert_eq!(layer_pairs(2, Parity::Odd), vec![(1, 0)]);
    }

    #[test]
    fn gate_count_and_reproducibility() {
        let l = SystemLayout::new(8, 4).unwrap();
        let a = BrickwallCircuit::build(&l, default_depth(8), 42).unwrap();
        let b = BrickwallCircuit::build(&l, default_depth(8), 42).unwrap();
        assert_eq!(a.gate_count(), 16 * 4);
        assert_eq!(a, b);
        assert_ne!(a, BrickwallCircuit::build(&l, 16, 43).unwrap());
    }

    #[test]
    fn odd_register_rejected() {
        let l = SystemLayout::new(5, 2).unwrap();
        assert!(BrickwallCircuit::build(&l, 4, 1).is_err());
    }

    #[test]
    fn decoder_undoes_encoder() {
        let l = SystemLayout::new(10, 5).unwrap();
        let c = BrickwallCircuit::build(&l, 20, 9).unwrap();
        let mut s = PureState::basis(l.clone(), 13).unwrap();
        c.apply(&mut s, Direction::Forward).unwrap();
        c.apply(&mut s, Direction::Inverse).unwrap();
        let back = PureState::basis(l, 13).unwrap();
        assert!((s.inner(&back).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn layout_mismatch_detected() {
        let c = BrickwallCircuit::build(&SystemLayout::new(4, 2).unwrap(), 2, 1).unwrap();
        let mut s = PureState::zero(SystemLayout::new(6, 3).unwrap());
        assert_eq!(c.apply(&mut s, Direction::Forward), Err(Error::LayoutMismatch));
    }
}
