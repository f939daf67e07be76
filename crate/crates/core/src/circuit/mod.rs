//! Random brick-wall circuits and the layered noisy-device schedule.

mod brickwall;
mod gate;
mod noisy;

pub use brickwall::{default_depth, layer_pairs, BrickwallCircuit, Direction, Layer, Parity};
pub use gate::{sample_haar_gate, TwoQubitGate};
pub use noisy::{NoisySchedule, PauliEvent, MASK_PROBABILITY};
