//! Simulation and replica theory for encoding-decoding random circuits.
//!
//! A logical register of `k` qubits is embedded into `N` qubits (the rest
//! start in `|0>`), scrambled by a random brick-wall circuit, hit by a layer
//! of noise, and decoded by the adjoint circuit. Ancilla post-selection then
//! yields a logical output state whose fidelity and entropies are measured.
//!
//! Conventions used throughout:
//! - qubit `i` is bit `i` of a basis index (qubit 0 is least significant);
//! - the logical register is qubits `0..k`, so the ancilla-zero block of a
//!   state vector is its first `2^k` amplitudes;
//! - all entropies use log base 2.

pub mod circuit;
pub mod decoding;
pub mod error;
pub mod layout;
pub mod noise;
pub mod observables;
pub mod rng;
pub mod state;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use layout::SystemLayout;

pub type C64 = num_complex::Complex64;
