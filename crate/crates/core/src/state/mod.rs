//! Dense pure states and density matrices.

pub(crate) mod kernel;
pub mod linalg;
mod mixed;
mod pure;

pub use mixed::MixedState;
pub use pure::PureState;

use crate::circuit::TwoQubitGate;
use crate::error::Result;
use crate::layout::SystemLayout;

/// Post-selection probabilities below this are treated as degenerate.
pub const DEGENERATE_POST_SELECTION: f64 = 1e-12;

/// Operations common to both state representations.
pub trait QuantumState {
    fn layout(&self) -> &SystemLayout;

    /// Apply `gate` to qubits `(i, j)`; the gate's first tensor factor acts on `i`.
    fn apply_gate(&mut self, gate: &TwoQubitGate, i: usize, j: usize) -> Result<()>;

    /// Same as [`QuantumState::apply_gate`] without validating the qubits.
    fn apply_gate_unchecked(&mut self, gate: &TwoQubitGate, i: usize, j: usize);

    /// Reduced density matrix on `keep`; kept qubit `keep_sorted[t]` becomes bit `t`.
    fn reduced_density_matrix(&self, keep: &[usize]) -> Result<MixedState>;

    /// Computational-basis probabilities.
    fn probabilities(&self) -> Vec<f64>;

    /// Normalized ancilla-zero block and its probability.
    fn project_ancillas(&self) -> Result<(Self, f64)>
    where
        Self: Sized;
}

fn check_pair(layout: &SystemLayout, i: usize, j: usize) -> Result<()> {
    layout.check_qubit(i)?;
    layout.check_qubit(j)?;
    if i == j {
        return Err(crate::Error::RepeatedQubit(i));
    }
    Ok(())
}

/// Sorted, deduplicated, range-checked subsystem and its complement.
fn split_subsystem(layout: &SystemLayout, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut k = keep.to_vec();
    k.sort_unstable();
    k.dedup();
    if k.is_empty() {
        return Err(crate::Error::EmptySubsystem);
    }
    for &q in &k {
        layout.check_qubit(q)?;
    }
    let env = (0..layout.n_qubits()).filter(|q| !k.contains(q)).collect();
    Ok((k, env))
}
