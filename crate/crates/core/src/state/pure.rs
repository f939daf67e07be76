use num_complex::Complex64 as C64;

use super::kernel::{apply_one, apply_two, scatter_bits};
use super::{check_pair, split_subsystem, MixedState, QuantumState, DEGENERATE_POST_SELECTION};
use crate::circuit::TwoQubitGate;
use crate::error::{Error, Result};
use crate::layout::SystemLayout;

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
    layout: SystemLayout,
}

impl PureState {
    /// `|0...0>`.
    pub fn zero(layout: SystemLayout) -> Self {
        Self::basis(layout, 0).expect("index 0 always exists")
    }

    pub fn basis(layout: SystemLayout, index: usize) -> Result<Self> {
        let dim = layout.dim();
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps, layout })
    }

    /// Wrap amplitudes as given, without normalizing.
    pub fn from_amplitudes(layout: SystemLayout, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::DimensionMismatch { expected: layout.dim(), found: amps.len() });
        }
        Ok(Self { amps, layout })
    }

    /// `|psi_X> (x) |0_ancilla>` for a logical state over `2^k` amplitudes.
    pub fn embed_logical(layout: SystemLayout, logical: &PureState) -> Result<Self> {
        let kdim = layout.logical_dim();
        if logical.amps.len() != kdim {
            return Err(Error::DimensionMismatch { expected: kdim, found: logical.amps.len() });
        }
        let mut amps = vec![C64::new(0.0, 0.0); layout.dim()];
        amps[..kdim].copy_from_slice(&logical.amps);
        Ok(Self { amps, layout })
    }

    /// GHZ state `(|0...0> + |1...1>)/sqrt(2)` on a bare register.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let layout = SystemLayout::bare(n_qubits)?;
        let mut s = Self::zero(layout);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        s.amps[0] = C64::new(h, 0.0);
        let last = s.amps.len() - 1;
        s.amps[last] = C64::new(h, 0.0);
        Ok(s)
    }

    /// Tensor product of single-qubit states; `qubits[i]` is qubit `i`.
    pub fn product(qubits: &[[C64; 2]]) -> Result<Self> {
        let layout = SystemLayout::bare(qubits.len())?;
        let amps = (0..layout.dim())
            .map(|m| {
                qubits
                    .iter()
                    .enumerate()
                    .fold(C64::new(1.0, 0.0), |acc, (i, q)| acc * q[(m >> i) & 1])
            })
            .collect();
        Ok(Self { amps, layout })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn with_layout(mut self, layout: SystemLayout) -> Result<Self> {
        if layout.dim() != self.amps.len() {
            return Err(Error::DimensionMismatch { expected: layout.dim(), found: self.amps.len() });
        }
        self.layout = layout;
        Ok(self)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let n = self.norm_sqr();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / n.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= s);
        Ok(n)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), found: other.amps.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn apply_single_qubit(&mut self, m: &[[C64; 2]; 2], q: usize) -> Result<()> {
        self.layout.check_qubit(q)?;
        apply_one(&mut self.amps, m, q);
        Ok(())
    }

    /// Squared norm of the ancilla-zero block (the unnormalized post-selection probability).
    pub fn ancilla_zero_weight(&self) -> f64 {
        self.amps[..self.layout.logical_dim()].iter().map(|a| a.norm_sqr()).sum()
    }

    /// Unnormalized ancilla-zero block as a logical state.
    pub fn ancilla_zero_block(&self) -> PureState {
        let k = self.layout.n_logical();
        PureState {
            amps: self.amps[..1 << k].to_vec(),
            layout: SystemLayout::bare(k).expect("logical size is valid"),
        }
    }

    pub fn to_density(&self) -> MixedState {
        let d = self.amps.len();
        let mut data = Vec::with_capacity(d * d);
        for r in &self.amps {
            for c in &self.amps {
                data.push(r * c.conj());
            }
        }
        MixedState::from_raw(self.layout.clone(), data)
    }
}

impl QuantumState for PureState {
    fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    fn apply_gate(&mut self, gate: &TwoQubitGate, i: usize, j: usize) -> Result<()> {
        check_pair(&self.layout, i, j)?;
        self.apply_gate_unchecked(gate, i, j);
        Ok(())
    }

    fn apply_gate_unchecked(&mut self, gate: &TwoQubitGate, i: usize, j: usize) {
        apply_two(&mut self.amps, gate.matrix(), i, j);
    }

    fn reduced_density_matrix(&self, keep: &[usize]) -> Result<MixedState> {
        let (keep, env) = split_subsystem(&self.layout, keep)?;
        let (dk, de) = (1usize << keep.len(), 1usize << env.len());
        let env_idx: Vec<usize> = (0..de).map(|e| scatter_bits(e, &env)).collect();
        // rows of M are kept configurations, columns environment ones
        let mut m = Vec::with_capacity(dk * de);
        for a in 0..dk {
            let base = scatter_bits(a, &keep);
            m.extend(env_idx.iter().map(|&e| self.amps[base | e]));
        }
        let mut data = vec![C64::new(0.0, 0.0); dk * dk];
        for a in 0..dk {
            let ra = &m[a * de..(a + 1) * de];
            for b in a..dk {
                let rb = &m[b * de..(b + 1) * de];
                let v: C64 = ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum();
                data[a * dk + b] = v;
                data[b * dk + a] = v.conj();
            }
        }
        Ok(MixedState::from_raw(SystemLayout::bare(keep.len())?, data))
    }

    fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn project_ancillas(&self) -> Result<(Self, f64)> {
        let mut block = self.ancilla_zero_block();
        let p = block.norm_sqr();
        if p < DEGENERATE_POST_SELECTION {
            return Err(Error::DegeneratePostSelection(p));
        }
        block.normalize()?;
        Ok((block, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn product_state_ordering() {
        // qubit 0 in |1>, qubit 1 in |0>: basis index 1
        let one = [c(0.0, 0.0), c(1.0, 0.0)];
        let zero = [c(1.0, 0.0), c(0.0, 0.0)];
        let s = PureState::product(&[one, zero]).unwrap();
        assert_eq!(s.probabilities(), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn projection_keeps_leading_block() {
        let l = SystemLayout::new(3, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(0.5, 0.0);
        amps[1] = c(0.5, 0.0);
        amps[6] = c(h, 0.0);
        let s = PureState::from_amplitudes(l, amps).unwrap();
        let (x, p) = s.project_ancillas().unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!((x.amplitudes()[0].re - h).abs() < 1e-15);
        assert_eq!(x.layout().n_qubits(), 1);
    }

    #[test]
    fn degenerate_projection_is_an_error() {
        let l = SystemLayout::new(2, 1).unwrap();
        let s = PureState::basis(l, 2).unwrap();
        assert!(matches!(s.project_ancillas(), Err(Error::DegeneratePostSelection(_))));
    }

    #[test]
    fn ghz_half_is_maximally_mixed_bit() {
        let g = PureState::ghz(4).unwrap();
        let r = g.reduced_density_matrix(&[0, 1]).unwrap();
        let d = r.diagonal();
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[3] - 0.5).abs() < 1e-15);
        assert!((r.purity() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn embed_then_project_round_trips() {
        let logical = PureState::product(&[[c(0.6, 0.0), c(0.0, 0.8)]]).unwrap();
        let l = SystemLayout::new(3, 1).unwrap();
        let full = PureState::embed_logical(l, &logical).unwrap();
        let (back, p) = full.project_ancillas().unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert_eq!(back.amplitudes(), logical.amplitudes());
    }
}
