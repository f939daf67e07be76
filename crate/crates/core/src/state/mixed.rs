use num_complex::Complex64 as C64;

use super::kernel::{apply_two, for_each_quad, scatter_bits};
use super::linalg::hermitian_eigenvalues;
use super::{check_pair, split_subsystem, PureState, QuantumState, DEGENERATE_POST_SELECTION};
use crate::circuit::TwoQubitGate;
use crate::error::{Error, Result};
use crate::layout::SystemLayout;

/// Tolerance for Hermiticity and unit trace when wrapping a user matrix.
const VALIDATION_TOLERANCE: f64 = 1e-10;

/// Dense density matrix stored row-major. Element `(r, c)` sits at index
/// `(r << n) | c`, so column qubit `q` is bit `q` and row qubit `q` is bit
/// `q + n` of the flat index.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    data: Vec<C64>,
    layout: SystemLayout,
}

impl MixedState {
    pub(crate) fn from_raw(layout: SystemLayout, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), layout.dim() * layout.dim());
        Self { data, layout }
    }

    /// Wrap a row-major matrix after checking it is Hermitian with unit trace.
    pub fn new(layout: SystemLayout, data: Vec<C64>) -> Result<Self> {
        let d = layout.dim();
        if data.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: data.len() });
        }
        let s = Self { data, layout };
        let h = s.hermiticity_deviation();
        if h > VALIDATION_TOLERANCE {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {h:.3e})")));
        }
        let t = s.trace();
        if (t - 1.0).abs() > VALIDATION_TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {t} is not 1")));
        }
        Ok(s)
    }

    pub fn from_pure(state: &PureState) -> Self {
        state.to_density()
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let d = layout.dim();
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            data[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Self { data, layout }
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn element(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim() + c]
    }

    pub fn trace(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i].re).collect()
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_rc|^2 for Hermitian rho
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                dev = dev.max((self.data[r * d + c] - self.data[c * d + r].conj()).norm());
            }
        }
        dev
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(self.dim(), &self.data)
    }

    /// `<psi|rho|psi>`.
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        let d = self.dim();
        let a = psi.amplitudes();
        if a.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: a.len() });
        }
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..d {
            let row = &self.data[r * d..(r + 1) * d];
            let v: C64 = row.iter().zip(a).map(|(x, y)| x * y).sum();
            acc += a[r].conj() * v;
        }
        Ok(acc.re)
    }

    /// Single-site depolarizing channel `rho -> (1-l) rho + l (I/2 (x) tr_q rho)`.
    pub fn depolarize_qubit(&mut self, q: usize, lambda: f64) -> Result<()> {
        self.layout.check_qubit(q)?;
        let n = self.layout.n_qubits();
        let keep = 1.0 - lambda;
        let mix = 0.5 * lambda;
        for_each_quad(self.data.len(), q + n, q, |[i00, i01, i10, i11]| {
            let (a, b) = (self.data[i00], self.data[i11]);
            let avg = (a + b) * mix;
            self.data[i00] = a * keep + avg;
            self.data[i11] = b * keep + avg;
            self.data[i01] *= keep;
            self.data[i10] *= keep;
        });
        Ok(())
    }

    /// Multiply by the diagonal unitary `diag(phases)` on both sides.
    pub fn apply_diagonal(&mut self, phases: &[C64]) -> Result<()> {
        let d = self.dim();
        if phases.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: phases.len() });
        }
        for r in 0..d {
            for c in 0..d {
                self.data[r * d + c] *= phases[r] * phases[c].conj();
            }
        }
        Ok(())
    }

    /// Unnormalized ancilla-zero block.
    pub fn ancilla_zero_block(&self) -> MixedState {
        let (d, k) = (self.dim(), self.layout.n_logical());
        let kd = 1usize << k;
        let mut data = Vec::with_capacity(kd * kd);
        for r in 0..kd {
            data.extend_from_slice(&self.data[r * d..r * d + kd]);
        }
        MixedState { data, layout: SystemLayout::bare(k).expect("logical size is valid") }
    }

    pub(crate) fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|z| *z *= s);
    }
}

impl QuantumState for MixedState {
    fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    fn apply_gate(&mut self, gate: &TwoQubitGate, i: usize, j: usize) -> Result<()> {
        check_pair(&self.layout, i, j)?;
        self.apply_gate_unchecked(gate, i, j);
        Ok(())
    }

    fn apply_gate_unchecked(&mut self, gate: &TwoQubitGate, i: usize, j: usize) {
        let n = self.layout.n_qubits();
        apply_two(&mut self.data, gate.matrix(), i + n, j + n);
        let conj = gate.conj();
        apply_two(&mut self.data, conj.matrix(), i, j);
    }

    fn reduced_density_matrix(&self, keep: &[usize]) -> Result<MixedState> {
        let (keep, env) = split_subsystem(&self.layout, keep)?;
        let (dk, de, d) = (1usize << keep.len(), 1usize << env.len(), self.dim());
        let kidx: Vec<usize> = (0..dk).map(|a| scatter_bits(a, &keep)).collect();
        let eidx: Vec<usize> = (0..de).map(|e| scatter_bits(e, &env)).collect();
        let mut data = vec![C64::new(0.0, 0.0); dk * dk];
        for (a, &ka) in kidx.iter().enumerate() {
            for (b, &kb) in kidx.iter().enumerate() {
                data[a * dk + b] = eidx.iter().map(|&e| self.data[(ka | e) * d + (kb | e)]).sum();
            }
        }
        Ok(MixedState { data, layout: SystemLayout::bare(keep.len())? })
    }

    fn probabilities(&self) -> Vec<f64> {
        self.diagonal()
    }

    fn project_ancillas(&self) -> Result<(Self, f64)> {
        let mut block = self.ancilla_zero_block();
        let p = block.trace();
        if p < DEGENERATE_POST_SELECTION {
            return Err(Error::DegeneratePostSelection(p));
        }
        block.scale(1.0 / p);
        Ok((block, p))
    }
}
