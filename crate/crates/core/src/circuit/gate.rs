use nalgebra::Matrix4;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance on `max |U^dag U - I|` for a gate to count as unitary.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// A 4x4 unitary on an ordered qubit pair `(i, j)`. Local basis index is
/// `2*b_i + b_j`, so `A (x) B` acts with `A` on `i` and `B` on `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitGate([[C64; 4]; 4]);

impl TwoQubitGate {
    pub fn new(m: [[C64; 4]; 4]) -> Result<Self> {
        let g = Self(m);
        let dev = g.unitarity_deviation();
        if dev > UNITARITY_TOLERANCE {
            return Err(Error::NonUnitary(dev));
        }
        Ok(g)
    }

    pub fn identity() -> Self {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        (0..4).for_each(|i| m[i][i] = C64::new(1.0, 0.0));
        Self(m)
    }

    pub fn kron(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> Result<Self> {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r >> 1][c >> 1] * b[r & 1][c & 1];
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &[[C64; 4]; 4] {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.0[c][r].conj();
            }
        }
        Self(m)
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|row| row.map(|z| z.conj())))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|t| self.0[r][t] * other.0[t][c]).sum();
            }
        }
        Self(m)
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let mut dev: f64 = 0.0;
        for (r, row) in p.0.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let target = if r == c { 1.0 } else { 0.0 };
                dev = dev.max((v - target).norm());
            }
        }
        dev
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }
}

/// Haar-random element of U(4): QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn sample_haar_gate<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitGate {
    let z = Matrix4::<C64>::from_fn(|_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..4 {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..4 {
            q[(i, j)] *= phase;
        }
    }
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = q[(r, c)];
        }
    }
    TwoQubitGate(m)
}
