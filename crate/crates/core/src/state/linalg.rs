use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::C64;

/// Eigenvalues below zero but above this are treated as rounding and clipped.
pub const NEGATIVE_EIGENVALUE_TOLERANCE: f64 = 1e-9;

/// Eigenvalues of a Hermitian matrix stored row-major.
pub fn hermitian_eigenvalues(dim: usize, data: &[C64]) -> Result<Vec<f64>> {
    if data.len() != dim * dim {
        return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
    }
    if dim == 1 {
        return Ok(vec![data[0].re]);
    }
    let m = DMatrix::from_row_slice(dim, dim, data);
    Ok(SymmetricEigen::new(m).eigenvalues.iter().copied().collect())
}

/// Clip tiny negative eigenvalues to zero; reject genuinely negative ones.
pub fn clip_spectrum(mut eigs: Vec<f64>) -> Result<Vec<f64>> {
    for e in eigs.iter_mut() {
        if *e < -NEGATIVE_EIGENVALUE_TOLERANCE {
            return Err(Error::NegativeEigenvalue(*e));
        }
        if *e < 0.0 {
            *e = 0.0;
        }
    }
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_pauli_y() {
        let y = [C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)];
        let mut e = hermitian_eigenvalues(2, &y).unwrap();
        e.sort_by(f64::total_cmp);
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn clipping_threshold() {
        assert_eq!(clip_spectrum(vec![-1e-12, 0.5]).unwrap(), vec![0.0, 0.5]);
        assert!(clip_spectrum(vec![-1e-6, 0.5]).is_err());
    }
}
