use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Qubit bookkeeping for a register of `n_qubits` whose first `n_logical`
/// qubits carry the logical state. An optional bipartition splits the
/// logical register into `X1` (listed) and `X2` (the remainder).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemLayout {
    n_qubits: usize,
    n_logical: usize,
    x1: Option<Vec<usize>>,
}

/// Largest register we allow a dense state for.
pub const MAX_QUBITS: usize = 24;

impl SystemLayout {
    pub fn new(n_qubits: usize, n_logical: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidLayout(format!(
                "register size {n_qubits} must be in 1..={MAX_QUBITS}"
            )));
        }
        if n_logical == 0 || n_logical > n_qubits {
            return Err(Error::InvalidLayout(format!(
                "logical size {n_logical} must be in 1..={n_qubits}"
            )));
        }
        Ok(Self { n_qubits, n_logical, x1: None })
    }

    /// Layout with `k = round(rate * n)` logical qubits.
    pub fn with_rate(n_qubits: usize, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidLayout(format!("code rate {rate} must be in (0, 1]")));
        }
        Self::new(n_qubits, (rate * n_qubits as f64).round() as usize)
    }

    /// A register with no ancillas, used for states living on the logical
    /// space alone or on an arbitrary subsystem.
    pub fn bare(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, n_qubits)
    }

    /// Attach the bipartition `X1 | X2` of the logical register. `X1` must
    /// be nonempty and no larger than `X2`.
    pub fn with_bipartition(mut self, x1: Vec<usize>) -> Result<Self> {
        let mut sorted = x1;
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::EmptySubsystem);
        }
        if let Some(&q) = sorted.iter().find(|&&q| q >= self.n_logical) {
            return Err(Error::InvalidLayout(format!("qubit {q} of X1 is not logical")));
        }
        if 2 * sorted.len() > self.n_logical {
            return Err(Error::InvalidLayout(format!(
                "|X1| = {} exceeds |X2| = {}",
                sorted.len(),
                self.n_logical - sorted.len()
            )));
        }
        self.x1 = Some(sorted);
        Ok(self)
    }

    /// Bipartition with `X1` the first `size` logical qubits.
    pub fn with_leading_x1(self, size: usize) -> Result<Self> {
        self.with_bipartition((0..size).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn n_ancilla(&self) -> usize {
        self.n_qubits - self.n_logical
    }

    pub fn rate(&self) -> f64 {
        self.n_logical as f64 / self.n_qubits as f64
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn logical_dim(&self) -> usize {
        1 << self.n_logical
    }

    pub fn logical_qubits(&self) -> std::ops::Range<usize> {
        0..self.n_logical
    }

    pub fn ancilla_qubits(&self) -> std::ops::Range<usize> {
        self.n_logical..self.n_qubits
    }

    pub fn x1(&self) -> Option<&[usize]> {
        self.x1.as_deref()
    }

    pub fn x2(&self) -> Option<Vec<usize>> {
        self.x1
            .as_ref()
            .map(|x1| self.logical_qubits().filter(|q| !x1.contains(q)).collect())
    }

    /// Layouts describing the same register; bipartitions are ignored.
    pub fn same_register(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.n_logical == other.n_logical
    }

    pub(crate) fn check_register(&self, other: &Self) -> Result<()> {
        if self.same_register(other) {
            Ok(())
        } else {
            Err(Error::LayoutMismatch)
        }
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit < self.n_qubits {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange { qubit, n_qubits: self.n_qubits })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_follow_sizes() {
        let l = SystemLayout::new(6, 3).unwrap();
        assert_eq!(l.dim(), 64);
        assert_eq!(l.logical_dim(), 8);
        assert_eq!(l.ancilla_qubits(), 3..6);
        assert_eq!(l.rate(), 0.5);
        assert_eq!(SystemLayout::with_rate(16, 0.5).unwrap().n_logical(), 8);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(SystemLayout::new(4, 0).is_err());
        assert!(SystemLayout::new(4, 5).is_err());
        assert!(SystemLayout::new(0, 0).is_err());
    }

    #[test]
    fn bipartition_must_be_the_smaller_logical_part() {
        let l = SystemLayout::new(16, 8).unwrap();
        let b = l.clone().with_leading_x1(4).unwrap();
        assert_eq!(b.x1().unwrap(), &[0, 1, 2, 3]);
        assert_eq!(b.x2().unwrap(), vec![4, 5, 6, 7]);
        assert!(l.clone().with_leading_x1(5).is_err());
        assert!(l.clone().with_bipartition(vec![8]).is_err());
        assert_eq!(l.with_bipartition(vec![]), Err(Error::EmptySubsystem));
    }
}
