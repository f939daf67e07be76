use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::symmetric_group::{character, irrep_dimension, partitions, weingarten_function, Permutation};
use crate::error::{Error, Result};
use crate::layout::SystemLayout;
use crate::noise::{ErrorModel, Mat2};
use crate::state::PureState;

/// Haar-average data for `n` replicas of an `N`-qubit register (`D = 2^N`).
/// Gram entries are `D^{#cycles(s^-1 t)}` and Weingarten entries
/// `Wg(s^-1 t)`, both indexed by [`WeingartenTable::permutations`].
#[derive(Clone, Debug)]
pub struct WeingartenTable {
    n_replicas: usize,
    dim: BigInt,
    perms: Vec<Permutation>,
    shapes: Vec<Vec<usize>>,
    characters: Vec<Vec<i64>>,
    wg: HashMap<Vec<usize>, BigRational>,
}

impl WeingartenTable {
    pub fn new(n_replicas: usize, n_qubits: usize) -> Result<Self> {
        if !matches!(n_replicas, 2 | 4 | 6) {
            return Err(Error::UnsupportedReplicas(n_replicas));
        }
        if n_qubits == 0 {
            return Err(Error::InvalidLayout("register must have at least one qubit".into()));
        }
        let dim = BigInt::from(2).pow(n_qubits as u32);
        let shapes = partitions(n_replicas);
        let characters = shapes.iter().map(|s| shapes.iter().map(|c| character(s, c)).collect()).collect();
        let wg = shapes.iter().map(|c| (c.clone(), weingarten_function(c, &dim))).collect();
        Ok(Self { n_replicas, dim, perms: Permutation::all(n_replicas), shapes, characters, wg })
    }

    pub fn n_replicas(&self) -> usize {
        self.n_replicas
    }

    pub fn dimension(&self) -> &BigInt {
        &self.dim
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    /// Partitions labelling irreps and conjugacy classes, in a shared order.
    pub fn shapes(&self) -> &[Vec<usize>] {
        &self.shapes
    }

    /// `characters()[irrep][class]`.
    pub fn characters(&self) -> &[Vec<i64>] {
        &self.characters
    }

    pub fn irrep_dimensions(&self) -> Vec<BigInt> {
        self.shapes.iter().map(|s| irrep_dimension(s)).collect()
    }

    fn relative(&self, i: usize, j: usize) -> Permutation {
        self.perms[i].inverse().compose(&self.perms[j])
    }

    pub fn gram(&self, i: usize, j: usize) -> BigRational {
        let c = self.relative(i, j).cycle_count();
        BigRational::from_integer(self.dim.clone().pow(c as u32))
    }

    pub fn weingarten(&self, i: usize, j: usize) -> BigRational {
        self.wg[&self.relative(i, j).cycle_type()].clone()
    }

    pub fn weingarten_f64(&self, i: usize, j: usize) -> f64 {
        self.weingarten(i, j).to_f64().unwrap_or(f64::NAN)
    }

    pub fn gram_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.perms.len();
        (0..n).map(|i| (0..n).map(|j| self.gram(i, j)).collect()).collect()
    }

    pub fn weingarten_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.perms.len();
        (0..n).map(|i| (0..n).map(|j| self.weingarten(i, j)).collect()).collect()
    }

    /// Exact inverse of the Gram matrix by Gauss-Jordan elimination.
    pub fn inverse_gram(&self) -> Result<Vec<Vec<BigRational>>> {
        invert(self.gram_matrix())
    }
}

fn invert(mut a: Vec<Vec<BigRational>>) -> Result<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularGram)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                a[r][j] -= x;
                inv[r][j] -= y;
            }
        }
    }
    Ok(inv)
}

/// Largest register the oracle builds dense boundary operators for.
const ORACLE_MAX_QUBITS: usize = 10;

/// `K (x) K^dag` on two replicas of one qubit; replica 1 is the high bit.
fn replica_operator(k: &Mat2) -> [[C64; 4]; 4] {
    let mut o = [[C64::new(0.0, 0.0); 4]; 4];
    for (r, row) in o.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            let (a1, a2, b1, b2) = (r >> 1, r & 1, c >> 1, c & 1);
            *v = k[a1][b1] * k[b2][a2].conj();
        }
    }
    o
}

/// `tr(O T)` with `T` the identity or the swap of the two replicas.
fn trace_with(o: &[[C64; 4]; 4], swap: bool) -> C64 {
    (0..4)
        .map(|x| {
            let y = if swap { ((x & 1) << 1) | (x >> 1) } else { x };
            o[y][x]
        })
        .sum()
}

/// `tr((A (x) B) T)` for the identity or swap `T`.
fn pair_trace(a: &[C64], b: &[C64], d: usize, swap: bool) -> C64 {
    if swap {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += a[i * d + j] * b[j * d + i];
            }
        }
        acc
    } else {
        let tr = |m: &[C64]| (0..d).map(|i| m[i * d + i]).sum::<C64>();
        tr(a) * tr(b)
    }
}

/// Annealed fidelity from two-replica Weingarten calculus: the channel
/// enters only through `tr(O T_pi)` with `O = (x)_i sum_mu K (x) K^dag`,
/// the Haar average through the rational Weingarten matrix, and the input
/// through explicit boundary operators built from `initial` (default `|0^k>`).
pub fn weingarten_fidelity_oracle(
    n: usize,
    k: usize,
    model: &ErrorModel,
    initial: Option<&PureState>,
) -> Result<f64> {
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::InvalidLayout(format!("oracle limited to {ORACLE_MAX_QUBITS} qubits")));
    }
    let layout = SystemLayout::new(n, k)?;
    let table = WeingartenTable::new(2, n)?;
    // permutation order from the table: [identity, swap]
    let swaps: Vec<bool> = table.permutations().iter().map(|p| p.images()[0] != 0).collect();

    let kraus = model.kraus_set(n)?;
    let channel: Vec<f64> = swaps
        .iter()
        .map(|&s| {
            kraus
                .sites
                .iter()
                .map(|ops| ops.iter().map(|kop| trace_with(&replica_operator(kop), s)).sum::<C64>().re)
                .product()
        })
        .collect();
    let b: Vec<f64> = (0..swaps.len())
        .map(|p| (0..swaps.len()).map(|s| table.weingarten_f64(p, s) * channel[s]).sum())
        .collect();

    let logical = match initial {
        Some(s) => s.clone(),
        None => PureState::zero(SystemLayout::bare(k)?),
    };
    let rho0 = PureState::embed_logical(layout.clone(), &logical)?.to_density();
    let d = layout.dim();
    let mut proj = vec![C64::new(0.0, 0.0); d * d];
    for x in 0..d {
        let ancilla_zero = (x >> k) == 0;
        if ancilla_zero {
            proj[x * d + x] = C64::new(1.0, 0.0);
        }
    }
    let r0 = rho0.data();
    let mut num = 0.0;
    let mut den = 0.0;
    for (p, &s) in swaps.iter().enumerate() {
        num += b[p] * pair_trace(r0, r0, d, s).re;
        // the denominator boundary carries an extra swap: T_pi T_swap
        den += b[p] * pair_trace(r0, &proj, d, !s).re;
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_replica_entries_at_two_qubits() {
        let t = WeingartenTable::new(2, 2).unwrap();
        assert_eq!(t.weingarten(0, 0), BigRational::new(1.into(), 15.into()));
        assert_eq!(t.weingarten(0, 1), BigRational::new((-1).into(), 60.into()));
    }

    #[test]
    fn character_formula_inverts_gram() {
        for (reps, qubits) in [(2, 1), (2, 3), (4, 2), (4, 3)] {
            let t = WeingartenTable::new(reps, qubits).unwrap();
            assert_eq!(t.inverse_gram().unwrap(), t.weingarten_matrix(), "{reps} replicas, {qubits} qubits");
        }
    }

    #[test]
    fn unsupported_replicas() {
        assert!(matches!(WeingartenTable::new(3, 2), Err(Error::UnsupportedReplicas(3))));
    }

    #[test]
    fn oracle_two_qubit_quarter_turn() {
        let m = ErrorModel::coherent(std::f64::consts::FRAC_PI_2).unwrap();
        let f = weingarten_fidelity_oracle(2, 1, &m, None).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-14);
    }
}
