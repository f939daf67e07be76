//! Permutations, integer partitions and symmetric-group characters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A permutation of `0..n`, stored as the image of each point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Self(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut lens = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let (mut i, mut len) = (s, 0);
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_type().len()
    }

    /// All `n!` permutations in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

/// Partitions of `n` as decreasing part lists, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Hook lengths of each cell, row by row.
fn hooks(shape: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &row) in shape.iter().enumerate() {
        for j in 0..row {
            let below = shape[i + 1..].iter().filter(|&&r| r > j).count();
            out.push(row - j + below);
        }
    }
    out
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Dimension of the irreducible representation labelled by `shape`.
pub fn irrep_dimension(shape: &[usize]) -> BigInt {
    let n: usize = shape.iter().sum();
    let h = hooks(shape).into_iter().fold(BigInt::one(), |acc, x| acc * BigInt::from(x));
    factorial(n) / h
}

/// Schur polynomial at `d` ones, `prod_cells (d + content) / hook`.
pub fn schur_at_ones(shape: &[usize], d: &BigInt) -> BigRational {
    let mut num = BigInt::one();
    for (i, &row) in shape.iter().enumerate() {
        for j in 0..row {
            num *= d + BigInt::from(j as i64 - i as i64);
        }
    }
    let den = hooks(shape).into_iter().fold(BigInt::one(), |acc, x| acc * BigInt::from(x));
    BigRational::new(num, den)
}

/// Irreducible character `chi_shape` on the class with cycle type `class`,
/// by the Murnaghan-Nakayama rule on beta-sets.
pub fn character(shape: &[usize], class: &[usize]) -> i64 {
    let len = shape.len();
    let beta: Vec<usize> = shape.iter().enumerate().map(|(i, &p)| p + (len - 1 - i)).collect();
    mn_rule(&beta, class)
}

fn mn_rule(beta: &[usize], class: &[usize]) -> i64 {
    let Some((&m, rest)) = class.split_first() else {
        // empty shape remains exactly when every bead is packed at the bottom
        let mut b = beta.to_vec();
        b.sort_unstable();
        return i64::from(b.iter().enumerate().all(|(i, &x)| x == i));
    };
    let mut total = 0;
    for (idx, &b) in beta.iter().enumerate() {
        if b < m || beta.contains(&(b - m)) {
            continue;
        }
        let crossed = beta.iter().filter(|&&c| c > b - m && c < b).count();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        let mut next = beta.to_vec();
        next[idx] = b - m;
        total += sign * mn_rule(&next, rest);
    }
    total
}

/// Weingarten function `Wg(class; d)` for `S_n` acting on `(C^d)^{(x) n}`,
/// summing over irreps with at most `d` rows.
pub fn weingarten_function(class: &[usize], d: &BigInt) -> BigRational {
    let n: usize = class.iter().sum();
    let nf = factorial(n);
    let mut acc = BigRational::zero();
    for shape in partitions(n) {
        if BigInt::from(shape.len()) > *d {
            continue;
        }
        let dim = irrep_dimension(&shape);
        let chi = BigInt::from(character(&shape, class));
        acc += BigRational::new(&dim * &dim * chi, BigInt::one()) / schur_at_ones(&shape, d);
    }
    acc / BigRational::from_integer(&nf * &nf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn s3_character_table() {
        // classes (1,1,1), (2,1), (3)
        let classes = [vec![1, 1, 1], vec![2, 1], vec![3]];
        let table = [(vec![3], [1, 1, 1]), (vec![2, 1], [2, 0, -1]), (vec![1, 1, 1], [1, -1, 1])];
        for (shape, row) in table {
            for (c, &expect) in classes.iter().zip(row.iter()) {
                assert_eq!(character(&shape, c), expect, "{shape:?} on {c:?}");
            }
        }
    }

    #[test]
    fn character_orthogonality_s5() {
        let perms = Permutation::all(5);
        let shapes = partitions(5);
        for a in &shapes {
            for b in &shapes {
                let s: i64 = perms.iter().map(|p| character(a, &p.cycle_type()) * character(b, &p.cycle_type())).sum();
                assert_eq!(s, if a == b { 120 } else { 0 });
            }
        }
    }

    #[test]
    fn dimensions_square_sum() {
        for n in 1..=6 {
            let s: BigInt = partitions(n).iter().map(|p| irrep_dimension(p).pow(2)).sum();
            assert_eq!(s, factorial(n));
            for p in partitions(n) {
                assert_eq!(BigInt::from(character(&p, &vec![1; n])), irrep_dimension(&p));
            }
        }
    }

    #[test]
    fn composition_and_cycles() {
        let a = Permutation::from_images(vec![1, 2, 0, 3]).unwrap();
        assert_eq!(a.cycle_type(), vec![3, 1]);
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(4));
        assert!(Permutation::from_images(vec![0, 0]).is_none());
    }
}
