//! In-place bit-indexed kernels shared by state vectors and density
//! matrices (a density matrix is handled as a vector over `2n` bits).

use crate::C64;

#[inline(always)]
fn insert_zero(x: usize, bit: usize) -> usize {
    let low = x & ((1 << bit) - 1);
    ((x >> bit) << (bit + 1)) | low
}

/// Apply a 4x4 matrix to bits `(qi, qj)`; the local index is `2*b_i + b_j`.
pub(crate) fn apply_two(amps: &mut [C64], m: &[[C64; 4]; 4], qi: usize, qj: usize) {
    let (mi, mj) = (1usize << qi, 1usize << qj);
    let (lo, hi) = if qi < qj { (qi, qj) } else { (qj, qi) };
    let quarter = amps.len() >> 2;
    for c in 0..quarter {
        let b = insert_zero(insert_zero(c, lo), hi);
        let idx = [b, b | mj, b | mi, b | mi | mj];
        let a = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (row, &out) in m.iter().zip(idx.iter()) {
            amps[out] = row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3];
        }
    }
}

/// Apply a 2x2 matrix to bit `q`.
pub(crate) fn apply_one(amps: &mut [C64], m: &[[C64; 2]; 2], q: usize) {
    let mq = 1usize << q;
    let half = amps.len() >> 1;
    for c in 0..half {
        let i0 = insert_zero(c, q);
        let i1 = i0 | mq;
        let (a0, a1) = (amps[i0], amps[i1]);
        amps[i0] = m[0][0] * a0 + m[0][1] * a1;
        amps[i1] = m[1][0] * a0 + m[1][1] * a1;
    }
}

/// Iterate over the groups of four indices differing only in bits `qi`, `qj`,
/// ordered by local index `2*b_i + b_j`.
pub(crate) fn for_each_quad(len: usize, qi: usize, qj: usize, mut f: impl FnMut([usize; 4])) {
    let (mi, mj) = (1usize << qi, 1usize << qj);
    let (lo, hi) = if qi < qj { (qi, qj) } else { (qj, qi) };
    for c in 0..len >> 2 {
        let b = insert_zero(insert_zero(c, lo), hi);
        f([b, b | mj, b | mi, b | mi | mj]);
    }
}

/// Spread the low bits of `x` onto the listed bit positions.
pub(crate) fn scatter_bits(x: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (t, &p)| acc | (((x >> t) & 1) << p))
}
