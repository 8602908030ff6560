//! In-place kernels on flat amplitude buffers. A buffer of length `2^b` is
//! addressed bitwise; every kernel touches only the pairs (or 2×2 blocks) of
//! entries that differ in the affected bits.

use num_complex::Complex64;

use super::gate::Mat2;

/// Applies `m` to bit `bit` of the buffer index.
pub(crate) fn apply_1q(buf: &mut [Complex64], bit: usize, m: &Mat2) {
    let stride = 1usize << bit;
    let zero = Complex64::new(0.0, 0.0);
    if m[0][1] == zero && m[1][0] == zero {
        let (d0, d1) = (m[0][0], m[1][1]);
        let one = Complex64::new(1.0, 0.0);
        for chunk in buf.chunks_exact_mut(2 * stride) {
            let (lo, hi) = chunk.split_at_mut(stride);
            if d0 != one {
                lo.iter_mut().for_each(|a| *a *= d0);
            }
            if d1 != one {
                hi.iter_mut().for_each(|a| *a *= d1);
            }
        }
        return;
    }
    if m[0][0] == zero && m[1][1] == zero && m[0][1] == m[1][0] && m[0][1] == Complex64::new(1.0, 0.0) {
        for chunk in buf.chunks_exact_mut(2 * stride) {
            let (lo, hi) = chunk.split_at_mut(stride);
            lo.swap_with_slice(hi);
        }
        return;
    }
    for chunk in buf.chunks_exact_mut(2 * stride) {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        }
    }
}

/// Flips bit `target` of every index whose bit `control` is set.
pub(crate) fn apply_cnot(buf: &mut [Complex64], control: usize, target: usize) {
    let (cm, tm) = (1usize << control, 1usize << target);
    for i in 0..buf.len() {
        if i & cm != 0 && i & tm == 0 {
            buf.swap(i, i | tm);
        }
    }
}

/// Calls `f` on every 2×2 block `[ρ00, ρ01, ρ10, ρ11]` formed by the entries
/// whose `row_bit` / `col_bit` take the values 0 and 1.
pub(crate) fn for_each_block(
    buf: &mut [Complex64],
    row_bit: usize,
    col_bit: usize,
    mut f: impl FnMut([Complex64; 4]) -> [Complex64; 4],
) {
    let (rm, cm) = (1usize << row_bit, 1usize << col_bit);
    for i in 0..buf.len() {
        if i & (rm | cm) != 0 {
            continue;
        }
        let idx = [i, i | cm, i | rm, i | rm | cm];
        let out = f(idx.map(|k| buf[k]));
        for (k, v) in idx.into_iter().zip(out) {
            buf[k] = v;
        }
    }
}

/// `ρ → (1−p)ρ + p·XρX` on the 2×2 block of one qubit.
pub(crate) fn bit_flip(block: [Complex64; 4], p: f64) -> [Complex64; 4] {
    let q = 1.0 - p;
    let [a00, a01, a10, a11] = block;
    [q * a00 + p * a11, q * a01 + p * a10, q * a10 + p * a01, q * a11 + p * a00]
}

/// `ρ → (1−p)ρ + p·Tr_q(ρ)⊗I/2` on the 2×2 block of one qubit.
pub(crate) fn depolarize(block: [Complex64; 4], p: f64) -> [Complex64; 4] {
    let q = 1.0 - p;
    let [a00, a01, a10, a11] = block;
    let half = (a00 + a11) * 0.5;
    [q * a00 + p * half, q * a01, q * a10, q * a11 + p * half]
}

pub(crate) fn conj(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]]
}
