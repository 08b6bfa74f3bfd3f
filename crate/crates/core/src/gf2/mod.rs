//! Bit-packed GF(2) building blocks: polynomials, linear-recurrence
//! synthesis, and an incremental echelon solver.

mod bm;
mod echelon;
mod poly;

pub use bm::{berlekamp_massey, minimal_polynomial, BitSeq};
pub use echelon::{Echelon, Insert};
pub use poly::Poly2;

/// 64 bits of `words` starting at bit `pos`; bits past the end read as zero.
#[inline]
pub(crate) fn word_at(words: &[u64], pos: usize) -> u64 {
    let (w, b) = (pos / 64, pos % 64);
    let lo = words.get(w).copied().unwrap_or(0);
    if b == 0 {
        return lo;
    }
    let hi = words.get(w + 1).copied().unwrap_or(0);
    (lo >> b) | (hi << (64 - b))
}

/// `dst ^= src << shift` over bit vectors; `dst` grows as needed.
pub(crate) fn xor_shifted(dst: &mut Vec<u64>, src: &[u64], shift: usize) {
    let (ws, bs) = (shift / 64, shift % 64);
    let need = src.len() + ws + 1;
    if dst.len() < need {
        dst.resize(need, 0);
    }
    for (k, &s) in src.iter().enumerate() {
        if s == 0 {
            continue;
        }
        dst[k + ws] ^= s << bs;
        if bs != 0 {
            dst[k + ws + 1] ^= s >> (64 - bs);
        }
    }
}
