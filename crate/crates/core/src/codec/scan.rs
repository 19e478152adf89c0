//! 8x8 zigzag scan: (0,0), (0,1), (1,0), (2,0), (1,1), (0,2), ...
//! Positions are `(row, col)`.

use std::sync::OnceLock;

use crate::frame::BLOCK;
use crate::syntax::COEFFS;

/// `ZIGZAG[i]` is the `(row, col)` visited at scan index `i`.
pub fn zigzag_order() -> &'static [(usize, usize); COEFFS] {
    static ORDER: OnceLock<[(usize, usize); COEFFS]> = OnceLock::new();
    ORDER.get_or_init(|| {
        let mut order = [(0, 0); COEFFS];
        let mut i = 0;
        for s in 0..(2 * BLOCK - 1) {
            let lo = s.saturating_sub(BLOCK - 1);
            let hi = s.min(BLOCK - 1);
            let rows: Vec<usize> = if s % 2 == 1 { (lo..=hi).collect() } else { (lo..=hi).rev().collect() };
            for r in rows {
                order[i] = (r, s - r);
                i += 1;
            }
        }
        order
    })
}

pub fn zigzag<T: Copy + Default>(block: &[[T; BLOCK]; BLOCK]) -> [T; COEFFS] {
    let mut out = [T::default(); COEFFS];
    for (o, &(r, c)) in out.iter_mut().zip(zigzag_order()) {
        *o = block[r][c];
    }
    out
}

pub fn inverse_zigzag<T: Copy + Default>(scan: &[T; COEFFS]) -> [[T; BLOCK]; BLOCK] {
    let mut out = [[T::default(); BLOCK]; BLOCK];
    for (&v, &(r, c)) in scan.iter().zip(zigzag_order()) {
        out[r][c] = v;
    }
    out
}
