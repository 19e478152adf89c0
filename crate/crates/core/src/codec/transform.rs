//! Orthonormal 8x8 DCT-II, applied separably.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::frame::BLOCK;

const N: usize = BLOCK;

pub type Residual = [[i32; N]; N];
pub type Coeffs = [[f64; N]; N];

/// `basis[k][n] = a(k) * cos(pi * (2n + 1) * k / 16)`
fn basis() -> &'static [[f64; N]; N] {
    static BASIS: OnceLock<[[f64; N]; N]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; N]; N];
        for (k, row) in b.iter_mut().enumerate() {
            let scale = if k == 0 { (1.0 / N as f64).sqrt() } else { (2.0 / N as f64).sqrt() };
            for (n, v) in row.iter_mut().enumerate() {
                *v = scale * (PI * (2 * n + 1) as f64 * k as f64 / (2 * N) as f64).cos();
            }
        }
        b
    })
}

pub fn forward_transform(residual: &Residual) -> Coeffs {
    let b = basis();
    // rows first: tmp[y][u] = sum_x residual[y][x] * b[u][x]
    let mut tmp = [[0.0; N]; N];
    for y in 0..N {
        for u in 0..N {
            tmp[y][u] = (0..N).map(|x| residual[y][x] as f64 * b[u][x]).sum();
        }
    }
    let mut out = [[0.0; N]; N];
    for v in 0..N {
        for u in 0..N {
            out[v][u] = (0..N).map(|y| tmp[y][u] * b[v][y]).sum();
        }
    }
    out
}

pub fn inverse_transform(coeffs: &Coeffs) -> Coeffs {
    let b = basis();
    let mut tmp = [[0.0; N]; N];
    for y in 0..N {
        for u in 0..N {
            tmp[y][u] = (0..N).map(|v| coeffs[v][u] * b[v][y]).sum();
        }
    }
    let mut out = [[0.0; N]; N];
    for y in 0..N {
        for x in 0..N {
            out[y][x] = (0..N).map(|u| tmp[y][u] * b[u][x]).sum();
        }
    }
    out
}
