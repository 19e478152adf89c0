//! Naive reimplementations used as test oracles.

#![allow(clippy::needless_range_loop)]

use mlse::codec::{build_reference_samples, forward_transform, mpm_list, predict_block, select_mode, ReferenceSamples};
use mlse::metrics;
use mlse::syntax::{IntraMode, ModeSyntax};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{noise_plane, rng, textured_plane};

pub const TOL: f64 = 1e-9;

pub fn naive_psnr(a: &[u8], b: &[u8]) -> f64 {
    let mut sum = 0.0;
    for i in 0..a.len() {
        let d = a[i] as f64 - b[i] as f64;
        sum += d * d;
    }
    let mse = sum / a.len() as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / mse).log10()
    }
}

pub fn naive_entropy(a: &[u8]) -> f64 {
    let mut counts = [0usize; 256];
    for &v in a {
        counts[v as usize] += 1;
    }
    let mut h = 0.0;
    for c in counts {
        if c > 0 {
            let p = c as f64 / a.len() as f64;
            h -= p * p.log2();
        }
    }
    h
}

pub fn naive_npcr(a: &[u8], b: &[u8]) -> f64 {
    let mut diff = 0;
    for i in 0..a.len() {
        if a[i] != b[i] {
            diff += 1;
        }
    }
    diff as f64 / a.len() as f64
}

pub fn naive_uaci(a: &[u8], b: &[u8]) -> f64 {
    let mut sum = 0.0;
    for i in 0..a.len() {
        sum += (a[i] as f64 - b[i] as f64).abs() / 255.0;
    }
    sum / a.len() as f64
}

pub fn naive_dct(x: &[[i32; 8]; 8]) -> [[f64; 8]; 8] {
    use std::f64::consts::PI;
    let mut out = [[0.0; 8]; 8];
    for u in 0..8 {
        for v in 0..8 {
            let cu = if u == 0 { (1.0f64 / 8.0).sqrt() } else { (2.0f64 / 8.0).sqrt() };
            let cv = if v == 0 { (1.0f64 / 8.0).sqrt() } else { (2.0f64 / 8.0).sqrt() };
            let mut s = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    s += x[i][j] as f64
                        * ((2 * i + 1) as f64 * u as f64 * PI / 16.0).cos()
                        * ((2 * j + 1) as f64 * v as f64 * PI / 16.0).cos();
                }
            }
            out[u][v] = cu * cv * s;
        }
    }
    out
}

/// Exhaustive argmin with its own SSE and explicit lowest-index tie-break.
pub fn oracle_mode(orig: &[[u8; 8]; 8], refs: &ReferenceSamples) -> u8 {
    let mut best_mode = 0u8;
    let mut best_sse = i64::MAX;
    for m in 0..35u8 {
        let pred = predict_block(IntraMode::new(m).unwrap(), refs);
        let mut sse = 0i64;
        for y in 0..8 {
            for x in 0..8 {
                let d = orig[y][x] as i64 - pred[y][x] as i64;
                sse += d * d;
            }
        }
        if sse < best_sse {
            best_sse = sse;
            best_mode = m;
        }
    }
    best_mode
}

pub fn oracle_syntax(mode: u8, mpm: &[IntraMode; 3]) -> ModeSyntax {
    let list: Vec<u8> = mpm.iter().map(|m| m.index()).collect();
    if let Some(i) = list.iter().position(|&m| m == mode) {
        return ModeSyntax::Mpm { idx: i as u8 };
    }
    let rank = (0..mode).filter(|m| !list.contains(m)).count();
    ModeSyntax::Rem { idx: rank as u8 }
}

/// PSNR, entropy, NPCR and UACI on `n` random 8x8 plane pairs.
pub fn check_metrics(seed: u64, n: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for i in 0..n {
        let a = noise_plane(&mut r, 8, 8);
        let b = if i % 10 == 0 { a.clone() } else { noise_plane(&mut r, 8, 8) };
        let (sa, sb) = (a.samples(), b.samples());
        let close = |x: f64, y: f64| x == y || (x - y).abs() < TOL;
        let pairs = [
            ("psnr", metrics::psnr(&a, &b).unwrap(), naive_psnr(sa, sb)),
            ("entropy", metrics::entropy(&a), naive_entropy(sa)),
            ("npcr", metrics::npcr(&a, &b).unwrap(), naive_npcr(sa, sb)),
            ("uaci", metrics::uaci(&a, &b).unwrap(), naive_uaci(sa, sb)),
        ];
        for (name, got, want) in pairs {
            if !close(got, want) {
                return Err(format!("plane {i}: {name} {got} vs {want}"));
            }
        }
    }
    Ok(())
}

pub fn check_dct(seed: u64, n: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for k in 0..n {
        let x: [[i32; 8]; 8] = std::array::from_fn(|_| std::array::from_fn(|_| r.gen_range(-255..=255)));
        let fast = forward_transform(&x);
        let slow = naive_dct(&x);
        for u in 0..8 {
            for v in 0..8 {
                if (fast[u][v] - slow[u][v]).abs() >= TOL {
                    return Err(format!("block {k} ({u},{v}): {} vs {}", fast[u][v], slow[u][v]));
                }
            }
        }
    }
    Ok(())
}

fn random_neighbour(r: &mut ChaCha8Rng) -> Option<IntraMode> {
    r.gen_bool(0.8).then(|| IntraMode::new(r.gen_range(0..35)).unwrap())
}

/// Mode decision and its syntax against exhaustive re-search on `n` blocks.
pub fn check_mode_selection(seed: u64, n: usize) -> Result<(), String> {
    let mut r = rng(seed);
    let mut checked = 0;
    while checked < n {
        let recon = if checked % 2 == 0 { textured_plane(&mut r, 32, 32) } else { noise_plane(&mut r, 32, 32) };
        let src = textured_plane(&mut r, 32, 32);
        for _ in 0..20.min(n - checked) {
            let (bx, by) = (r.gen_range(0..4), r.gen_range(0..4));
            let refs = build_reference_samples(&recon, bx, by);
            let orig = src.block(bx, by);
            let mpm = mpm_list(random_neighbour(&mut r), random_neighbour(&mut r));
            let (mode, syntax) = select_mode(&orig, &refs, &mpm);
            let expect = oracle_mode(&orig, &refs);
            if mode.index() != expect || syntax != oracle_syntax(expect, &mpm) {
                return Err(format!("block {checked}: got {mode:?}/{syntax:?}, oracle mode {expect}"));
            }
            checked += 1;
        }
    }
    Ok(())
}
