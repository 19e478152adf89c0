//! Quality and security metrics for 8-bit planes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::FramePlane;

/// Number of 8-bit sample values.
pub const LEVELS: usize = 256;

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("plane dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("plane {0}x{1} is smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window")]
    TooSmall(usize, usize),
    #[error("level count {0} is not a power of two in 2..=65536")]
    LevelCount(u64),
    #[error("plain stream size is zero")]
    ZeroPlainSize,
}

fn same_dims(a: &FramePlane, b: &FramePlane) -> Result<(), MetricsError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(MetricsError::DimensionMismatch(a.width(), a.height(), b.width(), b.height()));
    }
    Ok(())
}

pub fn mse(a: &FramePlane, b: &FramePlane) -> Result<f64, MetricsError> {
    same_dims(a, b)?;
    let sum: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// PSNR in dB; `f64::INFINITY` for identical planes.
pub fn psnr(a: &FramePlane, b: &FramePlane) -> Result<f64, MetricsError> {
    let mse = mse(a, b)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

fn gaussian_kernel() -> [f64; SSIM_WINDOW] {
    let mut k = [0.0; SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - c;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let s: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= s);
    k
}

/// Separable valid-region filter of a `w x h` field.
fn filter_valid(field: &[f64], w: usize, h: usize, k: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let ow = w - SSIM_WINDOW + 1;
    let oh = h - SSIM_WINDOW + 1;
    let mut horiz = vec![0.0; ow * h];
    for y in 0..h {
        let row = &field[y * w..(y + 1) * w];
        for x in 0..ow {
            horiz[y * ow + x] = k.iter().zip(&row[x..x + SSIM_WINDOW]).map(|(a, b)| a * b).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = (0..SSIM_WINDOW).map(|j| k[j] * horiz[(y + j) * ow + x]).sum();
        }
    }
    out
}

/// Mean SSIM over all 11x11 Gaussian (sigma 1.5) windows fully inside the plane.
pub fn ssim(a: &FramePlane, b: &FramePlane) -> Result<f64, MetricsError> {
    same_dims(a, b)?;
    let (w, h) = (a.width(), a.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(MetricsError::TooSmall(w, h));
    }
    let k = gaussian_kernel();
    let x: Vec<f64> = a.samples().iter().map(|&v| v as f64).collect();
    let y: Vec<f64> = b.samples().iter().map(|&v| v as f64).collect();
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p * q).collect();

    let mu_x = filter_valid(&x, w, h, &k);
    let mu_y = filter_valid(&y, w, h, &k);
    let e_xx = filter_valid(&xx, w, h, &k);
    let e_yy = filter_valid(&yy, w, h, &k);
    let e_xy = filter_valid(&xy, w, h, &k);

    let total: f64 = (0..mu_x.len())
        .map(|i| {
            let (mx, my) = (mu_x[i], mu_y[i]);
            let vx = e_xx[i] - mx * mx;
            let vy = e_yy[i] - my * my;
            let cov = e_xy[i] - mx * my;
            ((2.0 * mx * my + SSIM_C1) * (2.0 * cov + SSIM_C2)) / ((mx * mx + my * my + SSIM_C1) * (vx + vy + SSIM_C2))
        })
        .sum();
    Ok(total / mu_x.len() as f64)
}

pub fn histogram(plane: &FramePlane) -> [u64; LEVELS] {
    let mut h = [0u64; LEVELS];
    for &v in plane.samples() {
        h[v as usize] += 1;
    }
    h
}

/// Normalized L1 distance: 0 for identical distributions, 1 for disjoint support.
pub fn histogram_distance(h1: &[u64; LEVELS], h2: &[u64; LEVELS]) -> f64 {
    let t1: u64 = h1.iter().sum();
    let t2: u64 = h2.iter().sum();
    if t1 == 0 || t2 == 0 {
        return if t1 == t2 { 0.0 } else { 1.0 };
    }
    let l1: f64 = h1.iter().zip(h2).map(|(&a, &b)| (a as f64 / t1 as f64 - b as f64 / t2 as f64).abs()).sum();
    l1 / 2.0
}

/// Shannon entropy of the sample histogram, in bits.
pub fn entropy(plane: &FramePlane) -> f64 {
    let total = plane.len() as f64;
    -histogram(plane)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Fraction of positions whose samples differ.
pub fn npcr(a: &FramePlane, b: &FramePlane) -> Result<f64, MetricsError> {
    same_dims(a, b)?;
    let diff = a.samples().iter().zip(b.samples()).filter(|(x, y)| x != y).count();
    Ok(diff as f64 / a.len() as f64)
}

/// Mean absolute difference normalized by `L - 1 = 255`.
pub fn uaci(a: &FramePlane, b: &FramePlane) -> Result<f64, MetricsError> {
    same_dims(a, b)?;
    let sum: u64 = a.samples().iter().zip(b.samples()).map(|(&x, &y)| x.abs_diff(y) as u64).sum();
    Ok(sum as f64 / ((LEVELS - 1) as f64 * a.len() as f64))
}

fn check_levels(l: u64) -> Result<(), MetricsError> {
    if !(2..=1 << 16).contains(&l) || !l.is_power_of_two() {
        return Err(MetricsError::LevelCount(l));
    }
    Ok(())
}

/// Expected NPCR between two independent uniform images with `l` levels.
pub fn expected_npcr(l: u64) -> Result<f64, MetricsError> {
    check_levels(l)?;
    Ok(1.0 - 2f64.powf(-(l as f64).log2()))
}

/// Expected UACI between two independent uniform images with `l` levels.
pub fn expected_uaci(l: u64) -> Result<f64, MetricsError> {
    check_levels(l)?;
    let sum: f64 = (1..l).map(|v| (v * (v + 1)) as f64).sum();
    Ok(sum / (l - 1) as f64 / (l as f64 * l as f64))
}

/// Relative size change of an encrypted stream.
pub fn bitrate_delta(bits_encrypted: u64, bits_plain: u64) -> Result<f64, MetricsError> {
    if bits_plain == 0 {
        return Err(MetricsError::ZeroPlainSize);
    }
    Ok((bits_encrypted as f64 - bits_plain as f64) / bits_plain as f64)
}

/// Metrics of one test plane against one reference plane.
///
/// `psnr_db` is `None` when the planes are identical (infinite PSNR).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub psnr_db: Option<f64>,
    pub ssim: f64,
    pub entropy_bits: f64,
    pub npcr: f64,
    pub uaci: f64,
    pub bitrate_delta: Option<f64>,
    #[serde(skip)]
    pub histogram: Vec<u64>,
}

impl MetricsReport {
    /// Compares `test` against `reference`; entropy and histogram describe `test`.
    pub fn compare(reference: &FramePlane, test: &FramePlane) -> Result<Self, MetricsError> {
        let p = psnr(reference, test)?;
        Ok(MetricsReport {
            psnr_db: p.is_finite().then_some(p),
            ssim: ssim(reference, test)?,
            entropy_bits: entropy(test),
            npcr: npcr(reference, test)?,
            uaci: uaci(reference, test)?,
            bitrate_delta: None,
            histogram: histogram(test).to_vec(),
        })
    }

    pub fn with_bitrate(mut self, bits_encrypted: u64, bits_plain: u64) -> Result<Self, MetricsError> {
        self.bitrate_delta = Some(bitrate_delta(bits_encrypted, bits_plain)?);
        Ok(self)
    }
}
