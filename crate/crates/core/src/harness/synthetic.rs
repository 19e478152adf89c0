//! Deterministic synthetic test sequences.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::{FramePlane, PlaneError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorId {
    /// Diagonal ramp panning 2 px/frame.
    GradientPan,
    /// High-contrast rectangles on mid-gray, each moving 2 px/frame.
    MovingBlocks,
    /// Smooth multi-octave value noise panning 1 px/frame.
    TexturedNoise,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 3] = [GeneratorId::GradientPan, GeneratorId::MovingBlocks, GeneratorId::TexturedNoise];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorId::GradientPan => "gradient_pan",
            GeneratorId::MovingBlocks => "moving_blocks",
            GeneratorId::TexturedNoise => "textured_noise",
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| format!("unknown generator {s:?}"))
    }
}

pub fn generate_synthetic(
    id: GeneratorId,
    seed: u64,
    width: usize,
    height: usize,
    count: usize,
) -> Result<Vec<FramePlane>, PlaneError> {
    (0..count).map(|t| synthetic_frame(id, seed, width, height, t)).collect()
}

pub fn synthetic_frame(
    id: GeneratorId,
    seed: u64,
    width: usize,
    height: usize,
    t: usize,
) -> Result<FramePlane, PlaneError> {
    match id {
        GeneratorId::GradientPan => gradient_pan(width, height, t),
        GeneratorId::MovingBlocks => moving_blocks(seed, width, height, t),
        GeneratorId::TexturedNoise => textured_noise(seed, width, height, t),
    }
}

/// `((x + y + 2t) mod P) * 255 / (P - 1)` with `P = w + h - 1`, rounded, so
/// frame 0 is the plain ramp `(x + y)` scaled onto 0..=255.
fn gradient_pan(w: usize, h: usize, t: usize) -> Result<FramePlane, PlaneError> {
    let period = w + h - 1;
    let scale = 255.0 / (period - 1) as f64;
    FramePlane::from_fn(w, h, |x, y| {
        let u = (x + y + 2 * t) % period;
        (u as f64 * scale).round() as u8
    })
}

struct Rect {
    x: i64,
    y: i64,
    w: i64,
    h: i64,
    dx: i64,
    dy: i64,
    value: u8,
}

fn moving_blocks(seed: u64, w: usize, h: usize, t: usize) -> Result<FramePlane, PlaneError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = 6 + (w * h) / 20_000;
    let rects: Vec<Rect> = (0..count)
        .map(|_| {
            let rw = rng.gen_range(w / 12..=w / 4).max(4) as i64;
            let rh = rng.gen_range(h / 12..=h / 4).max(4) as i64;
            let (dx, dy) = [(2, 0), (-2, 0), (0, 2), (0, -2), (2, 2)][rng.gen_range(0..5)];
            Rect {
                x: rng.gen_range(0..w as i64),
                y: rng.gen_range(0..h as i64),
                w: rw,
                h: rh,
                dx,
                dy,
                value: if rng.gen_bool(0.5) { rng.gen_range(0..40) } else { rng.gen_range(215..=255) },
            }
        })
        .collect();
    let (wi, hi) = (w as i64, h as i64);
    FramePlane::from_fn(w, h, |x, y| {
        let (x, y) = (x as i64, y as i64);
        // later rectangles are drawn on top; positions wrap around the frame
        rects
            .iter()
            .rev()
            .find(|r| {
                let ox = (r.x + r.dx * t as i64).rem_euclid(wi);
                let oy = (r.y + r.dy * t as i64).rem_euclid(hi);
                (x - ox).rem_euclid(wi) < r.w && (y - oy).rem_euclid(hi) < r.h
            })
            .map_or(128, |r| r.value)
    })
}

fn lattice(seed: u64, octave: u32, ix: i64, iy: i64) -> f64 {
    // splitmix64 finalizer over the lattice coordinates
    let mut z = seed
        ^ (octave as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (ix as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ (iy as u64).wrapping_mul(0x94D0_49BB_1331_11EB);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

fn value_noise(seed: u64, octave: u32, x: f64, y: f64) -> f64 {
    let (fx, fy) = (x.floor(), y.floor());
    let (ix, iy) = (fx as i64, fy as i64);
    let smooth = |t: f64| t * t * (3.0 - 2.0 * t);
    let (sx, sy) = (smooth(x - fx), smooth(y - fy));
    let v00 = lattice(seed, octave, ix, iy);
    let v10 = lattice(seed, octave, ix + 1, iy);
    let v01 = lattice(seed, octave, ix, iy + 1);
    let v11 = lattice(seed, octave, ix + 1, iy + 1);
    let top = v00 + (v10 - v00) * sx;
    let bottom = v01 + (v11 - v01) * sx;
    top + (bottom - top) * sy
}

fn textured_noise(seed: u64, w: usize, h: usize, t: usize) -> Result<FramePlane, PlaneError> {
    const OCTAVES: [(f64, f64); 3] = [(32.0, 0.55), (12.0, 0.3), (4.0, 0.15)];
    FramePlane::from_fn(w, h, |x, y| {
        let px = (x + t) as f64;
        let py = y as f64;
        let v: f64 = OCTAVES
            .iter()
            .enumerate()
            .map(|(o, &(cell, amp))| amp * value_noise(seed, o as u32, px / cell, py / cell))
            .sum();
        (v * 255.0).round().clamp(0.0, 255.0) as u8
    })
}
