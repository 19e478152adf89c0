#![allow(dead_code)]

pub mod fuzz;
pub mod oracle;

use mlse::keystream::{KeystreamHandle, Nonce, SecretKey};
use mlse::FramePlane;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn key() -> SecretKey {
    "000102030405060708090a0b0c0d0e0f".parse().unwrap()
}

pub fn nonce() -> Nonce {
    "a0a1a2a3a4a5a6a7a8a9aaab".parse().unwrap()
}

pub fn keystream() -> KeystreamHandle {
    KeystreamHandle::new(key(), nonce())
}

pub fn noise_plane(rng: &mut ChaCha8Rng, w: usize, h: usize) -> FramePlane {
    FramePlane::from_fn(w, h, |_, _| rng.gen()).unwrap()
}

/// Random mix of smooth gradients, flat patches and noise, so frames
/// exercise MPM hits, remainder modes and trailing ones alike.
pub fn textured_plane(rng: &mut ChaCha8Rng, w: usize, h: usize) -> FramePlane {
    let (gx, gy): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    let base: f64 = rng.gen_range(40.0..200.0);
    let amp: f64 = rng.gen_range(0.0..40.0);
    let noise: Vec<f64> = (0..w * h).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let patch = (rng.gen_range(0..w), rng.gen_range(0..h), rng.gen_range(8..32));
    FramePlane::from_fn(w, h, |x, y| {
        if x >= patch.0 && x < patch.0 + patch.2 && y >= patch.1 && y < patch.1 + patch.2 {
            return 30;
        }
        let v = base + gx * x as f64 + gy * y as f64 + amp * noise[y * w + x];
        v.round().clamp(0.0, 255.0) as u8
    })
    .unwrap()
}
