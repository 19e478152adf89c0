//! Experiment runner: every (sequence, QP, level) cell is encoded, decoded
//! with and without the key, and measured against the original frames and
//! against the unencrypted decode.

pub mod config;
mod report;
pub mod synthetic;

pub use config::{ExperimentConfig, SequenceSource, SequenceSpec};
pub use report::write_reports;
pub use synthetic::{generate_synthetic, GeneratorId};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::encrypt::EncryptionLevel;
use crate::frame::FramePlane;
use crate::io::read_yuv;
use crate::keystream::KeystreamHandle;
use crate::metrics;
use crate::pipeline::{decode_sequence, encode_sequence, EncodedSequence};
use crate::Error;

/// Frame-averaged measurements of one cell's keyless (unauthorized) decode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellReport {
    pub sequence: String,
    pub qp: u8,
    pub level: String,
    /// `None` when any frame decodes identical to the original.
    pub psnr_db: Option<f64>,
    pub ssim: f64,
    pub entropy_bits: f64,
    pub original_entropy_bits: f64,
    pub npcr_vs_original: f64,
    pub uaci_vs_original: f64,
    pub npcr_vs_baseline: f64,
    pub uaci_vs_baseline: f64,
    pub histogram_distance: f64,
    pub bits: u64,
    pub bitrate_delta: f64,
    /// SHA-256 of the serialized container.
    pub container_sha256: String,
    /// Keyed decode reproduced the unencrypted decode exactly.
    pub keyed_matches_baseline: bool,
    /// Per-frame PSNR of the keyless decode; `None` entries are identical frames.
    pub frame_psnr_db: Vec<Option<f64>>,
    #[serde(skip)]
    pub frame0: Option<FramePlane>,
}

/// NPCR between the correct-key decode and a decode with one key bit flipped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeySensitivityRow {
    pub sequence: String,
    pub qp: u8,
    pub level: String,
    pub flipped_bit: usize,
    pub npcr_min: f64,
    pub npcr_mean: f64,
    pub frame_npcr: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub sequence: String,
    pub qp: Option<u8>,
    pub level: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub width: usize,
    pub height: usize,
    pub frames_per_sequence: usize,
    pub cells: Vec<CellReport>,
    pub key_sensitivity: Vec<KeySensitivityRow>,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub originals: Vec<(String, FramePlane)>,
}

impl ExperimentReport {
    pub fn cell(&self, sequence: &str, qp: u8, level: EncryptionLevel) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.sequence == sequence && c.qp == qp && c.level == level.name())
    }
}

pub fn load_sequence(seq: &SequenceSpec, cfg: &ExperimentConfig) -> Result<Vec<FramePlane>, Error> {
    let (w, h, n) = (cfg.width, cfg.height, cfg.frames_per_sequence);
    match &seq.source {
        SequenceSource::Synthetic { id, seed } => Ok(generate_synthetic(*id, *seed, w, h, n)?),
        SequenceSource::File(path) => Ok(read_yuv(path, w, h, n)?),
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

struct Baseline {
    decoded: Vec<FramePlane>,
    bits: u64,
}

fn measure_cell(
    name: &str,
    originals: &[FramePlane],
    qp: u8,
    level: EncryptionLevel,
    encoded: &EncodedSequence,
    baseline: &Baseline,
    cfg: &ExperimentConfig,
) -> Result<(CellReport, Option<KeySensitivityRow>), Error> {
    let keyless = decode_sequence(&encoded.container, None)?;
    let keyed = decode_sequence(&encoded.container, Some(&cfg.key))?;

    let psnrs = originals.iter().zip(&keyless).map(|(o, d)| metrics::psnr(o, d)).collect::<Result<Vec<_>, _>>()?;
    let pair_mean = |f: fn(&FramePlane, &FramePlane) -> Result<f64, metrics::MetricsError>,
                     refs: &[FramePlane]|
     -> Result<f64, Error> {
        let v = refs.iter().zip(&keyless).map(|(r, d)| f(r, d)).collect::<Result<Vec<_>, _>>()?;
        Ok(mean(v.into_iter()))
    };
    let psnr_mean = mean(psnrs.iter().copied());

    let cell = CellReport {
        sequence: name.to_owned(),
        qp,
        level: level.name().to_owned(),
        psnr_db: psnr_mean.is_finite().then_some(psnr_mean),
        ssim: pair_mean(metrics::ssim, originals)?,
        entropy_bits: mean(keyless.iter().map(metrics::entropy)),
        original_entropy_bits: mean(originals.iter().map(metrics::entropy)),
        npcr_vs_original: pair_mean(metrics::npcr, originals)?,
        uaci_vs_original: pair_mean(metrics::uaci, originals)?,
        npcr_vs_baseline: pair_mean(metrics::npcr, &baseline.decoded)?,
        uaci_vs_baseline: pair_mean(metrics::uaci, &baseline.decoded)?,
        histogram_distance: mean(
            originals
                .iter()
                .zip(&keyless)
                .map(|(o, d)| metrics::histogram_distance(&metrics::histogram(o), &metrics::histogram(d))),
        ),
        bits: encoded.total_bits(),
        bitrate_delta: metrics::bitrate_delta(encoded.total_bits(), baseline.bits)?,
        container_sha256: hex::encode(Sha256::digest(encoded.container.to_bytes())),
        keyed_matches_baseline: keyed == baseline.decoded,
        frame_psnr_db: psnrs.iter().map(|p| p.is_finite().then_some(*p)).collect(),
        frame0: keyless.first().cloned(),
    };

    let sensitivity = if level == EncryptionLevel::None {
        None
    } else {
        let wrong = cfg.key.with_bit_flipped(cfg.sensitivity_bit);
        let wrong_decode = decode_sequence(&encoded.container, Some(&wrong))?;
        let frame_npcr =
            keyed.iter().zip(&wrong_decode).map(|(a, b)| metrics::npcr(a, b)).collect::<Result<Vec<_>, _>>()?;
        Some(KeySensitivityRow {
            sequence: name.to_owned(),
            qp,
            level: level.name().to_owned(),
            flipped_bit: cfg.sensitivity_bit,
            npcr_min: frame_npcr.iter().copied().fold(f64::INFINITY, f64::min),
            npcr_mean: mean(frame_npcr.iter().copied()),
            frame_npcr,
        })
    };
    Ok((cell, sensitivity))
}

type CellOutcome = Result<(CellReport, Option<KeySensitivityRow>), Error>;

fn run_sequence_qp(
    name: &str,
    originals: &[FramePlane],
    qp: u8,
    cfg: &ExperimentConfig,
) -> Vec<(EncryptionLevel, CellOutcome)> {
    let ks = KeystreamHandle::new(cfg.key, cfg.nonce);
    let baseline = match encode_sequence(originals, qp, EncryptionLevel::None, &ks).and_then(|enc| {
        let decoded = decode_sequence(&enc.container, None)?;
        Ok((enc, decoded))
    }) {
        Ok((enc, decoded)) => (enc.clone(), Baseline { decoded, bits: enc.total_bits() }),
        Err(e) => {
            let msg = e.to_string();
            return cfg.levels.iter().map(|&l| (l, Err(Error::Other(msg.clone())))).collect();
        }
    };
    cfg.levels
        .par_iter()
        .map(|&level| {
            let outcome = if level == EncryptionLevel::None {
                measure_cell(name, originals, qp, level, &baseline.0, &baseline.1, cfg)
            } else {
                encode_sequence(originals, qp, level, &ks)
                    .and_then(|enc| measure_cell(name, originals, qp, level, &enc, &baseline.1, cfg))
            };
            (level, outcome)
        })
        .collect()
}

/// Runs every configured cell. Cell failures are collected in
/// `failures` and do not abort the remaining cells.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, Error> {
    cfg.validate()?;
    let mut report = ExperimentReport {
        width: cfg.width,
        height: cfg.height,
        frames_per_sequence: cfg.frames_per_sequence,
        cells: Vec::new(),
        key_sensitivity: Vec::new(),
        failures: Vec::new(),
        originals: Vec::new(),
    };

    let loaded: Vec<(String, Result<Vec<FramePlane>, Error>)> =
        cfg.sequences.par_iter().map(|s| (s.name.clone(), load_sequence(s, cfg))).collect();

    let mut jobs = Vec::new();
    for (name, frames) in &loaded {
        match frames {
            Ok(frames) => {
                report.originals.push((name.clone(), frames[0].clone()));
                for &qp in &cfg.qps {
                    jobs.push((name.as_str(), frames.as_slice(), qp));
                }
            }
            Err(e) => {
                report.failures.push(Failure { sequence: name.clone(), qp: None, level: None, error: e.to_string() })
            }
        }
    }

    let results: Vec<_> =
        jobs.par_iter().map(|&(name, frames, qp)| (name, qp, run_sequence_qp(name, frames, qp, cfg))).collect();

    for (name, qp, cells) in results {
        for (level, outcome) in cells {
            match outcome {
                Ok((cell, sens)) => {
                    report.cells.push(cell);
                    report.key_sensitivity.extend(sens);
                }
                Err(e) => report.failures.push(Failure {
                    sequence: name.to_owned(),
                    qp: Some(qp),
                    level: Some(level.name().to_owned()),
                    error: e.to_string(),
                }),
            }
        }
    }
    Ok(report)
}
