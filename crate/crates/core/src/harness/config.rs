//! Experiment configuration, read from a flat `key = value` text file.
//!
//! ```text
//! # lines starting with '#' are ignored
//! width = 352
//! height = 288
//! frames_per_sequence = 12
//! qps = 10, 25, 40
//! levels = none, light, medium, heavy
//! key = 000102030405060708090a0b0c0d0e0f
//! nonce = 000000000000000000000000
//! sequence = ramp gradient_pan 1
//! sequence = akiyo file /data/akiyo_cif.yuv
//! ```
//!
//! `sequence` may repeat; each is `<name> <generator> <seed>` or
//! `<name> file <path>`. Omitted keys take the defaults.

use std::path::{Path, PathBuf};

use crate::encrypt::EncryptionLevel;
use crate::keystream::{Nonce, SecretKey};
use crate::Error;

use super::synthetic::GeneratorId;

pub const DEFAULT_KEY: &str = "2b7e151628aed2a6abf7158809cf4f3c";
pub const DEFAULT_NONCE: &str = "6d6c73652d6e6f6e63652d31";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSource {
    Synthetic { id: GeneratorId, seed: u64 },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSpec {
    pub name: String,
    pub source: SequenceSource,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub sequences: Vec<SequenceSpec>,
    pub width: usize,
    pub height: usize,
    pub frames_per_sequence: usize,
    pub qps: Vec<u8>,
    pub levels: Vec<EncryptionLevel>,
    pub key: SecretKey,
    pub nonce: Nonce,
    /// Bit of the key inverted for the key-sensitivity row.
    pub sensitivity_bit: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            sequences: GeneratorId::ALL
                .iter()
                .enumerate()
                .map(|(i, &id)| SequenceSpec {
                    name: id.name().to_owned(),
                    source: SequenceSource::Synthetic { id, seed: i as u64 + 1 },
                })
                .collect(),
            width: 352,
            height: 288,
            frames_per_sequence: 12,
            qps: vec![10, 25, 40],
            levels: EncryptionLevel::ALL.to_vec(),
            key: DEFAULT_KEY.parse().unwrap(),
            nonce: DEFAULT_NONCE.parse().unwrap(),
            sensitivity_bit: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |message: String| Err(Error::Config { line: 0, message });
        if self.frames_per_sequence < 2 {
            return bad(format!("frames_per_sequence must be >= 2, got {}", self.frames_per_sequence));
        }
        if let Some(qp) = self.qps.iter().find(|&&q| q > 51) {
            return bad(format!("qp {qp} outside 0..=51"));
        }
        if self.qps.is_empty() || self.levels.is_empty() || self.sequences.is_empty() {
            return bad("qps, levels and sequences must be non-empty".into());
        }
        if self.width == 0 || self.height == 0 || !self.width.is_multiple_of(8) || !self.height.is_multiple_of(8) {
            return bad(format!("dimensions {}x{} must be positive multiples of 8", self.width, self.height));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Other(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        fn list(v: &str) -> Vec<&str> {
            v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
        }
        let mut cfg = ExperimentConfig::default();
        let mut sequences = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Config { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<usize>().map_err(|_| err(format!("bad number {v:?}")));
            match key {
                "width" => cfg.width = num(value)?,
                "height" => cfg.height = num(value)?,
                "frames_per_sequence" => cfg.frames_per_sequence = num(value)?,
                "qps" => {
                    cfg.qps = list(value)
                        .into_iter()
                        .map(|v| v.parse::<u8>().map_err(|_| err(format!("bad qp {v:?}"))))
                        .collect::<Result<_, _>>()?
                }
                "levels" => {
                    cfg.levels = list(value)
                        .into_iter()
                        .map(|v| v.parse::<EncryptionLevel>().map_err(|e| err(e.to_string())))
                        .collect::<Result<_, _>>()?
                }
                "key" => cfg.key = value.parse().map_err(|e: crate::keystream::KeystreamError| err(e.to_string()))?,
                "nonce" => {
                    cfg.nonce = value.parse().map_err(|e: crate::keystream::KeystreamError| err(e.to_string()))?
                }
                "sensitivity_bit" => cfg.sensitivity_bit = num(value)? % 128,
                "sequence" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let seq = match parts.as_slice() {
                        [name, "file", path] => {
                            SequenceSpec { name: name.to_string(), source: SequenceSource::File(PathBuf::from(path)) }
                        }
                        [name, generator, seed] => SequenceSpec {
                            name: name.to_string(),
                            source: SequenceSource::Synthetic {
                                id: generator.parse().map_err(err)?,
                                seed: seed.parse().map_err(|_| err(format!("bad seed {seed:?}")))?,
                            },
                        },
                        _ => return Err(err(format!("bad sequence entry {value:?}"))),
                    };
                    sequences.push(seq);
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        if !sequences.is_empty() {
            cfg.sequences = sequences;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
