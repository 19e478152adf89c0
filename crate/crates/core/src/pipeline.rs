//! Whole-sequence encode and decode, parallel across frames.
//!
//! Keystream sites are addressed by frame index, so frames are independent
//! and the output does not depend on scheduling or worker count.

use rayon::prelude::*;

use crate::codec::{decode_frame, encode_frame, QuantParams, SyntaxHooks, IDENTITY_HOOKS};
use crate::encrypt::{make_hooks, CipherDirection, EncryptionLevel};
use crate::frame::FramePlane;
use crate::io::{Container, ContainerHeader};
use crate::keystream::{KeystreamHandle, SecretKey};
use crate::Error;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "MLSE_THREADS";

#[derive(Debug, Clone)]
pub struct EncodedSequence {
    pub container: Container,
    /// Encoder reconstruction per frame (what a keyed decoder reproduces).
    pub recon: Vec<FramePlane>,
    /// Coded bits per frame, excluding byte padding.
    pub bit_lens: Vec<usize>,
}

impl EncodedSequence {
    pub fn total_bits(&self) -> u64 {
        self.bit_lens.iter().map(|&b| b as u64).sum()
    }
}

pub fn encode_sequence(
    frames: &[FramePlane],
    qp: u8,
    level: EncryptionLevel,
    keystream: &KeystreamHandle,
) -> Result<EncodedSequence, Error> {
    let first = frames.first().ok_or(Error::EmptySequence)?;
    let (w, h) = (first.width(), first.height());
    if let Some(f) = frames.iter().find(|f| f.width() != w || f.height() != h) {
        return Err(Error::MixedDimensions { expected: (w, h), found: (f.width(), f.height()) });
    }
    let too_big = |d: usize| u16::try_from(d).is_err();
    if too_big(w) || too_big(h) || u32::try_from(frames.len()).is_err() {
        return Err(Error::TooLarge);
    }
    let q = QuantParams::new(qp)?;
    let hooks = make_hooks(level, keystream, CipherDirection::Encrypt);

    let encoded = frames
        .par_iter()
        .enumerate()
        .map(|(i, f)| encode_frame(f, &q, &hooks, i as u32).map_err(|e| Error::Frame { index: i, source: e }))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = EncodedSequence {
        container: Container {
            header: ContainerHeader {
                width: w as u16,
                height: h as u16,
                frame_count: frames.len() as u32,
                qp,
                level,
                nonce: *keystream.nonce(),
            },
            frames: Vec::with_capacity(frames.len()),
        },
        recon: Vec::with_capacity(frames.len()),
        bit_lens: Vec::with_capacity(frames.len()),
    };
    for e in encoded {
        out.container.frames.push(e.payload);
        out.recon.push(e.recon);
        out.bit_lens.push(e.bit_len);
    }
    Ok(out)
}

/// Decodes every frame. Without a key the stream is decoded as written,
/// which for an encrypted stream is the unauthorized view.
pub fn decode_sequence(container: &Container, key: Option<&SecretKey>) -> Result<Vec<FramePlane>, Error> {
    let hdr = &container.header;
    let q = QuantParams::new(hdr.qp)?;
    let (w, h) = (hdr.width as usize, hdr.height as usize);
    let decode_all = |hooks: &dyn SyntaxHooks| {
        container
            .frames
            .par_iter()
            .enumerate()
            .map(|(i, p)| decode_frame(p, w, h, &q, &hooks, i as u32).map_err(|e| Error::Frame { index: i, source: e }))
            .collect::<Result<Vec<_>, _>>()
    };
    match key {
        Some(key) => {
            let ks = KeystreamHandle::new(*key, hdr.nonce);
            decode_all(&make_hooks(hdr.level, &ks, CipherDirection::Decrypt))
        }
        None => decode_all(&IDENTITY_HOOKS),
    }
}

/// Worker cap from `MLSE_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` on a dedicated pool of `threads` workers (or the global pool).
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("failed to build worker pool").install(f)
        }
        None => f(),
    }
}
