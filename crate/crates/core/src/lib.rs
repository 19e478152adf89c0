//! Intra-only toy video codec with a three-level selective encryption layer.
//!
//! Lightweight encryption scrambles luma intra-mode syntax, medium flips the
//! signs of trailing ±1 transform levels, heavyweight does both. Key material
//! comes from AES-128 in counter mode, addressed per block, so encrypted
//! streams stay fully decodable and a keyed decoder reproduces the encoder's
//! reconstruction bit for bit.
//!
//! ```
//! use mlse::{encode_sequence, decode_sequence, EncryptionLevel, FramePlane};
//! use mlse::keystream::{KeystreamHandle, Nonce, SecretKey};
//!
//! let frame = FramePlane::from_fn(32, 32, |x, y| (x * 7 + y * 3) as u8).unwrap();
//! let key = SecretKey::new([1; 16]);
//! let ks = KeystreamHandle::new(key, Nonce::new([2; 12]));
//! let enc = encode_sequence(&[frame], 25, EncryptionLevel::Heavyweight, &ks).unwrap();
//! let plain = decode_sequence(&enc.container, Some(&key)).unwrap();
//! assert_eq!(plain, enc.recon);
//! ```

pub mod codec;
pub mod encrypt;
pub mod entropy;
pub mod frame;
pub mod harness;
pub mod io;
pub mod keystream;
pub mod metrics;
pub mod pipeline;
pub mod syntax;

#[cfg(test)]
mod testutil;

pub use encrypt::{make_hooks, CipherDirection, EncryptionLevel};
pub use frame::FramePlane;
pub use metrics::MetricsReport;
pub use pipeline::{decode_sequence, encode_sequence, EncodedSequence};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("frame {index}: {source}")]
    Frame {
        index: usize,
        #[source]
        source: codec::CodecError,
    },
    #[error(transparent)]
    Codec(#[from] codec::CodecError),
    #[error(transparent)]
    Io(#[from] io::IoError),
    #[error(transparent)]
    Format(#[from] io::FormatError),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
    #[error(transparent)]
    Keystream(#[from] keystream::KeystreamError),
    #[error(transparent)]
    Plane(#[from] frame::PlaneError),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("sequence has no frames")]
    EmptySequence,
    #[error("frame size {found:?} differs from {expected:?}")]
    MixedDimensions { expected: (usize, usize), found: (usize, usize) },
    #[error("sequence exceeds container limits")]
    TooLarge,
    #[error("{0}")]
    Other(String),
}
