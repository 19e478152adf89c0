//! `MLSE` container: a 32-byte header followed by length-prefixed frame
//! payloads in display order.
//!
//! ```text
//! off  size  field
//!   0     4  magic "MLSE"
//!   4     1  version (1)
//!   5     2  width   (big-endian)
//!   7     2  height  (big-endian)
//!   9     4  frame count (big-endian)
//!  13     1  qp
//!  14     1  level (0 none, 1 light, 2 medium, 3 heavy)
//!  15    12  nonce
//!  27     5  reserved, zero
//! ```
//!
//! Each frame: 4-byte big-endian payload length, then the payload.

use thiserror::Error;

use crate::codec::quant::MAX_QP;
use crate::encrypt::EncryptionLevel;
use crate::frame::BLOCK;
use crate::keystream::{Nonce, NONCE_LEN};

pub const MAGIC: [u8; 4] = *b"MLSE";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("format error at byte {offset}: {reason}")]
pub struct FormatError {
    pub offset: usize,
    pub reason: String,
}

impl FormatError {
    fn new(offset: usize, reason: impl Into<String>) -> Self {
        FormatError { offset, reason: reason.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerHeader {
    pub width: u16,
    pub height: u16,
    pub frame_count: u32,
    pub qp: u8,
    pub level: EncryptionLevel,
    pub nonce: Nonce,
}

impl ContainerHeader {
    fn validate(&self, offset: usize) -> Result<(), FormatError> {
        let ok = |d: u16| d > 0 && (d as usize).is_multiple_of(BLOCK);
        if !ok(self.width) || !ok(self.height) {
            return Err(FormatError::new(
                offset + 5,
                format!("dimensions {}x{} not positive multiples of 8", self.width, self.height),
            ));
        }
        if self.qp > MAX_QP {
            return Err(FormatError::new(offset + 13, format!("qp {} out of range", self.qp)));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5..7].copy_from_slice(&self.width.to_be_bytes());
        out[7..9].copy_from_slice(&self.height.to_be_bytes());
        out[9..13].copy_from_slice(&self.frame_count.to_be_bytes());
        out[13] = self.qp;
        out[14] = self.level.code();
        out[15..15 + NONCE_LEN].copy_from_slice(self.nonce.as_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < HEADER_LEN {
            return Err(FormatError::new(
                bytes.len(),
                format!("header truncated ({} of {HEADER_LEN} bytes)", bytes.len()),
            ));
        }
        if bytes[0..4] != MAGIC {
            return Err(FormatError::new(0, "bad magic"));
        }
        if bytes[4] != VERSION {
            return Err(FormatError::new(4, format!("unsupported version {}", bytes[4])));
        }
        let level = EncryptionLevel::from_code(bytes[14])
            .ok_or_else(|| FormatError::new(14, format!("unknown level code {}", bytes[14])))?;
        if bytes[27..HEADER_LEN].iter().any(|&b| b != 0) {
            return Err(FormatError::new(27, "reserved bytes not zero"));
        }
        let header = ContainerHeader {
            width: u16::from_be_bytes([bytes[5], bytes[6]]),
            height: u16::from_be_bytes([bytes[7], bytes[8]]),
            frame_count: u32::from_be_bytes([bytes[9], bytes[10], bytes[11], bytes[12]]),
            qp: bytes[13],
            level,
            nonce: Nonce::new(bytes[15..27].try_into().unwrap()),
        };
        header.validate(0)?;
        Ok(header)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub header: ContainerHeader,
    pub frames: Vec<Vec<u8>>,
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        debug_assert_eq!(self.header.frame_count as usize, self.frames.len());
        let total = HEADER_LEN + self.frames.iter().map(|f| 4 + f.len()).sum::<usize>();
        let mut out = Vec::with_capacity(total);
        out.extend_from_slice(&self.header.to_bytes());
        for f in &self.frames {
            out.extend_from_slice(&(f.len() as u32).to_be_bytes());
            out.extend_from_slice(f);
        }
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, FormatError> {
        let header = ContainerHeader::parse(bytes)?;
        let mut pos = HEADER_LEN;
        // Each frame needs at least its length field; bound the allocation.
        let max_frames = (bytes.len() - HEADER_LEN) / 4;
        if header.frame_count as usize > max_frames {
            return Err(FormatError::new(
                9,
                format!("frame count {} cannot fit in {} bytes", header.frame_count, bytes.len()),
            ));
        }
        let mut frames = Vec::with_capacity(header.frame_count as usize);
        for i in 0..header.frame_count {
            let len_bytes =
                bytes.get(pos..pos + 4).ok_or_else(|| FormatError::new(pos, format!("frame {i} length truncated")))?;
            let len = u32::from_be_bytes(len_bytes.try_into().unwrap()) as usize;
            pos += 4;
            let end = pos
                .checked_add(len)
                .filter(|&e| e <= bytes.len())
                .ok_or_else(|| FormatError::new(pos - 4, format!("frame {i} length {len} exceeds file")))?;
            frames.push(bytes[pos..end].to_vec());
            pos = end;
        }
        if pos != bytes.len() {
            return Err(FormatError::new(pos, format!("{} trailing bytes", bytes.len() - pos)));
        }
        Ok(Container { header, frames })
    }
}
