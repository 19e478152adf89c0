//! Intra-only 8x8 block codec with syntax interception hooks.
//!
//! Each block runs mode decision, residual DCT, quantization and zigzag
//! scan, then writes its mode syntax and coefficient block. Hooks rewrite
//! only what goes on the wire: the encoder reconstructs from the true mode
//! and signs, the decoder applies its hooks to parsed syntax before
//! reconstructing.

mod coder;
pub mod intra;
pub mod quant;
pub mod scan;
pub mod transform;

pub use coder::{decode_frame, encode_frame, reconstruct_block, EncodedFrame};
pub use intra::{build_reference_samples, mpm_list, predict_block, select_mode, ReferenceSamples};
pub use quant::{dequantize, quantize, QuantParams};
pub use scan::{inverse_zigzag, zigzag};
pub use transform::{forward_transform, inverse_transform};

use thiserror::Error;

use crate::entropy::BitstreamError;
use crate::frame::PlaneError;
use crate::keystream::KeystreamError;
use crate::syntax::ModeSyntax;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error(transparent)]
    Bitstream(#[from] BitstreamError),
    #[error(transparent)]
    Keystream(#[from] KeystreamError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("QP {0} outside 0..=51")]
    Qp(u8),
    #[error("quantized level {0} exceeds the coder range")]
    LevelRange(f64),
}

/// Address of one coded block: frame index and raster block index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockSite {
    pub frame_idx: u32,
    pub block_idx: u32,
}

/// Transforms applied to syntax elements on their way to or from the wire.
pub trait SyntaxHooks: Sync {
    fn mode_syntax(&self, site: BlockSite, s: ModeSyntax) -> Result<ModeSyntax, KeystreamError>;

    /// `positive` is the sign flag of trailing one `sign_index` (0 = highest
    /// frequency).
    fn t1_sign(&self, site: BlockSite, sign_index: usize, positive: bool) -> Result<bool, KeystreamError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityHooks;

pub const IDENTITY_HOOKS: IdentityHooks = IdentityHooks;

impl SyntaxHooks for IdentityHooks {
    fn mode_syntax(&self, _: BlockSite, s: ModeSyntax) -> Result<ModeSyntax, KeystreamError> {
        Ok(s)
    }

    fn t1_sign(&self, _: BlockSite, _: usize, positive: bool) -> Result<bool, KeystreamError> {
        Ok(positive)
    }
}

impl<H: SyntaxHooks + ?Sized> SyntaxHooks for &H {
    fn mode_syntax(&self, site: BlockSite, s: ModeSyntax) -> Result<ModeSyntax, KeystreamError> {
        (**self).mode_syntax(site, s)
    }

    fn t1_sign(&self, site: BlockSite, sign_index: usize, positive: bool) -> Result<bool, KeystreamError> {
        (**self).t1_sign(site, sign_index, positive)
    }
}
