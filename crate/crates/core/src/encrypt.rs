//! Three-level selective encryption expressed as codec syntax hooks.
//!
//! * Lightweight: luma intra mode syntax. MPM hits get `(idx + k) mod 3`
//!   with `k` uniform over {0, 1, 2}; remainder ranks get `idx ^ k5`.
//! * Medium: trailing-ones sign bits, `sign ^ k1`.
//! * Heavyweight: both.
//!
//! Key material comes from the site-addressed keystream, so the decoder needs
//! no side information beyond the key, the nonce and the level.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::codec::{BlockSite, SyntaxHooks};
use crate::keystream::{KeySite, KeystreamError, KeystreamHandle, Purpose};
use crate::syntax::ModeSyntax;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EncryptionLevel {
    None = 0,
    Lightweight = 1,
    Medium = 2,
    Heavyweight = 3,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown encryption level {0:?} (expected none, light, medium or heavy)")]
pub struct UnknownLevel(pub String);

impl EncryptionLevel {
    pub const ALL: [EncryptionLevel; 4] =
        [EncryptionLevel::None, EncryptionLevel::Lightweight, EncryptionLevel::Medium, EncryptionLevel::Heavyweight];

    pub fn encrypts_modes(self) -> bool {
        matches!(self, EncryptionLevel::Lightweight | EncryptionLevel::Heavyweight)
    }

    pub fn encrypts_signs(self) -> bool {
        matches!(self, EncryptionLevel::Medium | EncryptionLevel::Heavyweight)
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            EncryptionLevel::None => "none",
            EncryptionLevel::Lightweight => "light",
            EncryptionLevel::Medium => "medium",
            EncryptionLevel::Heavyweight => "heavy",
        }
    }
}

impl fmt::Display for EncryptionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncryptionLevel {
    type Err = UnknownLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| UnknownLevel(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CipherDirection {
    Encrypt,
    Decrypt,
}

pub fn encrypt_mpm_idx(idx: u8, k3: u8) -> u8 {
    debug_assert!(idx < 3 && k3 < 3);
    (idx + k3) % 3
}

pub fn decrypt_mpm_idx(idx: u8, k3: u8) -> u8 {
    debug_assert!(idx < 3 && k3 < 3);
    (idx + 3 - k3) % 3
}

/// Self-inverse.
pub fn encrypt_rem_idx(idx: u8, k5: u8) -> u8 {
    debug_assert!(idx < 32 && k5 < 32);
    idx ^ k5
}

/// Self-inverse; `true` = positive.
pub fn encrypt_t1_sign(sign: bool, k1: bool) -> bool {
    sign ^ k1
}

/// Hooks for one level, keystream and direction.
#[derive(Debug)]
pub struct SelectiveCipher<'a> {
    level: EncryptionLevel,
    keystream: &'a KeystreamHandle,
    direction: CipherDirection,
}

pub fn make_hooks(
    level: EncryptionLevel,
    keystream: &KeystreamHandle,
    direction: CipherDirection,
) -> SelectiveCipher<'_> {
    SelectiveCipher { level, keystream, direction }
}

impl SelectiveCipher<'_> {
    pub fn level(&self) -> EncryptionLevel {
        self.level
    }

    pub fn direction(&self) -> CipherDirection {
        self.direction
    }
}

fn key_site(site: BlockSite, purpose: Purpose) -> KeySite {
    KeySite::new(site.frame_idx, site.block_idx, purpose)
}

impl SyntaxHooks for SelectiveCipher<'_> {
    fn mode_syntax(&self, site: BlockSite, s: ModeSyntax) -> Result<ModeSyntax, KeystreamError> {
        if !self.level.encrypts_modes() {
            return Ok(s);
        }
        Ok(match s {
            ModeSyntax::Mpm { idx } => {
                let k3 = self.keystream.key_uniform3(key_site(site, Purpose::IpmMpm))?;
                let idx = match self.direction {
                    CipherDirection::Encrypt => encrypt_mpm_idx(idx, k3),
                    CipherDirection::Decrypt => decrypt_mpm_idx(idx, k3),
                };
                ModeSyntax::Mpm { idx }
            }
            ModeSyntax::Rem { idx } => {
                let k5 = self.keystream.keybits(key_site(site, Purpose::IpmRem), 5)? as u8;
                ModeSyntax::Rem { idx: encrypt_rem_idx(idx, k5) }
            }
        })
    }

    fn t1_sign(&self, site: BlockSite, sign_index: usize, positive: bool) -> Result<bool, KeystreamError> {
        if !self.level.encrypts_signs() {
            return Ok(positive);
        }
        let k1 = self.keystream.bit_at(key_site(site, Purpose::Sign), sign_index)?;
        Ok(encrypt_t1_sign(positive, k1))
    }
}
