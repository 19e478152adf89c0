//! Site-addressed AES-128 counter-mode keystream.
//!
//! Every syntax element that gets encrypted draws its key material from one
//! 128-bit keystream block, addressed by `(frame, block, purpose)`. The
//! counter block is `nonce (12 bytes) || counter (4 bytes, big-endian)` with
//!
//! ```text
//! counter = frame_idx << 20 | block_idx << 2 | purpose
//! ```
//!
//! so any element can be encrypted or decrypted without consuming the stream
//! in order, and frames can be processed in parallel.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use aes::cipher::generic_array::GenericArray;
use aes::cipher::{BlockEncrypt, KeyInit};
use aes::Aes128;
use rand::RngCore;
use thiserror::Error;

pub const KEY_LEN: usize = 16;
pub const NONCE_LEN: usize = 12;

/// Largest frame index the counter layout can address (exclusive).
pub const MAX_FRAMES: u32 = 1 << 12;
/// Largest block index within a frame the counter layout can address (exclusive).
pub const MAX_BLOCKS_PER_FRAME: u32 = 1 << 18;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KeystreamError {
    #[error("keystream address overflow: frame {frame_idx} block {block_idx} exceeds the counter layout")]
    AddressOverflow { frame_idx: u32, block_idx: u32 },
    #[error("bit count {0} outside 1..=32")]
    BitCount(u32),
    #[error("bit index {0} outside 0..128")]
    BitIndex(usize),
    #[error("invalid hex for {what}: expected {expected} hex chars")]
    Hex { what: &'static str, expected: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SecretKey([u8; KEY_LEN]);

impl SecretKey {
    pub fn new(bytes: [u8; KEY_LEN]) -> Self {
        SecretKey(bytes)
    }

    pub fn generate() -> Self {
        let mut bytes = [0u8; KEY_LEN];
        rand::rngs::OsRng.fill_bytes(&mut bytes);
        SecretKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; KEY_LEN] {
        &self.0
    }

    /// Copy of this key with one bit inverted (bit 0 = MSB of byte 0).
    pub fn with_bit_flipped(&self, bit: usize) -> Self {
        let mut bytes = self.0;
        bytes[(bit / 8) % KEY_LEN] ^= 0x80 >> (bit % 8);
        SecretKey(bytes)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

// Keys never end up in logs by accident.
impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SecretKey(..)")
    }
}

impl FromStr for SecretKey {
    type Err = KeystreamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hex::<KEY_LEN>(s, "key").map(SecretKey)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Nonce([u8; NONCE_LEN]);

impl Nonce {
    pub fn new(bytes: [u8; NONCE_LEN]) -> Self {
        Nonce(bytes)
    }

    pub fn generate() -> Self {
        let mut bytes = [0u8; NONCE_LEN];
        rand::rngs::OsRng.fill_bytes(&mut bytes);
        Nonce(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; NONCE_LEN] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl FromStr for Nonce {
    type Err = KeystreamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hex::<NONCE_LEN>(s, "nonce").map(Nonce)
    }
}

fn parse_hex<const N: usize>(s: &str, what: &'static str) -> Result<[u8; N], KeystreamError> {
    let err = KeystreamError::Hex { what, expected: 2 * N };
    if s.len() != 2 * N {
        return Err(err);
    }
    let mut out = [0u8; N];
    hex::decode_to_slice(s, &mut out).map_err(|_| err)?;
    Ok(out)
}

/// Which syntax element a keystream block is reserved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    IpmMpm = 0,
    IpmRem = 1,
    Sign = 2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeySite {
    pub frame_idx: u32,
    pub block_idx: u32,
    pub purpose: Purpose,
}

impl KeySite {
    pub fn new(frame_idx: u32, block_idx: u32, purpose: Purpose) -> Self {
        KeySite { frame_idx, block_idx, purpose }
    }

    /// The 32-bit counter value for this site.
    pub fn counter(&self) -> Result<u32, KeystreamError> {
        if self.frame_idx >= MAX_FRAMES || self.block_idx >= MAX_BLOCKS_PER_FRAME {
            return Err(KeystreamError::AddressOverflow { frame_idx: self.frame_idx, block_idx: self.block_idx });
        }
        Ok((self.frame_idx << 20) | (self.block_idx << 2) | self.purpose as u32)
    }
}

/// Immutable handle over `(key, nonce)`; all derivations are pure.
pub struct KeystreamHandle {
    key: SecretKey,
    nonce: Nonce,
    cipher: Aes128,
    exhausted_rejections: AtomicU64,
}

impl fmt::Debug for KeystreamHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeystreamHandle").field("nonce", &self.nonce).finish_non_exhaustive()
    }
}

impl Clone for KeystreamHandle {
    fn clone(&self) -> Self {
        KeystreamHandle::new(self.key, self.nonce)
    }
}

impl KeystreamHandle {
    pub fn new(key: SecretKey, nonce: Nonce) -> Self {
        let cipher = Aes128::new(GenericArray::from_slice(key.as_bytes()));
        KeystreamHandle { key, nonce, cipher, exhausted_rejections: AtomicU64::new(0) }
    }

    pub fn key(&self) -> &SecretKey {
        &self.key
    }

    pub fn nonce(&self) -> &Nonce {
        &self.nonce
    }

    /// Encrypts the raw counter block `nonce || counter`.
    pub fn block_for_counter(&self, counter: u32) -> [u8; 16] {
        let mut block = [0u8; 16];
        block[..NONCE_LEN].copy_from_slice(self.nonce.as_bytes());
        block[NONCE_LEN..].copy_from_slice(&counter.to_be_bytes());
        let mut ga = GenericArray::from(block);
        self.cipher.encrypt_block(&mut ga);
        ga.into()
    }

    pub fn derive_site_block(&self, site: KeySite) -> Result<[u8; 16], KeystreamError> {
        Ok(self.block_for_counter(site.counter()?))
    }

    /// First `n` bits of the site block, most significant first.
    pub fn keybits(&self, site: KeySite, n: u32) -> Result<u32, KeystreamError> {
        if !(1..=32).contains(&n) {
            return Err(KeystreamError::BitCount(n));
        }
        let block = self.derive_site_block(site)?;
        Ok(leading_bits(&block, n))
    }

    /// Bit `index` (0 = MSB of byte 0) of the site block.
    pub fn bit_at(&self, site: KeySite, index: usize) -> Result<bool, KeystreamError> {
        if index >= 128 {
            return Err(KeystreamError::BitIndex(index));
        }
        let block = self.derive_site_block(site)?;
        Ok(block[index / 8] & (0x80 >> (index % 8)) != 0)
    }

    /// Uniform draw over {0, 1, 2} by byte-wise rejection of 255.
    pub fn key_uniform3(&self, site: KeySite) -> Result<u8, KeystreamError> {
        let block = self.derive_site_block(site)?;
        match uniform3_from_block(&block) {
            Some(v) => Ok(v),
            None => {
                self.exhausted_rejections.fetch_add(1, Ordering::Relaxed);
                Ok(0)
            }
        }
    }

    /// How many times `key_uniform3` hit an all-0xFF block and fell back to 0.
    pub fn exhausted_rejections(&self) -> u64 {
        self.exhausted_rejections.load(Ordering::Relaxed)
    }
}

pub(crate) fn leading_bits(block: &[u8; 16], n: u32) -> u32 {
    let word = u32::from_be_bytes([block[0], block[1], block[2], block[3]]);
    if n == 32 {
        word
    } else {
        word >> (32 - n)
    }
}

pub(crate) fn uniform3_from_block(block: &[u8; 16]) -> Option<u8> {
    block.iter().find(|&&b| b != 0xFF).map(|&b| b % 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::reference_aes;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn test_handle() -> KeystreamHandle {
        KeystreamHandle::new(
            "000102030405060708090a0b0c0d0e0f".parse().unwrap(),
            "a0a1a2a3a4a5a6a7a8a9aaab".parse().unwrap(),
        )
    }

    // NIST SP 800-38A F.5.1 (CTR-AES128.Encrypt). Initial counter block
    // f0..ff; blocks #2..#4 land on addressable sites of our layout.
    const NIST_KEY: &str = "2b7e151628aed2a6abf7158809cf4f3c";
    const NIST_NONCE: &str = "f0f1f2f3f4f5f6f7f8f9fafb";

    #[test]
    fn nist_ctr_vectors() {
        let h = KeystreamHandle::new(NIST_KEY.parse().unwrap(), NIST_NONCE.parse().unwrap());
        assert_eq!(hex::encode(h.block_for_counter(0xfcfdfeff)), "ec8cdf7398607cb0f2d21675ea9ea1e4");
        let cases = [
            (Purpose::IpmMpm, "362b7c3c6773516318a077d7fc5073ae"),
            (Purpose::IpmRem, "6a2cc3787889374fbeb4c81b17ba6c44"),
            (Purpose::Sign, "e89c399ff0f198c6d40a31db156cabfe"),
        ];
        for (purpose, expect) in cases {
            let site = KeySite::new(0xfcf, 0xdff00 >> 2, purpose);
            assert_eq!(hex::encode(h.derive_site_block(site).unwrap()), expect);
        }
    }

    #[test]
    fn matches_reference_cipher_on_random_sites() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let key: [u8; 16] = rng.gen();
            let nonce: [u8; 12] = rng.gen();
            let h = KeystreamHandle::new(SecretKey::new(key), Nonce::new(nonce));
            let site = KeySite::new(
                rng.gen_range(0..MAX_FRAMES),
                rng.gen_range(0..MAX_BLOCKS_PER_FRAME),
                [Purpose::IpmMpm, Purpose::IpmRem, Purpose::Sign][rng.gen_range(0..3)],
            );
            let counter = ((site.frame_idx as u64) << 20) + ((site.block_idx as u64) << 2) + site.purpose as u64;
            let mut block = [0u8; 16];
            block[..12].copy_from_slice(&nonce);
            block[12..].copy_from_slice(&(counter as u32).to_be_bytes());
            let expect = reference_aes::encrypt_block(&key, &block);
            assert_eq!(h.derive_site_block(site).unwrap(), expect);
        }
    }

    #[test]
    fn deterministic_and_purpose_separated() {
        let h = test_handle();
        let a = KeySite::new(3, 17, Purpose::IpmMpm);
        let b = KeySite::new(3, 17, Purpose::Sign);
        assert_eq!(h.derive_site_block(a).unwrap(), h.derive_site_block(a).unwrap());
        assert_ne!(h.derive_site_block(a).unwrap(), h.derive_site_block(b).unwrap());
    }

    #[test]
    fn address_overflow() {
        let h = test_handle();
        assert!(matches!(
            h.derive_site_block(KeySite::new(MAX_FRAMES, 0, Purpose::Sign)),
            Err(KeystreamError::AddressOverflow { .. })
        ));
        assert!(h.derive_site_block(KeySite::new(0, MAX_BLOCKS_PER_FRAME, Purpose::Sign)).is_err());
        assert!(h.derive_site_block(KeySite::new(MAX_FRAMES - 1, MAX_BLOCKS_PER_FRAME - 1, Purpose::Sign)).is_ok());
    }

    #[test]
    fn counter_layout_is_injective() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let purposes = [Purpose::IpmMpm, Purpose::IpmRem, Purpose::Sign];
        let random_site = |rng: &mut ChaCha8Rng| {
            KeySite::new(
                rng.gen_range(0..MAX_FRAMES),
                rng.gen_range(0..MAX_BLOCKS_PER_FRAME),
                purposes[rng.gen_range(0..3)],
            )
        };
        for _ in 0..100_000 {
            let a = random_site(&mut rng);
            let b = random_site(&mut rng);
            let same = a.counter().unwrap() == b.counter().unwrap();
            assert_eq!(same, a == b);
        }
    }

    #[test]
    fn bit_extraction() {
        let mut block = [0u8; 16];
        block[0] = 0x80;
        assert_eq!(leading_bits(&block, 1), 1);
        block[0] = 0xFF;
        assert_eq!(leading_bits(&block, 5), 31);
        block[..4].copy_from_slice(&[0xde, 0xad, 0xbe, 0xef]);
        assert_eq!(leading_bits(&block, 32), 0xdeadbeef);
        assert_eq!(leading_bits(&block, 12), 0xdea);
    }

    #[test]
    fn keybits_range_checked() {
        let h = test_handle();
        let site = KeySite::new(0, 0, Purpose::IpmRem);
        assert_eq!(h.keybits(site, 0), Err(KeystreamError::BitCount(0)));
        assert_eq!(h.keybits(site, 33), Err(KeystreamError::BitCount(33)));
        let full = h.keybits(site, 32).unwrap();
        assert_eq!(h.keybits(site, 5).unwrap(), full >> 27);
        for i in 0..32 {
            assert_eq!(h.bit_at(site, i).unwrap(), (full >> (31 - i)) & 1 == 1);
        }
        assert!(h.bit_at(site, 128).is_err());
    }

    #[test]
    fn keybits_byte_chi_square() {
        // Oracle: histogram of reference-cipher first bytes.
        let key = *test_handle().key().as_bytes();
        let nonce = *test_handle().nonce().as_bytes();
        let h = test_handle();
        let mut bins = [0u64; 256];
        for i in 0..10_000u32 {
            let site = KeySite::new(i / 1000, i % 1000, Purpose::Sign);
            let v = h.keybits(site, 8).unwrap();
            let mut block = [0u8; 16];
            block[..12].copy_from_slice(&nonce);
            block[12..].copy_from_slice(&site.counter().unwrap().to_be_bytes());
            assert_eq!(v as u8, reference_aes::encrypt_block(&key, &block)[0]);
            bins[v as usize] += 1;
        }
        let expected = 10_000.0 / 256.0;
        let chi2: f64 = bins.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 0.999 quantile of chi-square with 255 degrees of freedom.
        assert!(chi2 < 330.52, "chi2 = {chi2}");
    }

    #[test]
    fn uniform3_rejection() {
        let mut block = [0u8; 16];
        block[0] = 0x05;
        assert_eq!(uniform3_from_block(&block), Some(2));
        block[0] = 0xFF;
        block[1] = 0x00;
        assert_eq!(uniform3_from_block(&block), Some(0));
        assert_eq!(uniform3_from_block(&[0xFF; 16]), None);
    }

    #[test]
    fn uniform3_frequencies() {
        let h = test_handle();
        let mut counts = [0u32; 3];
        for i in 0..30_000u32 {
            let v = h.key_uniform3(KeySite::new(i / 4096, i % 4096, Purpose::IpmMpm)).unwrap();
            counts[v as usize] += 1;
        }
        for c in counts {
            let p = c as f64 / 30_000.0;
            assert!((p - 1.0 / 3.0).abs() <= 0.05 / 3.0, "{counts:?}");
        }
        assert_eq!(h.exhausted_rejections(), 0);
    }

    #[test]
    fn single_bit_key_flips_change_output() {
        let h = test_handle();
        let site = KeySite::new(1, 2, Purpose::IpmMpm);
        let base = h.derive_site_block(site).unwrap();
        for bit in 0..128 {
            let flipped = KeystreamHandle::new(h.key().with_bit_flipped(bit), *h.nonce());
            assert_ne!(flipped.derive_site_block(site).unwrap(), base, "bit {bit}");
        }
    }

    #[test]
    fn hex_parsing() {
        assert!("00".parse::<SecretKey>().is_err());
        assert!("zz0102030405060708090a0b0c0d0e0f".parse::<SecretKey>().is_err());
        let n: Nonce = "a0a1a2a3a4a5a6a7a8a9aaab".parse().unwrap();
        assert_eq!(n.to_hex(), "a0a1a2a3a4a5a6a7a8a9aaab");
    }
}
