//! CAVLC-lite entropy coding of mode syntax and coefficient blocks.
//!
//! Mode syntax: `mpm_flag(1)`, then truncated-unary `mpm_idx` (`0`, `10`,
//! `11`) or a fixed 5-bit `rem_idx`.
//!
//! Coefficient block:
//! 1. `ue(last_pos + 1)`, 0 for an empty block
//! 2. one significance bit per scan position `0..last_pos`
//! 3. `t1_count` (2 bits)
//! 4. one sign bit per trailing one, highest frequency first (1 = positive)
//! 5. remaining nonzeros in reverse scan order: `ue(|level| - 1)` then sign
//!
//! The number and position of nonzero levels never depend on a sign bit, so
//! flipping trailing-one signs leaves the parse and the bit length unchanged.

mod bits;

pub use bits::{BitSink, BitSource};

use thiserror::Error;

use crate::syntax::{CoeffBlock, ModeSyntax, COEFFS, MAX_LEVEL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitstreamError {
    #[error("bitstream exhausted at bit {bit_offset}")]
    Exhausted { bit_offset: usize },
    #[error("exp-Golomb prefix longer than 31 zeros at bit {bit_offset}")]
    BadExpGolomb { bit_offset: usize },
    #[error("corrupt stream at bit {bit_offset}: {reason}")]
    Corrupt { bit_offset: usize, reason: &'static str },
}

impl BitstreamError {
    pub fn bit_offset(&self) -> usize {
        match *self {
            BitstreamError::Exhausted { bit_offset }
            | BitstreamError::BadExpGolomb { bit_offset }
            | BitstreamError::Corrupt { bit_offset, .. } => bit_offset,
        }
    }
}

pub fn write_mode_syntax(sink: &mut BitSink, s: ModeSyntax) {
    debug_assert!(s.is_valid());
    match s {
        ModeSyntax::Mpm { idx } => {
            sink.write_bit(true);
            match idx {
                0 => sink.write_bit(false),
                _ => {
                    sink.write_bit(true);
                    sink.write_bit(idx == 2);
                }
            }
        }
        ModeSyntax::Rem { idx } => {
            sink.write_bit(false);
            sink.write_bits(idx as u32, 5);
        }
    }
}

pub fn read_mode_syntax(src: &mut BitSource<'_>) -> Result<ModeSyntax, BitstreamError> {
    if src.read_bit()? {
        let idx = if !src.read_bit()? {
            0
        } else if !src.read_bit()? {
            1
        } else {
            2
        };
        Ok(ModeSyntax::Mpm { idx })
    } else {
        Ok(ModeSyntax::Rem { idx: src.read_bits(5)? as u8 })
    }
}

pub fn write_coeff_block(sink: &mut BitSink, c: &CoeffBlock) {
    let Some(last) = c.last_pos() else {
        sink.write_exp_golomb(0);
        return;
    };
    sink.write_exp_golomb(last as u32 + 1);
    for &l in &c.levels[..last] {
        sink.write_bit(l != 0);
    }
    let t1 = c.trailing_ones();
    sink.write_bits(t1.len() as u32, 2);
    for &p in &t1 {
        sink.write_bit(c.levels[p] > 0);
    }
    let rest = c.levels[..=last].iter().enumerate().rev().filter(|(_, &l)| l != 0).skip(t1.len());
    for (_, &l) in rest {
        debug_assert!(l.abs() <= MAX_LEVEL);
        sink.write_exp_golomb(l.unsigned_abs() - 1);
        sink.write_bit(l > 0);
    }
}

pub fn read_coeff_block(src: &mut BitSource<'_>) -> Result<CoeffBlock, BitstreamError> {
    let mut block = CoeffBlock::default();
    let start = src.position();
    let n = src.read_exp_golomb()? as usize;
    if n == 0 {
        return Ok(block);
    }
    if n > COEFFS {
        return Err(BitstreamError::Corrupt { bit_offset: start, reason: "last position beyond block" });
    }
    let last = n - 1;
    let mut positions = Vec::with_capacity(n);
    for p in 0..last {
        if src.read_bit()? {
            positions.push(p);
        }
    }
    positions.push(last);

    let t1_at = src.position();
    let t1_count = src.read_bits(2)? as usize;
    if t1_count > positions.len() {
        return Err(BitstreamError::Corrupt { bit_offset: t1_at, reason: "more trailing ones than coefficients" });
    }
    let mut rev = positions.iter().rev();
    for &p in rev.by_ref().take(t1_count) {
        block.levels[p] = if src.read_bit()? { 1 } else { -1 };
    }
    for (k, &p) in rev.enumerate() {
        let at = src.position();
        let mag = src.read_exp_golomb()? as i64 + 1;
        if mag > MAX_LEVEL as i64 {
            return Err(BitstreamError::Corrupt { bit_offset: at, reason: "level magnitude out of range" });
        }
        // A trailing-ones run shorter than 3 must end on a magnitude > 1.
        if k == 0 && t1_count < 3 && mag == 1 {
            return Err(BitstreamError::Corrupt {
                bit_offset: at,
                reason: "trailing-ones count inconsistent with levels",
            });
        }
        let mag = mag as i32;
        block.levels[p] = if src.read_bit()? { mag } else { -mag };
    }
    Ok(block)
}
