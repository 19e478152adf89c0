//! MSB-first bit writer/reader and order-0 exp-Golomb codes.

use super::BitstreamError;

#[derive(Debug, Default, Clone)]
pub struct BitSink {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitSink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn write_bit(&mut self, bit: bool) {
        if self.bit_len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.last_mut().unwrap();
            *last |= 0x80 >> (self.bit_len % 8);
        }
        self.bit_len += 1;
    }

    /// Writes the low `n` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u32, n: u32) {
        debug_assert!(n <= 32);
        for i in (0..n).rev() {
            self.write_bit((value >> i) & 1 == 1);
        }
    }

    pub fn write_exp_golomb(&mut self, v: u32) {
        assert!(v < 1 << 31, "exp-Golomb value out of range: {v}");
        let code = v + 1;
        let bits = 32 - code.leading_zeros();
        self.write_bits(0, bits - 1);
        self.write_bits(code, bits);
    }

    /// Byte buffer, last byte zero-padded.
    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

#[derive(Debug, Clone)]
pub struct BitSource<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitSource<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitSource { bytes, pos: 0 }
    }

    /// Current read position in bits.
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() * 8 - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool, BitstreamError> {
        let byte = self.bytes.get(self.pos / 8).ok_or(BitstreamError::Exhausted { bit_offset: self.pos })?;
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, n: u32) -> Result<u32, BitstreamError> {
        debug_assert!(n <= 32);
        if (n as usize) > self.remaining() {
            return Err(BitstreamError::Exhausted { bit_offset: self.pos });
        }
        let mut v = 0u32;
        for _ in 0..n {
            v = (v << 1) | self.read_bit()? as u32;
        }
        Ok(v)
    }

    pub fn read_exp_golomb(&mut self) -> Result<u32, BitstreamError> {
        let start = self.pos;
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 31 {
                return Err(BitstreamError::BadExpGolomb { bit_offset: start });
            }
        }
        let rest = self.read_bits(zeros)?;
        Ok(((1u32 << zeros) | rest) - 1)
    }
}
