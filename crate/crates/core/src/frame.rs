use thiserror::Error;

/// Block edge length used throughout the codec.
pub const BLOCK: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("dimensions {width}x{height} are not positive multiples of 8")]
    Dimensions { width: usize, height: usize },
    #[error("sample buffer holds {actual} bytes, expected {expected}")]
    BufferSize { expected: usize, actual: usize },
}

/// One 8-bit luma plane, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FramePlane {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl FramePlane {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self, PlaneError> {
        check_dims(width, height)?;
        if samples.len() != width * height {
            return Err(PlaneError::BufferSize { expected: width * height, actual: samples.len() });
        }
        Ok(FramePlane { width, height, samples })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, PlaneError> {
        FramePlane::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self, PlaneError> {
        check_dims(width, height)?;
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Ok(FramePlane { width, height, samples })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.samples[y * self.width + x] = v;
    }

    pub fn blocks_wide(&self) -> usize {
        self.width / BLOCK
    }

    pub fn blocks_high(&self) -> usize {
        self.height / BLOCK
    }

    pub fn block_count(&self) -> usize {
        self.blocks_wide() * self.blocks_high()
    }

    /// Copies out the 8x8 block at block coordinates `(bx, by)`.
    pub fn block(&self, bx: usize, by: usize) -> [[u8; BLOCK]; BLOCK] {
        let mut out = [[0u8; BLOCK]; BLOCK];
        for (r, row) in out.iter_mut().enumerate() {
            let start = (by * BLOCK + r) * self.width + bx * BLOCK;
            row.copy_from_slice(&self.samples[start..start + BLOCK]);
        }
        out
    }

    pub fn put_block(&mut self, bx: usize, by: usize, block: &[[u8; BLOCK]; BLOCK]) {
        for (r, row) in block.iter().enumerate() {
            let start = (by * BLOCK + r) * self.width + bx * BLOCK;
            self.samples[start..start + BLOCK].copy_from_slice(row);
        }
    }
}

fn check_dims(width: usize, height: usize) -> Result<(), PlaneError> {
    if width == 0 || height == 0 || !width.is_multiple_of(BLOCK) || !height.is_multiple_of(BLOCK) {
        return Err(PlaneError::Dimensions { width, height });
    }
    Ok(())
}
