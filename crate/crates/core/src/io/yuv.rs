//! Raw planar 4:2:0 input and output. Only luma is coded; chroma is
//! skipped on read and written as neutral 128 on output.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::IoError;
use crate::frame::FramePlane;

pub fn frame_bytes(width: usize, height: usize) -> usize {
    width * height + 2 * (width / 2) * (height / 2)
}

pub fn read_yuv(path: &Path, width: usize, height: usize, count: usize) -> Result<Vec<FramePlane>, IoError> {
    let data = fs::read(path).map_err(|e| IoError::file(path, e))?;
    parse_yuv(&data, width, height, count)
}

pub fn parse_yuv(data: &[u8], width: usize, height: usize, count: usize) -> Result<Vec<FramePlane>, IoError> {
    let per_frame = frame_bytes(width, height);
    let expected = per_frame * count;
    if data.len() < expected {
        return Err(IoError::ShortInput { expected, actual: data.len() });
    }
    (0..count)
        .map(|i| {
            let luma = &data[i * per_frame..i * per_frame + width * height];
            Ok(FramePlane::new(width, height, luma.to_vec())?)
        })
        .collect()
}

pub fn write_yuv(path: &Path, frames: &[FramePlane]) -> Result<(), IoError> {
    let mut out = Vec::new();
    for f in frames {
        out.extend_from_slice(f.samples());
        out.resize(out.len() + 2 * (f.width() / 2) * (f.height() / 2), 128);
    }
    let mut file = fs::File::create(path).map_err(|e| IoError::file(path, e))?;
    file.write_all(&out).map_err(|e| IoError::file(path, e))
}
