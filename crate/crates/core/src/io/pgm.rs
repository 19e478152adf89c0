//! Binary PGM (P5, maxval 255) frame dumps.

use std::fs;
use std::path::Path;

use super::IoError;
use crate::frame::FramePlane;

pub fn encode_pgm(plane: &FramePlane) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", plane.width(), plane.height()).into_bytes();
    out.extend_from_slice(plane.samples());
    out
}

pub fn write_pgm(plane: &FramePlane, path: &Path) -> Result<(), IoError> {
    fs::write(path, encode_pgm(plane)).map_err(|e| IoError::file(path, e))
}

pub fn read_pgm(path: &Path) -> Result<FramePlane, IoError> {
    let data = fs::read(path).map_err(|e| IoError::file(path, e))?;
    decode_pgm(&data)
}

/// Reads the P5 subset this crate writes: whitespace-separated header
/// fields, optional `#` comments, maxval 255.
pub fn decode_pgm(data: &[u8]) -> Result<FramePlane, IoError> {
    let bad = |m: &str| IoError::Pgm(m.to_owned());
    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        while pos < data.len() && (data[pos].is_ascii_whitespace() || data[pos] == b'#') {
            if data[pos] == b'#' {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < data.len() && !data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&data[start..pos]).map_err(|_| bad("non-ascii header"))?);
    }
    if fields[0] != "P5" {
        return Err(bad("not a binary PGM"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad header number"));
    let (w, h, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    if maxval != 255 {
        return Err(bad("only maxval 255 is supported"));
    }
    // exactly one whitespace byte separates header and raster
    let raster = data.get(pos + 1..).ok_or_else(|| bad("missing raster"))?;
    if raster.len() != w * h {
        return Err(IoError::ShortInput { expected: w * h, actual: raster.len() });
    }
    Ok(FramePlane::new(w, h, raster.to_vec())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_8x8_size() {
        let p = FramePlane::filled(8, 8, 42).unwrap();
        let bytes = encode_pgm(&p);
        assert_eq!(&bytes[..11], b"P5\n8 8\n255\n");
        assert_eq!(bytes.len(), 11 + 64);
        assert_eq!(decode_pgm(&bytes).unwrap(), p);
    }

    #[test]
    fn comments_and_errors() {
        let mut data = b"P5\n# dump\n8 8\n255\n".to_vec();
        data.extend_from_slice(&[1; 64]);
        assert_eq!(decode_pgm(&data).unwrap(), FramePlane::filled(8, 8, 1).unwrap());
        assert!(decode_pgm(b"P2\n8 8\n255\n").is_err());
        assert!(decode_pgm(&data[..40]).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.pgm");
        let p = FramePlane::from_fn(24, 16, |x, y| (x * y) as u8).unwrap();
        write_pgm(&p, &path).unwrap();
        assert_eq!(read_pgm(&path).unwrap(), p);
    }
}
