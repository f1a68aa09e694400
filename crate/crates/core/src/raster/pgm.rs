//! Binary 8-bit PGM (P5).

use super::GrayImage;
use crate::error::{Error, Result};

pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

/// Reads a P5 file with maxval at most 255. Comments (`#` to end of line)
/// are allowed anywhere in the header.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if !bytes.starts_with(b"P5") {
        return Err(Error::Pgm("missing P5 magic number".into()));
    }
    let mut pos = 2;
    let width = header_number(bytes, &mut pos, "width")?;
    let height = header_number(bytes, &mut pos, "height")?;
    let maxval = header_number(bytes, &mut pos, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Pgm(format!("unsupported maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::Pgm("missing whitespace after maxval".into())),
    }
    let need = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pgm("dimensions overflow".into()))?;
    let data = &bytes[pos..];
    if data.len() < need {
        return Err(Error::Pgm(format!(
            "truncated raster: expected {need} bytes, found {}",
            data.len()
        )));
    }
    let pixels = data[..need]
        .iter()
        .map(|&v| {
            if maxval == 255 {
                v
            } else {
                ((v.min(maxval as u8) as u32 * 255 + maxval as u32 / 2) / maxval as u32) as u8
            }
        })
        .collect();
    GrayImage::new(width, height, pixels).map_err(|e| Error::Pgm(e.to_string()))
}

fn header_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    loop {
        match bytes.get(*pos) {
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(b'#') => {
                while let Some(&b) = bytes.get(*pos) {
                    *pos += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            }
            _ => break,
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Pgm(format!("bad {what} in header")))
}
