//! DAT bitmap archive format.
//!
//! ```text
//! <width> <height>\n
//! <row 1: width chars from {'0','1'}>\n
//! ...
//! <row height>\n
//! ```
//!
//! `'0'` is ink and `'1'` is paper. Dimensions are positive decimals without
//! sign or leading zeros, so every accepted file re-serializes to the same
//! bytes.

use super::BinaryImage;
use crate::error::{Error, Result};

pub fn save_dat(img: &BinaryImage) -> Vec<u8> {
    let header = format!("{} {}\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + (img.width() + 1) * img.height());
    out.extend_from_slice(header.as_bytes());
    for y in 0..img.height() {
        out.extend(img.row(y).iter().map(|&fg| if fg { b'0' } else { b'1' }));
        out.push(b'\n');
    }
    out
}

pub fn load_dat(bytes: &[u8]) -> Result<BinaryImage> {
    let mut lines = bytes.split_inclusive(|&b| b == b'\n');
    let header = lines.next().unwrap_or_default();
    let (width, height) = parse_header(header)?;

    let mut mask = Vec::with_capacity(width * height);
    for row in 1..=height {
        let line = row + 1;
        let Some(raw) = lines.next() else {
            return Err(Error::Dat {
                line,
                message: format!("expected {height} rows, found {}", row - 1),
            });
        };
        let body = match raw.strip_suffix(b"\n") {
            Some(body) => body,
            None => {
                return Err(Error::Dat {
                    line,
                    message: "row not terminated by a line feed".into(),
                })
            }
        };
        for (i, &b) in body.iter().enumerate() {
            match b {
                b'0' => mask.push(true),
                b'1' => mask.push(false),
                other => {
                    return Err(Error::DatIllegalChar {
                        line,
                        row,
                        column: i + 1,
                        found: char::from(other),
                    })
                }
            }
        }
        if body.len() != width {
            return Err(Error::Dat {
                line,
                message: format!(
                    "row length mismatch: expected {width}, found {}",
                    body.len()
                ),
            });
        }
    }
    if lines.next().is_some() {
        return Err(Error::Dat {
            line: height + 2,
            message: "unexpected data after last row".into(),
        });
    }
    BinaryImage::new(width, height, mask)
}

fn parse_header(raw: &[u8]) -> Result<(usize, usize)> {
    let bad = |message: &str| Error::Dat {
        line: 1,
        message: format!("malformed header: {message}"),
    };
    let text = raw
        .strip_suffix(b"\n")
        .ok_or_else(|| bad("missing line feed"))?;
    let text = std::str::from_utf8(text).map_err(|_| bad("not ASCII"))?;
    let mut parts = text.split(' ');
    let (Some(w), Some(h), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad("expected \"<width> <height>\""));
    };
    Ok((
        parse_dim(w).ok_or_else(|| bad("bad width"))?,
        parse_dim(h).ok_or_else(|| bad("bad height"))?,
    ))
}

fn parse_dim(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}
