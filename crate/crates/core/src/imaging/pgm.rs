use crate::error::{Error, Result};
use crate::imaging::GrayImage;

/// Reads a PGM image, binary (P5) or ASCII (P2), maxval up to 65535.
/// Sample values map to [0, 1] by division by maxval.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor { bytes, pos: 0 };
    let (magic_off, magic) = cur.token("magic number")?;
    let binary = match magic.as_str() {
        "P5" => true,
        "P2" => false,
        other => {
            return Err(Error::Parse {
                offset: magic_off,
                message: format!("unsupported magic `{other}`, expected P5 or P2"),
            })
        }
    };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(Error::Parse {
            offset: magic_off,
            message: format!("degenerate dimensions {width}x{height}"),
        });
    }
    let maxval = cur.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Parse {
            offset: cur.pos,
            message: format!("maxval {maxval} outside 1..=65535"),
        });
    }

    let count = width * height;
    let mut pixels = Vec::with_capacity(count);
    if binary {
        // Exactly one whitespace byte separates the header from the payload.
        cur.expect_single_whitespace()?;
        let wide = maxval > 255;
        let sample_bytes = if wide { 2 } else { 1 };
        let need = count * sample_bytes;
        if cur.bytes.len() - cur.pos < need {
            return Err(Error::Parse {
                offset: cur.bytes.len(),
                message: format!(
                    "payload truncated: need {need} bytes, have {}",
                    cur.bytes.len() - cur.pos
                ),
            });
        }
        for i in 0..count {
            let at = cur.pos + i * sample_bytes;
            let raw = if wide {
                u16::from_be_bytes([cur.bytes[at], cur.bytes[at + 1]]) as usize
            } else {
                cur.bytes[at] as usize
            };
            if raw > maxval {
                return Err(Error::Parse {
                    offset: at,
                    message: format!("sample {raw} exceeds maxval {maxval}"),
                });
            }
            pixels.push(raw as f64 / maxval as f64);
        }
    } else {
        for _ in 0..count {
            let v = cur.number("pixel")?;
            if v > maxval {
                return Err(Error::Parse {
                    offset: cur.pos,
                    message: format!("sample {v} exceeds maxval {maxval}"),
                });
            }
            pixels.push(v as f64 / maxval as f64);
        }
    }
    GrayImage::new(width, height, pixels)
}

/// Writes binary P5 with maxval 255. Quantization rounds half away from
/// zero, so a read-back differs from the original by at most 1/510 per
/// pixel.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(
        img.pixels()
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_filler(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self, what: &str) -> Result<(usize, String)> {
        self.skip_filler();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse {
                offset: start,
                message: format!("unexpected end of input, wanted {what}"),
            });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| Error::Parse {
            offset: start,
            message: format!("non-ascii {what}"),
        })?;
        Ok((start, text.to_string()))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let (off, tok) = self.token(what)?;
        tok.parse().map_err(|_| Error::Parse {
            offset: off,
            message: format!("bad {what} `{tok}`"),
        })
    }

    fn expect_single_whitespace(&mut self) -> Result<()> {
        if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse {
                offset: self.pos,
                message: "expected whitespace before binary payload".into(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_single_pixel() {
        let img = read_pgm(b"P2 1 1 255 128").unwrap();
        assert_eq!(img.width(), 1);
        assert_eq!(img.height(), 1);
        assert!((img.get(0, 0) - 128.0 / 255.0).abs() < 1e-15);
    }

    #[test]
    fn binary_round_trip_error_bound() {
        let img = GrayImage::from_fn(9, 7, |r, c| ((r * 13 + c * 29) % 101) as f64 / 100.0)
            .unwrap();
        let bytes = write_pgm(&img);
        let back = read_pgm(&bytes).unwrap();
        assert_eq!(back.width(), 9);
        assert_eq!(back.height(), 7);
        for (a, b) in img.pixels().iter().zip(back.pixels()) {
            assert!((a - b).abs() <= 1.0 / 510.0 + 1e-12);
        }
        // Quantization is stable: a second trip is exact.
        assert_eq!(write_pgm(&back), bytes);
    }

    #[test]
    fn comments_in_header_are_skipped() {
        let img = read_pgm(b"P2\n# produced by hand\n2 1\n# another\n10\n5 10").unwrap();
        assert_eq!(img.pixels(), &[0.5, 1.0]);
    }

    #[test]
    fn sixteen_bit_binary_samples() {
        let mut data = b"P5 2 1 65535\n".to_vec();
        data.extend_from_slice(&32767u16.to_be_bytes());
        data.extend_from_slice(&65535u16.to_be_bytes());
        let img = read_pgm(&data).unwrap();
        assert!((img.get(0, 0) - 32767.0 / 65535.0).abs() < 1e-12);
        assert_eq!(img.get(0, 1), 1.0);
    }

    #[test]
    fn truncated_binary_payload_is_a_parse_error() {
        let data = b"P5 2 2 255\n\x01\x02";
        match read_pgm(data) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("truncated")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_magic_rejected() {
        assert!(read_pgm(b"P6 1 1 255 \x00\x00\x00").is_err());
        assert!(read_pgm(b"").is_err());
    }

    #[test]
    fn ascii_sample_above_maxval_rejected() {
        assert!(read_pgm(b"P2 1 1 100 101").is_err());
    }

    #[test]
    fn write_rounds_half_away_from_zero() {
        // 0.5 / 255 * 255 = 0.5 exactly: rounds up to 1, not to even 0.
        let img = GrayImage::new(1, 1, vec![0.5 / 255.0]).unwrap();
        let bytes = write_pgm(&img);
        assert_eq!(*bytes.last().unwrap(), 1u8);
    }
}
