//! Digit files: `text` (decimal digits separated by single spaces) and
//! `varint` (LEB128 count followed by one LEB128 value per digit).

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::gls::Digit;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DigitFormat {
    Text,
    Varint,
}

impl std::str::FromStr for DigitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(DigitFormat::Text),
            "varint" => Ok(DigitFormat::Varint),
            _ => Err(Error::Parse(format!("unknown digit format {s:?}"))),
        }
    }
}

/// Writes digits one by one; `finish` must be called to complete the file.
pub struct DigitWriter<W: Write> {
    out: W,
    format: DigitFormat,
    written: u64,
}

impl<W: Write> DigitWriter<W> {
    /// The varint header needs the final count up front.
    pub fn new(mut out: W, format: DigitFormat, count: u64) -> Result<Self> {
        if format == DigitFormat::Varint {
            write_varint(&mut out, count)?;
        }
        Ok(DigitWriter {
            out,
            format,
            written: 0,
        })
    }

    pub fn push(&mut self, d: Digit) -> Result<()> {
        match self.format {
            DigitFormat::Text => {
                if self.written > 0 {
                    self.out.write_all(b" ")?;
                }
                write!(self.out, "{d}")?;
            }
            DigitFormat::Varint => {
                write_varint(&mut self.out, d)?;
            }
        }
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        if self.format == DigitFormat::Text && self.written > 0 {
            self.out.write_all(b"\n")?;
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn write_digits<W: Write>(out: W, format: DigitFormat, digits: &[Digit]) -> Result<W> {
    let mut w = DigitWriter::new(out, format, digits.len() as u64)?;
    for &d in digits {
        w.push(d)?;
    }
    w.finish()
}

pub fn read_digits<R: BufRead>(mut input: R, format: DigitFormat) -> Result<Vec<Digit>> {
    match format {
        DigitFormat::Text => {
            let mut text = String::new();
            input.read_to_string(&mut text)?;
            text.split_whitespace()
                .enumerate()
                .map(|(i, tok)| {
                    tok.parse::<Digit>()
                        .map_err(|_| Error::Parse(format!("bad digit {tok:?} at position {i}")))
                })
                .collect()
        }
        DigitFormat::Varint => {
            let count = read_varint(&mut input)?
                .ok_or_else(|| Error::Parse("missing digit count".into()))?;
            let mut digits = Vec::with_capacity(count.min(1 << 24) as usize);
            for i in 0..count {
                let d = read_varint(&mut input)?.ok_or_else(|| {
                    Error::Parse(format!("file ends after {i} of {count} digits"))
                })?;
                digits.push(d);
            }
            let mut rest = [0u8; 1];
            if input.read(&mut rest)? != 0 {
                return Err(Error::Parse("trailing bytes after the last digit".into()));
            }
            Ok(digits)
        }
    }
}

fn write_varint<W: Write>(out: &mut W, mut v: u64) -> std::io::Result<()> {
    let mut buf = [0u8; 10];
    let mut i = 0;
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            buf[i] = byte;
            return out.write_all(&buf[..=i]);
        }
        buf[i] = byte | 0x80;
        i += 1;
    }
}

/// `None` at a clean end of input.
fn read_varint<R: Read>(input: &mut R) -> Result<Option<u64>> {
    let mut v: u64 = 0;
    let mut shift = 0;
    let mut byte = [0u8; 1];
    loop {
        if input.read(&mut byte)? == 0 {
            return if shift == 0 {
                Ok(None)
            } else {
                Err(Error::Parse("truncated varint".into()))
            };
        }
        let low = u64::from(byte[0] & 0x7f);
        if shift == 63 && low > 1 || shift > 63 {
            return Err(Error::Parse("varint overflows u64".into()));
        }
        v |= low << shift;
        if byte[0] & 0x80 == 0 {
            return Ok(Some(v));
        }
        shift += 7;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(format: DigitFormat, digits: &[Digit]) -> Vec<u8> {
        let bytes = write_digits(Vec::new(), format, digits).unwrap();
        assert_eq!(read_digits(&bytes[..], format).unwrap(), digits);
        bytes
    }

    #[test]
    fn text_format() {
        assert_eq!(round_trip(DigitFormat::Text, &[1, 2, 10]), b"1 2 10\n");
        assert_eq!(round_trip(DigitFormat::Text, &[]), b"");
        assert!(read_digits(&b"1 x"[..], DigitFormat::Text).is_err());
    }

    #[test]
    fn varint_format() {
        assert_eq!(
            round_trip(DigitFormat::Varint, &[1, 300]),
            vec![2, 1, 0xac, 0x02]
        );
        assert_eq!(round_trip(DigitFormat::Varint, &[]), vec![0]);
        round_trip(DigitFormat::Varint, &[u64::MAX, 1, 127, 128]);
        assert!(read_digits(&[3u8, 1, 2][..], DigitFormat::Varint).is_err());
        assert!(read_digits(&[1u8, 1, 2][..], DigitFormat::Varint).is_err());
        assert!(read_digits(&[][..], DigitFormat::Varint).is_err());
        assert!(read_digits(&[1u8, 0x80][..], DigitFormat::Varint).is_err());
        let overflow = [
            1u8, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0x02,
        ];
        assert!(read_digits(&overflow[..], DigitFormat::Varint).is_err());
    }

    #[test]
    fn format_names() {
        assert_eq!("text".parse::<DigitFormat>().unwrap(), DigitFormat::Text);
        assert!("csv".parse::<DigitFormat>().is_err());
    }
}
