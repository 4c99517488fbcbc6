//! Binary PGM (P5), PPM (P6) and PFM (Pf/PF) readers and writers.
//!
//! Integer formats are normalized to `[0, 1]` by dividing by the file's
//! maxval on load, and quantized with clamp + round-half-up on save. PFM
//! carries IEEE 32-bit floats: samples pass through unchanged apart from the
//! f64 -> f32 conversion at the file boundary, rows are stored bottom-up, and
//! the sign of the scale field encodes endianness (negative = little-endian).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;

/// On-disk sample encodings supported by [`save_image`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaveFormat {
    Pgm8,
    Pgm16,
    Ppm8,
    Ppm16,
    Pfm,
}

impl SaveFormat {
    /// Channel count the format can carry (PFM resolves per image).
    fn accepts_channels(self, channels: usize) -> bool {
        match self {
            SaveFormat::Pgm8 | SaveFormat::Pgm16 => channels == 1,
            SaveFormat::Ppm8 | SaveFormat::Ppm16 => channels == 3,
            SaveFormat::Pfm => channels == 1 || channels == 3,
        }
    }

    /// Picks a format from a path extension, preferring float output.
    pub fn from_extension(path: &Path, channels: usize, deep: bool) -> Result<SaveFormat> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        let format = match ext.as_str() {
            "pgm" => {
                if deep {
                    SaveFormat::Pgm16
                } else {
                    SaveFormat::Pgm8
                }
            }
            "ppm" => {
                if deep {
                    SaveFormat::Ppm16
                } else {
                    SaveFormat::Ppm8
                }
            }
            "pfm" => SaveFormat::Pfm,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unsupported output extension '{other}' (use .pgm, .ppm, or .pfm)"
                )))
            }
        };
        if !format.accepts_channels(channels) {
            return Err(Error::InvalidParameter(format!(
                "{format:?} cannot store a {channels}-channel image"
            )));
        }
        Ok(format)
    }
}

/// Loads a binary PGM/PPM/PFM file, sniffing the magic number.
pub fn load_image(path: &Path) -> Result<Image> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() < 2 {
        return Err(Error::Format("file too short for a magic number".into()));
    }
    match &bytes[..2] {
        b"P5" => load_pnm(&bytes, 1),
        b"P6" => load_pnm(&bytes, 3),
        b"Pf" => load_pfm(&bytes, 1),
        b"PF" => load_pfm(&bytes, 3),
        magic => Err(Error::Format(format!(
            "unsupported magic number {:?}",
            String::from_utf8_lossy(magic)
        ))),
    }
}

/// Saves an image in the requested format. Integer formats clamp to `[0, 1]`
/// and round half up; `load(save(x))` is lossless for PFM up to the f32
/// precision of the format.
pub fn save_image(img: &Image, path: &Path, format: SaveFormat) -> Result<()> {
    if !format.accepts_channels(img.channels()) {
        return Err(Error::InvalidParameter(format!(
            "{format:?} cannot store a {}-channel image",
            img.channels()
        )));
    }
    let mut writer = BufWriter::new(File::create(path)?);
    match format {
        SaveFormat::Pgm8 => write_pnm(img, &mut writer, b"P5", 255),
        SaveFormat::Pgm16 => write_pnm(img, &mut writer, b"P5", 65535),
        SaveFormat::Ppm8 => write_pnm(img, &mut writer, b"P6", 255),
        SaveFormat::Ppm16 => write_pnm(img, &mut writer, b"P6", 65535),
        SaveFormat::Pfm => write_pfm(img, &mut writer),
    }
}

/// Header token scanner: skips whitespace and `#` comments.
struct TokenReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TokenReader<'a> {
    fn new(bytes: &'a [u8], pos: usize) -> Self {
        TokenReader { bytes, pos }
    }

    fn next_token(&mut self) -> Result<&'a str> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format("truncated header".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| Error::Format("non-ascii header token".into()))
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let tok = self.next_token()?;
        tok.parse()
            .map_err(|_| Error::Format(format!("invalid {what}: '{tok}'")))
    }

    /// Consumes the single whitespace byte that separates header and payload.
    fn skip_payload_separator(&mut self) -> Result<usize> {
        if self.pos >= self.bytes.len() || !self.bytes[self.pos].is_ascii_whitespace() {
            return Err(Error::Format("missing separator before payload".into()));
        }
        Ok(self.pos + 1)
    }
}

fn load_pnm(bytes: &[u8], channels: usize) -> Result<Image> {
    let mut tokens = TokenReader::new(bytes, 2);
    let width: usize = tokens.parse("width")?;
    let height: usize = tokens.parse("height")?;
    let maxval: u32 = tokens.parse("maxval")?;
    if maxval < 1 || maxval > 65535 {
        return Err(Error::Format(format!(
            "maxval {maxval} outside supported range 1..=65535"
        )));
    }
    let payload = tokens.skip_payload_separator()?;
    let bytes_per_sample = if maxval > 255 { 2 } else { 1 };
    let n = width
        .checked_mul(height)
        .and_then(|v| v.checked_mul(channels))
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let data = &bytes[payload..];
    if data.len() < n * bytes_per_sample {
        return Err(Error::Format(format!(
            "truncated payload: need {} bytes, have {}",
            n * bytes_per_sample,
            data.len()
        )));
    }
    // Interleaved rows in the file; convert to planar [0,1].
    let mut samples = vec![0.0f64; n];
    let scale = 1.0 / maxval as f64;
    for i in 0..n {
        let raw = if bytes_per_sample == 2 {
            u16::from_be_bytes([data[2 * i], data[2 * i + 1]]) as u32
        } else {
            data[i] as u32
        };
        let (pixel, channel) = (i / channels, i % channels);
        let (x, y) = (pixel % width, pixel / width);
        samples[(channel * height + y) * width + x] = raw as f64 * scale;
    }
    Image::from_planar(width, height, channels, samples)
}

fn write_pnm<W: Write>(img: &Image, writer: &mut W, magic: &[u8], maxval: u32) -> Result<()> {
    writer.write_all(magic)?;
    write!(writer, "\n{} {}\n{}\n", img.width(), img.height(), maxval)?;
    let quantize = |v: f64| -> u32 {
        // Clamp then round half up; `f64::round` rounds half away from zero,
        // which matches for the non-negative clamped range.
        (v.clamp(0.0, 1.0) * maxval as f64).round() as u32
    };
    for y in 0..img.height() {
        for x in 0..img.width() {
            for c in 0..img.channels() {
                let q = quantize(img.get(x, y, c));
                if maxval > 255 {
                    writer.write_all(&(q as u16).to_be_bytes())?;
                } else {
                    writer.write_all(&[q as u8])?;
                }
            }
        }
    }
    Ok(())
}

fn load_pfm(bytes: &[u8], channels: usize) -> Result<Image> {
    let mut tokens = TokenReader::new(bytes, 2);
    let width: usize = tokens.parse("width")?;
    let height: usize = tokens.parse("height")?;
    let scale: f64 = tokens.parse("scale")?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Format(format!("invalid PFM scale {scale}")));
    }
    let little_endian = scale < 0.0;
    let payload = tokens.skip_payload_separator()?;
    let n = width
        .checked_mul(height)
        .and_then(|v| v.checked_mul(channels))
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let data = &bytes[payload..];
    if data.len() < n * 4 {
        return Err(Error::Format(format!(
            "truncated payload: need {} bytes, have {}",
            n * 4,
            data.len()
        )));
    }
    let mut samples = vec![0.0f64; n];
    let mut offset = 0;
    // PFM rows run bottom-up.
    for row in 0..height {
        let y = height - 1 - row;
        for x in 0..width {
            for c in 0..channels {
                let raw = [
                    data[offset],
                    data[offset + 1],
                    data[offset + 2],
                    data[offset + 3],
                ];
                offset += 4;
                let v = if little_endian {
                    f32::from_le_bytes(raw)
                } else {
                    f32::from_be_bytes(raw)
                };
                if !v.is_finite() {
                    return Err(Error::Format(format!(
                        "non-finite PFM sample at ({x}, {y}, {c})"
                    )));
                }
                samples[(c * height + y) * width + x] = v as f64;
            }
        }
    }
    Image::from_planar(width, height, channels, samples)
}

fn write_pfm<W: Write>(img: &Image, writer: &mut W) -> Result<()> {
    let magic = if img.channels() == 3 { "PF" } else { "Pf" };
    // Scale -1.0: little-endian payload, unit sample scale.
    write!(writer, "{magic}\n{} {}\n-1.0\n", img.width(), img.height())?;
    for row in 0..img.height() {
        let y = img.height() - 1 - row;
        for x in 0..img.width() {
            for c in 0..img.channels() {
                let v = img.get(x, y, c) as f32;
                writer.write_all(&v.to_le_bytes())?;
            }
        }
    }
    Ok(())
}
