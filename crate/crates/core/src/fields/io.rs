//! Flat binary field format: a 32-byte header followed by little-endian `(re, im)` f64 pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex;

use super::{GridSpec, SampledField};
use crate::error::{Result, SsopsError};
use crate::scalar::Real;

pub const MAGIC: &[u8; 8] = b"SSOPFLD1";
pub const HEADER_LEN: usize = 32;

pub fn write_field<T: Real, W: Write>(field: &SampledField<T>, mut out: W) -> Result<()> {
    let grid = &field.grid;
    let mut header = [0u8; HEADER_LEN];
    header[..8].copy_from_slice(MAGIC);
    header[8..12].copy_from_slice(&(grid.n as u32).to_le_bytes());
    header[12..16].copy_from_slice(&(grid.points_per_axis as u32).to_le_bytes());
    header[16..24].copy_from_slice(&grid.half_width.to_f64_lossy().to_le_bytes());
    out.write_all(&header)?;
    let mut buf = Vec::with_capacity(field.values.len() * 16);
    for v in &field.values {
        buf.extend_from_slice(&v.re.to_f64_lossy().to_le_bytes());
        buf.extend_from_slice(&v.im.to_f64_lossy().to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_field<T: Real, R: Read>(mut input: R) -> Result<SampledField<T>> {
    let mut header = [0u8; HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|e| SsopsError::Format(format!("truncated header: {e}")))?;
    if &header[..8] != MAGIC {
        return Err(SsopsError::Format("bad magic; not a field file".into()));
    }
    let word = |r: std::ops::Range<usize>| u32::from_le_bytes(header[r].try_into().expect("4 bytes")) as usize;
    let n = word(8..12);
    let points = word(12..16);
    let half_width = f64::from_le_bytes(header[16..24].try_into().expect("8 bytes"));
    if header[24..32].iter().any(|&b| b != 0) {
        return Err(SsopsError::Format("reserved header bytes are not zero".into()));
    }
    let grid = GridSpec::new(n, points, T::lit(half_width)).map_err(|e| SsopsError::Format(e.to_string()))?;
    let mut body = Vec::new();
    input.read_to_end(&mut body)?;
    if body.len() != grid.len() * 16 {
        return Err(SsopsError::Format(format!(
            "expected {} payload bytes, found {}",
            grid.len() * 16,
            body.len()
        )));
    }
    let values = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    SampledField::new(grid, values)
}

pub fn save_field<T: Real>(field: &SampledField<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_field(field, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn load_field<T: Real>(path: impl AsRef<Path>) -> Result<SampledField<T>> {
    read_field(BufReader::new(File::open(path)?))
}
