//! Binary sample dumps.
//!
//! Layout: a 32-byte header (`b"GWF1"`, `dim: u32`, `n: u64`, `L: f64`,
//! 8 reserved zero bytes, all little-endian) followed by `n^dim` complex64
//! values (`f32` real part, `f32` imaginary part), row-major.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::signal::{SampleKind, SampledDistribution};

pub const MAGIC: &[u8; 4] = b"GWF1";
pub const HEADER_LEN: usize = 32;

pub fn write_samples<W: Write>(out: &mut W, u: &SampledDistribution) -> Result<()> {
    let g = u.grid();
    let mut header = [0u8; HEADER_LEN];
    header[..4].copy_from_slice(MAGIC);
    header[4..8].copy_from_slice(&(g.dim() as u32).to_le_bytes());
    header[8..16].copy_from_slice(&(g.n() as u64).to_le_bytes());
    header[16..24].copy_from_slice(&g.length().to_le_bytes());
    out.write_all(&header)?;
    let mut body = Vec::with_capacity(8 * u.samples().len());
    for z in u.samples() {
        body.extend_from_slice(&(z.re as f32).to_le_bytes());
        body.extend_from_slice(&(z.im as f32).to_le_bytes());
    }
    out.write_all(&body)?;
    Ok(())
}

pub fn read_samples<R: Read>(input: &mut R, label: &str) -> Result<SampledDistribution> {
    let mut header = [0u8; HEADER_LEN];
    input.read_exact(&mut header).map_err(|e| Error::Format(format!("header: {e}")))?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let dim = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes")) as usize;
    let n = u64::from_le_bytes(header[8..16].try_into().expect("8 bytes")) as usize;
    let length = f64::from_le_bytes(header[16..24].try_into().expect("8 bytes"));
    let grid = Grid::new(dim, n, length / 2.0).map_err(|e| Error::Format(e.to_string()))?;
    let mut body = vec![0u8; 8 * grid.len()];
    input.read_exact(&mut body).map_err(|e| Error::Format(format!("body: {e}")))?;
    let samples = body
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes(c[..4].try_into().expect("4 bytes"));
            let im = f32::from_le_bytes(c[4..].try_into().expect("4 bytes"));
            Complex64::new(re as f64, im as f64)
        })
        .collect();
    SampledDistribution::new(grid, samples, SampleKind::Function, label)
}
