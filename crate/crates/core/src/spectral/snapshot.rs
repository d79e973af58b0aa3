//! Field snapshot files: magic `ZKF1`, `n` as u32, `L` as f64, then `n³`
//! f64 samples, all little-endian, x1 fastest.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::field::RealField;
use super::grid::Grid3;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"ZKF1";

pub fn encode(f: &RealField) -> Vec<u8> {
    let mut buf = Vec::with_capacity(16 + 8 * f.samples().len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(f.grid().n() as u32).to_le_bytes());
    buf.extend_from_slice(&f.grid().length().to_le_bytes());
    for v in f.samples() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf
}

pub fn decode(bytes: &[u8]) -> std::result::Result<RealField, String> {
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err("missing ZKF1 header".into());
    }
    let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let length = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let grid = Grid3::new(n, length).map_err(|e| e.to_string())?;
    let body = &bytes[16..];
    if body.len() != 8 * grid.len() {
        return Err(format!("expected {} sample bytes, found {}", 8 * grid.len(), body.len()));
    }
    let data = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    RealField::new(grid, data).map_err(|e| e.to_string())
}

pub fn write_snapshot(path: &Path, f: &RealField) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(&encode(f))?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<RealField> {
    let bytes = fs::read(path)?;
    decode(&bytes).map_err(|reason| Error::Snapshot { path: path.to_path_buf(), reason })
}
