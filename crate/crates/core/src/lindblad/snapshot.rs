//! Binary density-matrix snapshots.
//!
//! Layout, all little-endian: `u64` dimension N, `u64` step index, then N*N
//! complex entries in row-major order, each as two `f64` (re, im).

use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HEADER_BYTES: usize = 16;

pub fn write_snapshot<W: Write>(mut out: W, step: u64, matrix: &DMatrix<Complex64>) -> std::io::Result<()> {
    let n = matrix.nrows();
    let mut buf = Vec::with_capacity(HEADER_BYTES + 16 * n * n);
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    buf.extend_from_slice(&step.to_le_bytes());
    for r in 0..n {
        for c in 0..n {
            let z = matrix[(r, c)];
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out.write_all(&buf)
}

/// Returns (step index, matrix).
pub fn read_snapshot<R: Read>(mut input: R) -> Result<(u64, DMatrix<Complex64>)> {
    let bad = |m: String| Error::Numeric(format!("snapshot: {m}"));
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|e| bad(e.to_string()))?;
    if bytes.len() < HEADER_BYTES {
        return Err(bad("truncated header".into()));
    }
    let word = |k: usize| u64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().unwrap());
    let n = usize::try_from(word(0)).map_err(|_| bad("dimension overflow".into()))?;
    let step = word(1);
    let expected = n
        .checked_mul(n)
        .and_then(|m| m.checked_mul(16))
        .and_then(|m| m.checked_add(HEADER_BYTES))
        .ok_or_else(|| bad("dimension overflow".into()))?;
    if bytes.len() != expected {
        return Err(bad(format!(
            "expected {expected} bytes for N = {n}, found {}",
            bytes.len()
        )));
    }
    let f = |k: usize| {
        let off = HEADER_BYTES + 8 * k;
        f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap())
    };
    let m = DMatrix::from_fn(n, n, |r, c| {
        let k = 2 * (r * n + c);
        Complex64::new(f(k), f(k + 1))
    });
    Ok((step, m))
}
