//! The scan × frequency dataset and its binary and CSV file formats.
//!
//! Binary layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 12    | magic `SUBSURF-DSET` |
//! | 4     | u32 format version |
//! | 4 + 4 | u32 Q, u32 P |
//! | 5 × 8 | f64 f_start, f_step, x_start, x_step, y_tr |
//! | Q·P·16 | f64 (re, im) pairs, row-major in q |

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scene::{FrequencyGrid, ScanPlan};

pub const DATASET_MAGIC: &[u8; 12] = b"SUBSURF-DSET";
pub const DATASET_VERSION: u32 = 1;
const HEADER_LEN: usize = 12 + 4 + 8 + 5 * 8;

/// Complex field samples `S(r_p, f_q)` stored as a Q × P matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    scan: ScanPlan,
    freq: FrequencyGrid,
    data: Vec<Complex64>,
}

impl Dataset {
    pub fn new(scan: ScanPlan, freq: FrequencyGrid, data: Vec<Complex64>) -> Result<Self> {
        let expected = freq.count() * scan.count();
        if data.len() != expected {
            return Err(Error::invalid(
                "data",
                format!("expected {} × {} = {expected} values, got {}", freq.count(), scan.count(), data.len()),
            ));
        }
        if data.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::invalid("data", "all entries must be finite"));
        }
        Ok(Dataset { scan, freq, data })
    }

    pub fn zeros(scan: ScanPlan, freq: FrequencyGrid) -> Self {
        let data = vec![Complex64::new(0.0, 0.0); scan.count() * freq.count()];
        Dataset { scan, freq, data }
    }

    pub fn scan(&self) -> &ScanPlan {
        &self.scan
    }

    pub fn freq(&self) -> &FrequencyGrid {
        &self.freq
    }

    pub fn q_count(&self) -> usize {
        self.freq.count()
    }

    pub fn p_count(&self) -> usize {
        self.scan.count()
    }

    /// Row-major in q: entry `(q, p)` sits at `q·P + p`.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, q: usize, p: usize) -> Complex64 {
        self.data[q * self.p_count() + p]
    }

    pub fn row(&self, q: usize) -> &[Complex64] {
        let p = self.p_count();
        &self.data[q * p..(q + 1) * p]
    }

    /// Entry-wise sum of two datasets on the same grids.
    pub fn try_add(&self, other: &Dataset) -> Result<Dataset> {
        if self.scan != other.scan || self.freq != other.freq {
            return Err(Error::invalid("dataset", "grids differ"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Dataset {
            scan: self.scan,
            freq: self.freq,
            data,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * self.data.len());
        out.extend_from_slice(DATASET_MAGIC);
        out.extend_from_slice(&DATASET_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.q_count() as u32).to_le_bytes());
        out.extend_from_slice(&(self.p_count() as u32).to_le_bytes());
        for v in [
            self.freq.f_start(),
            self.freq.f_step(),
            self.scan.x_start(),
            self.scan.step(),
            self.scan.y_tr(),
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in &self.data {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::format("header", format!("file has {} bytes, header needs {HEADER_LEN}", bytes.len())));
        }
        if &bytes[..12] != DATASET_MAGIC {
            return Err(Error::format("magic", "not a dataset file"));
        }
        let u32_at = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
        let f64_at = |at: usize| f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        let version = u32_at(12);
        if version != DATASET_VERSION {
            return Err(Error::format("version", format!("unsupported version {version}")));
        }
        let q = u32_at(16) as usize;
        let p = u32_at(20) as usize;
        let fields = ["f_start", "f_step", "x_start", "x_step", "y_tr"];
        let mut values = [0.0; 5];
        for (i, v) in values.iter_mut().enumerate() {
            *v = f64_at(24 + 8 * i);
        }
        let reframe = |field: &str, e: Error| match e {
            Error::Invalid { reason, .. } => Error::format(field.to_owned(), reason),
            other => other,
        };
        let freq = FrequencyGrid::new(values[0], values[1], q).map_err(|e| {
            let field = if q == 0 { "Q" } else if !(values[0] > 0.0) { fields[0] } else { fields[1] };
            reframe(field, e)
        })?;
        let scan = ScanPlan::new(values[2], values[3], p, values[4]).map_err(|e| {
            let field = if p == 0 {
                "P"
            } else if !values[2].is_finite() {
                fields[2]
            } else if !(values[3] > 0.0) {
                fields[3]
            } else {
                fields[4]
            };
            reframe(field, e)
        })?;
        let payload = &bytes[HEADER_LEN..];
        let expected = q.checked_mul(p).and_then(|n| n.checked_mul(16));
        if expected != Some(payload.len()) {
            return Err(Error::format(
                "payload",
                format!("header announces {q} × {p} values but {} bytes follow", payload.len()),
            ));
        }
        let data = payload
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                    f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
                )
            })
            .collect();
        Dataset::new(scan, freq, data).map_err(|e| reframe("payload", e))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }

    /// CSV with header `q,p,f_hz,x_m,re,im`, rows ordered by q then p.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(w, "q,p,f_hz,x_m,re,im").map_err(io)?;
        for q in 0..self.q_count() {
            let f = self.freq.frequency(q);
            for p in 0..self.p_count() {
                let v = self.get(q, p);
                writeln!(w, "{q},{p},{f:?},{:?},{:?},{:?}", self.scan.x(p), v.re, v.im).map_err(io)?;
            }
        }
        w.flush().map_err(io)
    }

    /// Reads the CSV export back. The scan height is not stored in the CSV
    /// and must be supplied.
    pub fn read_csv(path: impl AsRef<Path>, y_tr: f64) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut rows = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = i + 1;
            if i == 0 {
                if line.trim() != "q,p,f_hz,x_m,re,im" {
                    return Err(Error::format("line 1", "expected header q,p,f_hz,x_m,re,im"));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 6 {
                return Err(Error::format(format!("line {lineno}"), format!("expected 6 columns, got {}", cols.len())));
            }
            let idx = |c: usize, name: &str| {
                cols[c].trim().parse::<usize>().map_err(|_| Error::format(format!("line {lineno}, {name}"), "not an index"))
            };
            let num = |c: usize, name: &str| {
                cols[c].trim().parse::<f64>().map_err(|_| Error::format(format!("line {lineno}, {name}"), "not a number"))
            };
            rows.push((idx(0, "q")?, idx(1, "p")?, num(2, "f_hz")?, num(3, "x_m")?, num(4, "re")?, num(5, "im")?));
        }
        let q_count = rows.iter().map(|r| r.0 + 1).max().unwrap_or(0);
        let p_count = rows.iter().map(|r| r.1 + 1).max().unwrap_or(0);
        if q_count * p_count != rows.len() || rows.is_empty() {
            return Err(Error::format("rows", format!("expected a full q × p table, got {} rows", rows.len())));
        }
        let mut data = vec![None; q_count * p_count];
        let mut freqs = vec![f64::NAN; q_count];
        let mut xs = vec![f64::NAN; p_count];
        for &(q, p, f, x, re, im) in &rows {
            if data[q * p_count + p].replace(Complex64::new(re, im)).is_some() {
                return Err(Error::format("rows", format!("duplicate entry q = {q}, p = {p}")));
            }
            freqs[q] = f;
            xs[p] = x;
        }
        let f_step = if q_count > 1 { freqs[1] - freqs[0] } else { 1.0 };
        let x_step = if p_count > 1 { xs[1] - xs[0] } else { 1.0 };
        let freq = FrequencyGrid::new(freqs[0], f_step, q_count)?;
        let scan = ScanPlan::new(xs[0], x_step, p_count, y_tr)?;
        let data = data.into_iter().map(|v| v.expect("table is full")).collect();
        Dataset::new(scan, freq, data)
    }
}
