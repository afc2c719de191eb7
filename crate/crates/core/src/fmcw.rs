//! FMCW chirp model: synthesis of the dechirped IF signal and the mapping of
//! IF samples onto the solver's frequency grid.

use std::f64::consts::PI;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scene::{paper, FrequencyGrid, ScanPlan};
use crate::solver::Dataset;

/// Linear chirp `f(t) = f₀ + Kt` sampled every `dt` for `n` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarParams {
    pub f0: f64,
    /// Chirp slope (Hz/s).
    pub slope: f64,
    /// IF sampling interval (s).
    pub dt: f64,
    pub n: usize,
    pub a0: f64,
    pub phi0: f64,
}

impl RadarParams {
    /// 77.2 GHz start, 70.3125 MHz/µs slope, 5 MS/s, 256 samples, so one IF
    /// sample advances the frequency by 14.0625 MHz.
    pub fn paper() -> Self {
        RadarParams {
            f0: paper::F_START,
            slope: 70.3125e12,
            dt: 200e-9,
            n: paper::F_COUNT,
            a0: 1.0,
            phi0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f0.is_finite() && self.f0 > 0.0) {
            return Err(Error::invalid("f0", "must be > 0"));
        }
        if !(self.slope.is_finite() && self.slope > 0.0) {
            return Err(Error::invalid("slope", "must be > 0"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid("dt", "must be > 0"));
        }
        if self.n == 0 {
            return Err(Error::invalid("n", "must be >= 1"));
        }
        if !self.a0.is_finite() {
            return Err(Error::invalid("a0", "must be finite"));
        }
        Ok(())
    }

    /// Frequency step between consecutive IF samples, `K·Δt`.
    pub fn frequency_step(&self) -> f64 {
        self.slope * self.dt
    }

    pub fn frequency_grid(&self) -> Result<FrequencyGrid> {
        self.validate()?;
        FrequencyGrid::new(self.f0, self.frequency_step(), self.n)
    }
}

/// A point echo with attenuation `sigma` and two-way delay `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflector {
    pub sigma: f64,
    pub tau: f64,
}

impl Reflector {
    pub fn new(sigma: f64, tau: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::invalid("sigma", "must be finite and >= 0"));
        }
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::invalid("tau", "must be finite and >= 0"));
        }
        Ok(Reflector { sigma, tau })
    }
}

/// `s[n] = Σ (A₀²/2) σ e^{j2πτ(K n Δt + f₀)}` over the reflectors.
pub fn if_signal(params: &RadarParams, reflectors: &[Reflector]) -> Vec<Complex64> {
    let gain = 0.5 * params.a0 * params.a0;
    (0..params.n)
        .map(|n| {
            let f = params.f0 + n as f64 * params.frequency_step();
            reflectors
                .iter()
                .map(|r| gain * r.sigma * Complex64::from_polar(1.0, 2.0 * PI * r.tau * f))
                .sum()
        })
        .collect()
}

/// Frequency probed by IF sample `n`, `f₀ + K n Δt`.
pub fn sample_frequency(params: &RadarParams, n: usize) -> Result<f64> {
    if n >= params.n {
        return Err(Error::invalid("n", format!("sample index {n} out of range 0..{}", params.n)));
    }
    Ok(params.f0 + n as f64 * params.frequency_step())
}

/// Re-expresses `P` IF sequences of length `N` as a dataset on the frequency
/// grid implied by `params`.
///
/// The IF model carries the two-way phase as `e^{+j2kd}` whereas the solver
/// produces `e^{−j2kd}`, so the samples are conjugated on the way in; both
/// sources then focus with the same backprojection.
pub fn dataset_from_if_cube(cube: &[Vec<Complex64>], params: &RadarParams, scan: &ScanPlan) -> Result<Dataset> {
    params.validate()?;
    if cube.len() != scan.count() {
        return Err(Error::invalid(
            "cube",
            format!("{} IF sequences for {} scan positions", cube.len(), scan.count()),
        ));
    }
    if let Some((p, seq)) = cube.iter().enumerate().find(|(_, s)| s.len() != params.n) {
        return Err(Error::invalid(
            "cube",
            format!("sequence {p} has {} samples, expected {}", seq.len(), params.n),
        ));
    }
    let (q_count, p_count) = (params.n, cube.len());
    let mut data = Vec::with_capacity(q_count * p_count);
    for q in 0..q_count {
        data.extend(cube.iter().map(|seq| seq[q].conj()));
    }
    Dataset::new(*scan, params.frequency_grid()?, data)
}

/// Writes an IF cube as CSV with header `p,n,re,im`.
pub fn write_if_csv(cube: &[Vec<Complex64>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "p,n,re,im").map_err(io)?;
    for (p, seq) in cube.iter().enumerate() {
        for (n, v) in seq.iter().enumerate() {
            writeln!(w, "{p},{n},{:?},{:?}", v.re, v.im).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// Reads a raw-IF CSV; rows must be sorted by `(p, n)` with no gaps.
pub fn read_if_csv(path: impl AsRef<Path>) -> Result<Vec<Vec<Complex64>>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut cube: Vec<Vec<Complex64>> = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = i + 1;
        if i == 0 {
            if line.trim() != "p,n,re,im" {
                return Err(Error::format("line 1", "expected header p,n,re,im"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(Error::format(format!("line {lineno}"), format!("expected 4 columns, got {}", cols.len())));
        }
        let bad = |name: &str| Error::format(format!("line {lineno}, {name}"), "unparseable value");
        let p: usize = cols[0].parse().map_err(|_| bad("p"))?;
        let n: usize = cols[1].parse().map_err(|_| bad("n"))?;
        let re: f64 = cols[2].parse().map_err(|_| bad("re"))?;
        let im: f64 = cols[3].parse().map_err(|_| bad("im"))?;
        if p == cube.len() && n == 0 {
            cube.push(Vec::new());
        }
        let current = cube.len();
        match cube.last_mut() {
            Some(seq) if p + 1 == current && n == seq.len() => seq.push(Complex64::new(re, im)),
            _ => {
                return Err(Error::format(
                    format!("line {lineno}"),
                    format!("rows must be sorted by (p, n) without gaps; found p = {p}, n = {n}"),
                ))
            }
        }
    }
    if cube.is_empty() {
        return Err(Error::format("rows", "no IF samples"));
    }
    Ok(cube)
}
