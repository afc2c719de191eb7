//! Matched-filter backprojection of a scan × frequency dataset onto a
//! Cartesian pixel grid, with straight-line free-space ranges throughout.

mod export;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{free_space_wavenumber, SPEED_OF_LIGHT};
use crate::scene::{FrequencyGrid, ScanPlan};
use crate::solver::Dataset;

pub use export::{read_image_csv, write_image_csv, write_pgm, ImageMeta};

const LANES: usize = 4;

/// Default pixel pitch along the scan direction (m).
pub const DEFAULT_PIXEL_X: f64 = 1e-3;
/// Default pixel pitch in range (m).
pub const DEFAULT_PIXEL_Y: f64 = 2e-3;
/// Default lower edge of the image in y (m); leaves room for returns that
/// appear below the target plane when they have travelled through a slab.
pub const DEFAULT_Y_MIN: f64 = -0.1;

/// Uniform, strictly increasing axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    start: f64,
    step: f64,
    count: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() {
            return Err(Error::invalid("axis.start", "must be finite"));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::invalid("axis.step", format!("must be > 0, got {step}")));
        }
        if count == 0 {
            return Err(Error::invalid("axis.count", "must be >= 1"));
        }
        Ok(Axis { start, step, count })
    }

    /// Axis from `start` covering `[start, stop]` with pitch at most `step`'s
    /// nominal value; the last sample lands on or just before `stop`.
    pub fn spanning(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(stop >= start) {
            return Err(Error::invalid("axis", "needs stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Self::new(start, step, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn stop(&self) -> f64 {
        self.value(self.count - 1)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.value(i))
    }

    /// Index of the sample nearest to `v`, clamped to the axis.
    pub fn nearest(&self, v: f64) -> usize {
        let i = ((v - self.start) / self.step).round();
        i.clamp(0.0, (self.count - 1) as f64) as usize
    }
}

/// Pixel axes of an image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x: Axis,
    pub y: Axis,
}

impl GridSpec {
    /// x over the scan span, y from `DEFAULT_Y_MIN` up to the scan line.
    pub fn for_scan(scan: &ScanPlan, pixel_x: f64, pixel_y: f64) -> Result<Self> {
        Ok(GridSpec {
            x: Axis::spanning(scan.x_start(), scan.x_end(), pixel_x)?,
            y: Axis::spanning(DEFAULT_Y_MIN, scan.y_tr(), pixel_y)?,
        })
    }

    pub fn default_for(scan: &ScanPlan) -> Result<Self> {
        Self::for_scan(scan, DEFAULT_PIXEL_X, DEFAULT_PIXEL_Y)
    }

    pub fn pixel_count(&self) -> usize {
        self.x.count() * self.y.count()
    }
}

/// Complex image; rows run along y, row `i` holds `y = y.value(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    grid: GridSpec,
    pixels: Vec<Complex64>,
}

impl ImageGrid {
    pub fn new(grid: GridSpec, pixels: Vec<Complex64>) -> Result<Self> {
        if pixels.len() != grid.pixel_count() {
            return Err(Error::invalid("pixels", "pixel count does not match the axes"));
        }
        Ok(ImageGrid { grid, pixels })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn x_axis(&self) -> &Axis {
        &self.grid.x
    }

    pub fn y_axis(&self) -> &Axis {
        &self.grid.y
    }

    pub fn pixels(&self) -> &[Complex64] {
        &self.pixels
    }

    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.pixels[iy * self.grid.x.count() + ix]
    }

    /// Pixel position of the largest magnitude, first in row-major order on
    /// ties.
    pub fn argmax(&self) -> (usize, usize) {
        let nx = self.grid.x.count();
        let mut best = (0, f64::NEG_INFINITY);
        for (i, v) in self.pixels.iter().enumerate() {
            let m = v.norm_sqr();
            if m > best.1 {
                best = (i, m);
            }
        }
        (best.0 % nx, best.0 / nx)
    }

    pub fn magnitude(&self) -> MagnitudeImage {
        MagnitudeImage {
            grid: self.grid,
            values: self.pixels.iter().map(|v| v.norm()).collect(),
            reference: 1.0,
        }
    }
}

/// Real magnitudes on an image grid, optionally divided by a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeImage {
    grid: GridSpec,
    values: Vec<f64>,
    reference: f64,
}

impl MagnitudeImage {
    pub fn new(grid: GridSpec, values: Vec<f64>, reference: f64) -> Result<Self> {
        if values.len() != grid.pixel_count() {
            return Err(Error::invalid("values", "value count does not match the axes"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("values", "magnitudes must be finite and >= 0"));
        }
        Ok(MagnitudeImage { grid, values, reference })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The value every magnitude was divided by (1 for raw magnitudes).
    pub fn reference(&self) -> f64 {
        self.reference
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.x.count() + ix]
    }

    pub fn row(&self, iy: usize) -> &[f64] {
        let nx = self.grid.x.count();
        &self.values[iy * nx..(iy + 1) * nx]
    }

    pub fn column(&self, ix: usize) -> Vec<f64> {
        (0..self.grid.y.count()).map(|iy| self.get(ix, iy)).collect()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Reference maximum used for normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    SelfMax,
    External(f64),
}

/// Divides the magnitude image by its own maximum or an external one.
pub fn normalize(image: &ImageGrid, reference: Normalization) -> Result<MagnitudeImage> {
    normalize_magnitude(&image.magnitude(), reference)
}

pub fn normalize_magnitude(image: &MagnitudeImage, reference: Normalization) -> Result<MagnitudeImage> {
    let raw_max = image.max();
    let scale = match reference {
        Normalization::SelfMax => raw_max,
        Normalization::External(m) => m,
    };
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Numerical(format!("normalization reference must be > 0, got {scale}")));
    }
    Ok(MagnitudeImage {
        grid: image.grid,
        values: image.values.iter().map(|v| v / scale).collect(),
        reference: image.reference * scale,
    })
}

/// `c / (2B)` with `B = Q·f_step`. A single frequency has no bandwidth.
pub fn range_resolution(freq: &FrequencyGrid) -> Result<f64> {
    if freq.count() < 2 {
        return Err(Error::invalid("frequency.count", "range resolution needs at least two frequencies"));
    }
    Ok(SPEED_OF_LIGHT / (2.0 * freq.bandwidth()))
}

/// `pixel(x, y) = Σ_p Σ_q S[q][p] e^{+j2k_q (d_p(x, y) + range_offset)}`.
///
/// The frequency sum is evaluated by Horner's rule in `e^{j2Δk d}`, then
/// multiplied by the phase at the first frequency. Rows are distributed over
/// `workers` threads; every pixel is summed in the same order regardless.
pub fn backproject(dataset: &Dataset, grid: &GridSpec, range_offset: f64, workers: usize) -> Result<ImageGrid> {
    if dataset.data().is_empty() {
        return Err(Error::invalid("dataset", "empty dataset"));
    }
    if !range_offset.is_finite() {
        return Err(Error::invalid("range_offset", "must be finite"));
    }
    let scan = *dataset.scan();
    let freq = *dataset.freq();
    let (q_count, p_count) = (freq.count(), scan.count());
    // per-position spectra, contiguous in q
    let mut spectra = vec![Complex64::new(0.0, 0.0); q_count * p_count];
    for q in 0..q_count {
        for (p, v) in dataset.row(q).iter().enumerate() {
            spectra[p * q_count + q] = *v;
        }
    }
    let k0 = free_space_wavenumber(freq.f_start());
    let dk = free_space_wavenumber(freq.f_start() + freq.f_step()) - k0;
    let xs: Vec<f64> = (0..p_count).map(|p| scan.x(p)).collect();
    let y_tr = scan.y_tr();
    let nx = grid.x.count();

    let pool = crate::solver::thread_pool(workers)?;
    let rows: Vec<Vec<Complex64>> = pool.install(|| {
        (0..grid.y.count())
            .into_par_iter()
            .map(|iy| {
                let dy = y_tr - grid.y.value(iy);
                (0..nx)
                    .map(|ix| {
                        let dx = grid.x.value(ix);
                        let range = |p: usize| (dx - xs[p]).hypot(dy) + range_offset;
                        let spectrum = |p: usize| &spectra[p * q_count..(p + 1) * q_count];
                        let mut pixel = Complex64::new(0.0, 0.0);
                        // four independent Horner chains keep the FPU busy
                        let mut chunks = (0..p_count).step_by(LANES);
                        for p0 in chunks.by_ref().take(p_count / LANES) {
                            let r: [f64; LANES] = std::array::from_fn(|i| range(p0 + i));
                            let step: [Complex64; LANES] = std::array::from_fn(|i| Complex64::cis(2.0 * dk * r[i]));
                            let s: [&[Complex64]; LANES] = std::array::from_fn(|i| spectrum(p0 + i));
                            let mut acc = [Complex64::new(0.0, 0.0); LANES];
                            for q in (0..q_count).rev() {
                                for i in 0..LANES {
                                    acc[i] = acc[i] * step[i] + s[i][q];
                                }
                            }
                            for i in 0..LANES {
                                pixel += acc[i] * Complex64::cis(2.0 * k0 * r[i]);
                            }
                        }
                        for p in (p_count / LANES) * LANES..p_count {
                            let r = range(p);
                            let step = Complex64::cis(2.0 * dk * r);
                            let mut acc = Complex64::new(0.0, 0.0);
                            for v in spectrum(p).iter().rev() {
                                acc = acc * step + v;
                            }
                            pixel += acc * Complex64::cis(2.0 * k0 * r);
                        }
                        pixel
                    })
                    .collect()
            })
            .collect()
    });
    ImageGrid::new(*grid, rows.concat())
}
