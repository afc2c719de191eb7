//! Quantitative analysis of reconstructed images: the x-profile through the
//! target, its FWHM length, intensity relative to a reference case, and the
//! spacing of periodic peaks.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::imaging::{Axis, MagnitudeImage};

/// Minimum peak prominence, as a fraction of the profile maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.1;

/// Magnitude along x at one image row.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    pub x: Axis,
    pub intensity: Vec<f64>,
    /// Scale the intensities have been divided by.
    pub normalization_reference: f64,
}

impl IntensityProfile {
    pub fn new(x: Axis, intensity: Vec<f64>, normalization_reference: f64) -> Result<Self> {
        if intensity.len() != x.count() {
            return Err(Error::invalid("intensity", "length differs from the x axis"));
        }
        if intensity.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("intensity", "values must be finite and >= 0"));
        }
        Ok(IntensityProfile {
            x,
            intensity,
            normalization_reference,
        })
    }

    pub fn max(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(w, "x_m,intensity_norm").map_err(io)?;
        for (i, v) in self.intensity.iter().enumerate() {
            writeln!(w, "{:?},{:?}", self.x.value(i), v).map_err(io)?;
        }
        w.flush().map_err(io)
    }
}

fn rows_in_band(image: &MagnitudeImage, band: (f64, f64)) -> Result<std::ops::RangeInclusive<usize>> {
    let (lo, hi) = if band.0 <= band.1 { band } else { (band.1, band.0) };
    let y = &image.grid().y;
    let first = (0..y.count()).find(|&i| y.value(i) >= lo);
    let last = (0..y.count()).rev().find(|&i| y.value(i) <= hi);
    match (first, last) {
        (Some(a), Some(b)) if a <= b => Ok(a..=b),
        _ => Err(Error::invalid(
            "target_y_band",
            format!("[{lo}, {hi}] does not intersect the image y range [{}, {}]", y.start(), y.stop()),
        )),
    }
}

/// The x-cut through the row with the largest summed magnitude inside
/// `band`.
pub fn profile_at_target_center(image: &MagnitudeImage, band: (f64, f64)) -> Result<IntensityProfile> {
    let rows = rows_in_band(image, band)?;
    let mut best = (*rows.start(), f64::NEG_INFINITY);
    for iy in rows {
        let total: f64 = image.row(iy).iter().sum();
        if total > best.1 {
            best = (iy, total);
        }
    }
    IntensityProfile::new(image.grid().x, image.row(best.0).to_vec(), image.reference())
}

/// Row index of the centre of the target band: the brightest pixel in rows
/// strictly below `below_y`, or anywhere when no limit is given.
fn brightest_row(image: &MagnitudeImage, below_y: Option<f64>) -> Result<usize> {
    let y = &image.grid().y;
    let mut best = None::<(usize, f64)>;
    for iy in 0..y.count() {
        if below_y.is_some_and(|limit| y.value(iy) >= limit) {
            continue;
        }
        let m = image.row(iy).iter().copied().fold(0.0, f64::max);
        if best.map_or(true, |(_, b)| m > b) {
            best = Some((iy, m));
        }
    }
    best.map(|(iy, _)| iy)
        .ok_or_else(|| Error::invalid("target_y_band", "no image rows below the obstacle"))
}

/// A band `width` wide centred on the brightest pixel below the obstacle.
///
/// The obstacle occupies the image down to one resolution cell (`width`)
/// below its back face, so only rows beneath that are searched; otherwise
/// the slab's own main lobe would be taken for the target.
pub fn default_target_band(image: &MagnitudeImage, obstacle_back_y: Option<f64>, width: f64) -> Result<(f64, f64)> {
    let limit = obstacle_back_y.map(|y| y - width);
    let centre = image.grid().y.value(brightest_row(image, limit)?);
    Ok((centre - 0.5 * width, centre + 0.5 * width))
}

fn crossing(x0: f64, x1: f64, v0: f64, v1: f64, level: f64) -> f64 {
    if v1 == v0 {
        return x0;
    }
    x0 + (level - v0) / (v1 - v0) * (x1 - x0)
}

/// Distance between the outermost crossings of `max/2`, interpolated
/// linearly between samples.
pub fn fwhm_length(profile: &IntensityProfile) -> Result<f64> {
    let v = &profile.intensity;
    let peak = profile.max();
    if !(peak > 0.0) {
        return Err(Error::Numerical("profile has no positive maximum".into()));
    }
    let half = 0.5 * peak;
    let first = v.iter().position(|&a| a >= half).expect("maximum exists");
    let last = v.iter().rposition(|&a| a >= half).expect("maximum exists");
    if first == 0 || last + 1 == v.len() {
        return Err(Error::Numerical("profile does not fall below half maximum on both sides".into()));
    }
    let x = &profile.x;
    let left = crossing(x.value(first - 1), x.value(first), v[first - 1], v[first], half);
    let right = crossing(x.value(last), x.value(last + 1), v[last], v[last + 1], half);
    Ok(right - left)
}

/// Width of the main lobe around the global maximum of `values` at
/// `level · max` (0.5 for half maximum), interpolated linearly.
pub fn main_lobe_width(axis: &Axis, values: &[f64], level: f64) -> Result<f64> {
    if values.len() != axis.count() {
        return Err(Error::invalid("values", "length differs from the axis"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid("level", "must lie in (0, 1)"));
    }
    let (imax, peak) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, v)| if v > b.1 { (i, v) } else { b });
    if !(peak > 0.0) {
        return Err(Error::Numerical("no positive maximum".into()));
    }
    let threshold = level * peak;
    let lo = (0..imax).rev().find(|&i| values[i] < threshold);
    let hi = (imax + 1..values.len()).find(|&i| values[i] < threshold);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::Numerical("main lobe reaches the edge of the axis".into()));
    };
    let left = crossing(axis.value(lo), axis.value(lo + 1), values[lo], values[lo + 1], threshold);
    let right = crossing(axis.value(hi - 1), axis.value(hi), values[hi - 1], values[hi], threshold);
    Ok(right - left)
}

/// `max(profile) / reference_max`.
pub fn relative_intensity(profile: &IntensityProfile, reference_max: f64) -> Result<f64> {
    if !(reference_max.is_finite() && reference_max > 0.0) {
        return Err(Error::invalid("reference_max", "must be > 0"));
    }
    Ok(profile.max() / reference_max)
}

/// Local maxima (plateaus reported at their middle) with their prominence,
/// using the same definition as `scipy.signal.peak_prominences`.
pub fn find_peaks(values: &[f64]) -> Vec<(usize, f64)> {
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i - 1] < values[i] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                peaks.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
        .into_iter()
        .map(|p| {
            let h = values[p];
            let mut left_min = h;
            for k in (0..p).rev() {
                if values[k] > h {
                    break;
                }
                left_min = left_min.min(values[k]);
            }
            let mut right_min = h;
            for &v in &values[p + 1..] {
                if v > h {
                    break;
                }
                right_min = right_min.min(v);
            }
            (p, h - left_min.max(right_min))
        })
        .collect()
}

/// Mean spacing of consecutive peaks whose prominence is at least
/// `min_prominence · max`.
pub fn peak_spacing_with(profile: &IntensityProfile, min_prominence: f64) -> Result<f64> {
    let threshold = min_prominence * profile.max();
    let peaks: Vec<usize> = find_peaks(&profile.intensity)
        .into_iter()
        .filter(|&(_, prom)| prom >= threshold && prom > 0.0)
        .map(|(i, _)| i)
        .collect();
    if peaks.len() < 2 {
        return Err(Error::Numerical(format!("found {} qualifying peaks, need at least 2", peaks.len())));
    }
    let span = profile.x.value(*peaks.last().unwrap()) - profile.x.value(peaks[0]);
    Ok(span / (peaks.len() - 1) as f64)
}

pub fn peak_spacing(profile: &IntensityProfile) -> Result<f64> {
    peak_spacing_with(profile, DEFAULT_PROMINENCE)
}
