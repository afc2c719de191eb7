//! Image files: 16-bit PGM with a TOML sidecar, and a plain CSV table.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Axis, GridSpec, MagnitudeImage};
use crate::error::{Error, Result};

/// Sidecar describing the axes and scaling of an exported image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageMeta {
    pub x_start_m: f64,
    pub x_step_m: f64,
    pub x_count: usize,
    pub y_start_m: f64,
    pub y_step_m: f64,
    pub y_count: usize,
    /// Raw magnitude that maps to full scale in the PGM.
    pub normalization_max: f64,
    pub f_start_hz: f64,
    pub f_step_hz: f64,
    pub f_count: usize,
    pub range_offset_m: f64,
    /// First PGM row is the largest y.
    pub row_order: String,
}

impl ImageMeta {
    pub fn grid(&self) -> Result<GridSpec> {
        Ok(GridSpec {
            x: Axis::new(self.x_start_m, self.x_step_m, self.x_count)?,
            y: Axis::new(self.y_start_m, self.y_step_m, self.y_count)?,
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = toml::to_string(self).expect("metadata serializes");
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::format("image metadata", e.message().to_owned()))
    }
}

/// Writes a binary 16-bit PGM (P5, big-endian samples). Values are clamped
/// to `[0, 1]` and scaled to 65535; the top row is the largest y.
pub fn write_pgm(image: &MagnitudeImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (nx, ny) = (image.grid().x.count(), image.grid().y.count());
    let mut out = format!("P5\n{nx} {ny}\n65535\n").into_bytes();
    out.reserve(2 * nx * ny);
    for iy in (0..ny).rev() {
        for v in image.row(iy) {
            let level = (v.clamp(0.0, 1.0) * 65535.0).round() as u16;
            out.extend_from_slice(&level.to_be_bytes());
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// CSV with header `x_m,y_m,magnitude`, rows ordered by y then x.
pub fn write_image_csv(image: &MagnitudeImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "x_m,y_m,magnitude").map_err(io)?;
    let grid = image.grid();
    for iy in 0..grid.y.count() {
        let y = grid.y.value(iy);
        for (ix, v) in image.row(iy).iter().enumerate() {
            writeln!(w, "{:?},{:?},{:?}", grid.x.value(ix), y, v).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

fn axis_from_samples(values: &[f64], name: &str) -> Result<Axis> {
    let step = if values.len() > 1 { values[1] - values[0] } else { 1.0 };
    let axis = Axis::new(values[0], step, values.len()).map_err(|e| Error::format(name, e.to_string()))?;
    let tol = 1e-9 * step.abs().max(values[0].abs()).max(1.0);
    for (i, v) in values.iter().enumerate() {
        if (axis.value(i) - v).abs() > tol {
            return Err(Error::format(name, "axis is not uniform"));
        }
    }
    Ok(axis)
}

/// Reads an image CSV back into raw magnitudes.
pub fn read_image_csv(path: impl AsRef<Path>) -> Result<MagnitudeImage> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut values = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = i + 1;
        if i == 0 {
            if line.trim() != "x_m,y_m,magnitude" {
                return Err(Error::format("line 1", "expected header x_m,y_m,magnitude"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::format(format!("line {lineno}"), "unparseable number"))?;
        let [x, y, m] = cols[..] else {
            return Err(Error::format(format!("line {lineno}"), "expected 3 columns"));
        };
        if ys.last() != Some(&y) {
            ys.push(y);
        }
        if ys.len() == 1 {
            xs.push(x);
        }
        values.push(m);
    }
    if values.is_empty() {
        return Err(Error::format("rows", "image has no pixels"));
    }
    if values.len() != xs.len() * ys.len() {
        return Err(Error::format("rows", "rows do not form a full x × y grid"));
    }
    let grid = GridSpec {
        x: axis_from_samples(&xs, "x_m")?,
        y: axis_from_samples(&ys, "y_m")?,
    };
    MagnitudeImage::new(grid, values, 1.0).map_err(|e| Error::format("magnitude", e.to_string()))
}
