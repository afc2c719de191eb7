//! Scene description: a slab obstacle, a flat target plate lying on `y = 0`,
//! the radar scan line and the frequency grid, plus the discretization of the
//! scattering faces into quadrature samples.

mod config;

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::kernels::{Angle, Material, SPEED_OF_LIGHT};

pub use config::SceneFile;

/// Samples whose incidence angle reaches this value are dropped from the
/// physical-optics quadrature.
pub const GRAZING_CUTOFF_DEG: f64 = 89.0;

/// Default quadrature density at the highest simulated frequency.
pub const DEFAULT_SAMPLES_PER_WAVELENGTH: f64 = 10.0;

/// A point or direction in the scan plane (metres).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const UNIT_Y: Vec2 = Vec2 { x: 0.0, y: 1.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z component of the 3D cross product `self × other`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// One piece of a piecewise-constant permittivity profile along x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSegment {
    pub x_from: f64,
    pub x_to: f64,
    pub material: Material,
}

/// A planar dielectric slab facing the radar. Its front face lies at
/// `y_front` and the back face at `y_front − thickness`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabObstacle {
    y_front: f64,
    thickness: f64,
    x_extent: (f64, f64),
    profile: Vec<ProfileSegment>,
}

const PROFILE_TOLERANCE: f64 = 1e-12;

impl SlabObstacle {
    /// The profile segments must be sorted, contiguous and cover `x_extent`
    /// exactly (to 1e-12 m).
    pub fn new(
        y_front: f64,
        thickness: f64,
        x_extent: (f64, f64),
        profile: Vec<ProfileSegment>,
    ) -> Result<Self> {
        if !(thickness.is_finite() && thickness > 0.0) {
            return Err(Error::invalid("obstacle.thickness_m", "must be > 0"));
        }
        if !y_front.is_finite() {
            return Err(Error::invalid("obstacle.y_front_m", "must be finite"));
        }
        let (a, b) = x_extent;
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::invalid("obstacle.x_extent_m", "needs x_min < x_max"));
        }
        let Some(first) = profile.first() else {
            return Err(Error::invalid("obstacle.profile", "must contain at least one segment"));
        };
        if (first.x_from - a).abs() > PROFILE_TOLERANCE {
            return Err(Error::invalid(
                "obstacle.profile",
                format!("first segment starts at {} but the slab starts at {a}", first.x_from),
            ));
        }
        for (i, seg) in profile.iter().enumerate() {
            if !(seg.x_to > seg.x_from) {
                return Err(Error::invalid(
                    format!("obstacle.profile[{i}]"),
                    "segment must have x_to_m > x_from_m",
                ));
            }
            if let Some(next) = profile.get(i + 1) {
                if (next.x_from - seg.x_to).abs() > PROFILE_TOLERANCE {
                    return Err(Error::invalid(
                        format!("obstacle.profile[{}]", i + 1),
                        "segments must be sorted and contiguous",
                    ));
                }
            }
        }
        let last = profile.last().expect("non-empty");
        if (last.x_to - b).abs() > PROFILE_TOLERANCE {
            return Err(Error::invalid(
                "obstacle.profile",
                format!("last segment ends at {} but the slab ends at {b}", last.x_to),
            ));
        }
        Ok(SlabObstacle {
            y_front,
            thickness,
            x_extent,
            profile,
        })
    }

    pub fn homogeneous(
        y_front: f64,
        thickness: f64,
        x_extent: (f64, f64),
        material: Material,
    ) -> Result<Self> {
        let seg = ProfileSegment {
            x_from: x_extent.0,
            x_to: x_extent.1,
            material,
        };
        Self::new(y_front, thickness, x_extent, vec![seg])
    }

    pub fn y_front(&self) -> f64 {
        self.y_front
    }

    pub fn y_back(&self) -> f64 {
        self.y_front - self.thickness
    }

    pub fn y_mid(&self) -> f64 {
        self.y_front - 0.5 * self.thickness
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn x_extent(&self) -> (f64, f64) {
        self.x_extent
    }

    pub fn profile(&self) -> &[ProfileSegment] {
        &self.profile
    }

    /// Material of the segment containing `x`; segments are half-open
    /// `[x_from, x_to)` except the last, which includes its right end.
    pub fn material_at(&self, x: f64) -> Option<Material> {
        let (a, b) = self.x_extent;
        if !(x >= a && x <= b) {
            return None;
        }
        let idx = self.profile.partition_point(|seg| seg.x_to <= x);
        let idx = idx.min(self.profile.len() - 1);
        Some(self.profile[idx].material)
    }
}

/// Alternating two-material profile with segments of length `segment`.
///
/// The pattern starts with `first` at `x_extent.0 − offset`; an `offset` in
/// `[0, segment)` shifts the boundaries left by that amount.
pub fn alternating_profile(
    x_extent: (f64, f64),
    segment: f64,
    offset: f64,
    first: Material,
    second: Material,
) -> Result<Vec<ProfileSegment>> {
    if !(segment > 0.0) {
        return Err(Error::invalid("segment", "alternation length must be > 0"));
    }
    if !(0.0..segment).contains(&offset) {
        return Err(Error::invalid("offset", "phase offset must lie in [0, segment)"));
    }
    let (a, b) = x_extent;
    let origin = a - offset;
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let from = (origin + k as f64 * segment).max(a);
        if from >= b - PROFILE_TOLERANCE {
            break;
        }
        let to = (origin + (k + 1) as f64 * segment).min(b);
        let to = if b - to < PROFILE_TOLERANCE { b } else { to };
        let material = if k % 2 == 0 { first } else { second };
        out.push(ProfileSegment {
            x_from: from,
            x_to: to,
            material,
        });
        k += 1;
    }
    Ok(out)
}

/// A flat plate on `y = 0` facing `+y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetPlate {
    x_extent: (f64, f64),
    material: Material,
}

impl TargetPlate {
    pub fn new(x_extent: (f64, f64), material: Material) -> Result<Self> {
        let (a, b) = x_extent;
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::invalid("target.x_extent_m", "needs x_min < x_max"));
        }
        Ok(TargetPlate { x_extent, material })
    }

    pub fn x_extent(&self) -> (f64, f64) {
        self.x_extent
    }

    pub fn material(&self) -> Material {
        self.material
    }

    pub fn y(&self) -> f64 {
        0.0
    }
}

/// Uniform scan line at height `y_tr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPlan {
    x_start: f64,
    step: f64,
    count: usize,
    y_tr: f64,
}

impl ScanPlan {
    pub fn new(x_start: f64, step: f64, count: usize, y_tr: f64) -> Result<Self> {
        if !x_start.is_finite() {
            return Err(Error::invalid("radar.x_start_m", "must be finite"));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::invalid("radar.step_m", "must be > 0"));
        }
        if count == 0 {
            return Err(Error::invalid("radar.count", "must be >= 1"));
        }
        if !(y_tr.is_finite() && y_tr > 0.0) {
            return Err(Error::invalid("radar.y_tr_m", "must be > 0 (above the target plane)"));
        }
        Ok(ScanPlan {
            x_start,
            step,
            count,
            y_tr,
        })
    }

    pub fn x_start(&self) -> f64 {
        self.x_start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn y_tr(&self) -> f64 {
        self.y_tr
    }

    pub fn x(&self, p: usize) -> f64 {
        self.x_start + p as f64 * self.step
    }

    pub fn position(&self, p: usize) -> Vec2 {
        Vec2::new(self.x(p), self.y_tr)
    }

    pub fn x_end(&self) -> f64 {
        self.x(self.count - 1)
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec2> + '_ {
        (0..self.count).map(move |p| self.position(p))
    }
}

/// Uniform frequency grid `f_q = f_start + q·f_step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    f_start: f64,
    f_step: f64,
    count: usize,
}

impl FrequencyGrid {
    pub fn new(f_start: f64, f_step: f64, count: usize) -> Result<Self> {
        if !(f_start.is_finite() && f_start > 0.0) {
            return Err(Error::invalid("frequency.start_hz", "must be > 0"));
        }
        if !(f_step.is_finite() && f_step > 0.0) {
            return Err(Error::invalid("frequency.step_hz", "must be > 0"));
        }
        if count == 0 {
            return Err(Error::invalid("frequency.count", "must be >= 1"));
        }
        Ok(FrequencyGrid {
            f_start,
            f_step,
            count,
        })
    }

    pub fn f_start(&self) -> f64 {
        self.f_start
    }

    pub fn f_step(&self) -> f64 {
        self.f_step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn frequency(&self, q: usize) -> f64 {
        self.f_start + q as f64 * self.f_step
    }

    /// Last sampled frequency.
    pub fn f_stop(&self) -> f64 {
        self.frequency(self.count - 1)
    }

    /// Swept bandwidth `Q·f_step`.
    pub fn bandwidth(&self) -> f64 {
        self.f_step * self.count as f64
    }

    /// Shortest free-space wavelength on the grid.
    pub fn lambda_min(&self) -> f64 {
        SPEED_OF_LIGHT / self.f_stop()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |q| self.frequency(q))
    }
}

/// One midpoint-rule quadrature sample on a scattering face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub position: Vec2,
    pub normal: Vec2,
    pub segment_length: f64,
    pub material: Material,
}

/// A straight face parallel to x that scatters toward `+y`.
pub trait FrontFace {
    fn face_extent(&self) -> (f64, f64);
    fn face_y(&self) -> f64;
    fn face_material(&self, x: f64) -> Option<Material>;
}

impl FrontFace for SlabObstacle {
    fn face_extent(&self) -> (f64, f64) {
        self.x_extent
    }

    fn face_y(&self) -> f64 {
        self.y_front
    }

    fn face_material(&self, x: f64) -> Option<Material> {
        self.material_at(x)
    }
}

impl FrontFace for TargetPlate {
    fn face_extent(&self) -> (f64, f64) {
        self.x_extent
    }

    fn face_y(&self) -> f64 {
        self.y()
    }

    fn face_material(&self, x: f64) -> Option<Material> {
        let (a, b) = self.x_extent;
        (x >= a && x <= b).then_some(self.material)
    }
}

/// Uniform midpoint sampling of a front face with spacing at most
/// `lambda_min / samples_per_wavelength`.
pub fn discretize(
    body: &dyn FrontFace,
    lambda_min: f64,
    samples_per_wavelength: f64,
) -> Result<Vec<SurfaceSample>> {
    if !(samples_per_wavelength >= 2.0 && samples_per_wavelength.is_finite()) {
        return Err(Error::invalid(
            "samples_per_wavelength",
            format!("must be >= 2, got {samples_per_wavelength}"),
        ));
    }
    if !(lambda_min > 0.0 && lambda_min.is_finite()) {
        return Err(Error::invalid("lambda_min", "must be > 0"));
    }
    let (a, b) = body.face_extent();
    let length = b - a;
    if !(length > 0.0) {
        return Err(Error::invalid("extent", "surface extent is empty"));
    }
    let max_spacing = lambda_min / samples_per_wavelength;
    let n = (length / max_spacing).ceil().max(1.0) as usize;
    let h = length / n as f64;
    let y = body.face_y();
    (0..n)
        .map(|i| {
            let x = a + (i as f64 + 0.5) * h;
            let material = body
                .face_material(x)
                .ok_or_else(|| Error::invalid("profile", format!("no material at x = {x}")))?;
            Ok(SurfaceSample {
                position: Vec2::new(x, y),
                normal: Vec2::UNIT_Y,
                segment_length: h,
                material,
            })
        })
        .collect()
}

/// Angle between the ray `source → sample` and the sample's normal.
///
/// Returns `None` when the source sits on or behind the face, or when the
/// angle reaches the grazing cutoff.
pub fn incidence_angle(source: Vec2, sample: &SurfaceSample) -> Option<Angle> {
    let to_source = source - sample.position;
    let along = to_source.dot(sample.normal);
    if !(along > 0.0) {
        return None;
    }
    let across = to_source.cross(sample.normal).abs();
    let theta = across.atan2(along);
    if theta >= GRAZING_CUTOFF_DEG.to_radians() || theta >= FRAC_PI_2 {
        return None;
    }
    Angle::from_radians(theta).ok()
}

/// Full simulation scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub scan: ScanPlan,
    pub freq: FrequencyGrid,
    pub obstacle: Option<SlabObstacle>,
    pub target: Option<TargetPlate>,
}

impl Scene {
    /// Checks the vertical ordering target (y = 0) < slab < radar.
    pub fn new(
        scan: ScanPlan,
        freq: FrequencyGrid,
        obstacle: Option<SlabObstacle>,
        target: Option<TargetPlate>,
    ) -> Result<Self> {
        if let Some(obs) = &obstacle {
            if !(obs.y_back() > 0.0) {
                return Err(Error::invalid(
                    "obstacle.y_front_m",
                    "the slab must lie entirely above the target plane y = 0",
                ));
            }
            if !(obs.y_front() < scan.y_tr()) {
                return Err(Error::invalid(
                    "obstacle.y_front_m",
                    "the slab must lie below the radar scan line",
                ));
            }
        }
        Ok(Scene {
            scan,
            freq,
            obstacle,
            target,
        })
    }
}

/// The three measurement scenarios reproduced by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaperVariant {
    NoObstacle,
    /// 9 mm homogeneous medium-density fibreboard.
    Mdf,
    /// 10 mm softwood plywood with a 10 mm alternating grain pattern.
    Softwood,
}

impl std::str::FromStr for PaperVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(PaperVariant::NoObstacle),
            "mdf" => Ok(PaperVariant::Mdf),
            "softwood" => Ok(PaperVariant::Softwood),
            other => Err(Error::invalid(
                "variant",
                format!("expected one of none, mdf, softwood; got {other:?}"),
            )),
        }
    }
}

pub mod paper {
    //! Parameters of the reference measurement setup.

    /// Radar height above the target plane (m).
    pub const Y_TR: f64 = 0.5;
    /// Front face of the obstacle (m).
    pub const Y_OBSTACLE: f64 = 0.25;
    pub const SCAN_STEP: f64 = 1e-3;
    pub const SCAN_COUNT: usize = 251;
    pub const F_START: f64 = 77.2e9;
    pub const F_STEP: f64 = 14.0625e6;
    pub const F_COUNT: usize = 256;
    pub const TARGET_LENGTH: f64 = 0.100;
    /// Obstacle overhang beyond the scan span on each side (m).
    pub const OBSTACLE_MARGIN: f64 = 0.125;
    pub const MDF_THICKNESS: f64 = 9e-3;
    pub const SOFTWOOD_THICKNESS: f64 = 10e-3;
    pub const SOFTWOOD_PERIOD: f64 = 10e-3;
    /// Wood, `ε₁ = 1.99 − j1.12`.
    pub const EPS_WOOD: (f64, f64) = (1.99, 1.12);
    /// Dense grain, `ε₃ = 2.5 − j0.2`.
    pub const EPS_GRAIN: (f64, f64) = (2.5, 0.2);
    /// Metal plate, `ε₂ = 1 − j2.28·10⁶`.
    pub const EPS_METAL: (f64, f64) = (1.0, 2.28e6);
}

/// Builds one of the canonical scenes: radar at 0.5 m scanning 250 mm in 1 mm
/// steps, 77.2 → 80.8 GHz in 256 steps, a 100 mm metal plate centred under
/// the scan, and optionally a slab with its front face at 0.25 m.
pub fn build_paper_scene(variant: PaperVariant) -> Scene {
    use paper::*;
    let material = |(re, im): (f64, f64)| Material::new(re, im).expect("valid constant");

    let scan = ScanPlan::new(0.0, SCAN_STEP, SCAN_COUNT, Y_TR).expect("valid constant");
    let freq = FrequencyGrid::new(F_START, F_STEP, F_COUNT).expect("valid constant");
    let centre = 0.5 * (scan.x_start() + scan.x_end());
    let target = TargetPlate::new(
        (centre - 0.5 * TARGET_LENGTH, centre + 0.5 * TARGET_LENGTH),
        material(EPS_METAL),
    )
    .expect("valid constant");
    let extent = (scan.x_start() - OBSTACLE_MARGIN, scan.x_end() + OBSTACLE_MARGIN);

    let obstacle = match variant {
        PaperVariant::NoObstacle => None,
        PaperVariant::Mdf => Some(
            SlabObstacle::homogeneous(Y_OBSTACLE, MDF_THICKNESS, extent, material(EPS_WOOD))
                .expect("valid constant"),
        ),
        PaperVariant::Softwood => {
            let profile = alternating_profile(
                extent,
                SOFTWOOD_PERIOD,
                0.0,
                material(EPS_WOOD),
                material(EPS_GRAIN),
            )
            .expect("valid constant");
            Some(
                SlabObstacle::new(Y_OBSTACLE, SOFTWOOD_THICKNESS, extent, profile)
                    .expect("valid constant"),
            )
        }
    };
    Scene::new(scan, freq, obstacle, Some(target)).expect("valid constant")
}
