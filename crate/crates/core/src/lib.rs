//! Simulation and imaging of subsurface targets seen through dielectric
//! obstacles by a scanning FMCW millimetre-wave radar.
//!
//! The pipeline runs [`scene`] → [`solver::sweep`] → [`imaging::backproject`]
//! → [`metrics`]; [`fmcw`] converts raw radar captures into the same dataset
//! layout the solver produces.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fmcw;
pub mod imaging;
pub mod kernels;
pub mod metrics;
pub mod scene;
pub mod solver;

pub use error::{Error, Result};
pub use fmcw::{RadarParams, Reflector};
pub use imaging::{backproject, normalize, range_resolution, Axis, GridSpec, ImageGrid, MagnitudeImage, Normalization};
pub use kernels::{Angle, Material};
pub use metrics::IntensityProfile;
pub use scene::{build_paper_scene, FrequencyGrid, PaperVariant, ScanPlan, Scene, SlabObstacle, TargetPlate, Vec2};
pub use solver::{sweep, total_signal, Dataset, FieldValue, SolverOptions};
