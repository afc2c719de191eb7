//! TOML scene files.
//!
//! ```toml
//! [radar]
//! y_tr_m = 0.5
//! x_start_m = 0.0
//! step_m = 0.001
//! count = 251
//!
//! [frequency]
//! start_hz = 77.2e9
//! step_hz = 14.0625e6
//! count = 256
//!
//! [obstacle]
//! present = true
//! y_front_m = 0.25
//! thickness_m = 0.009
//! x_extent_m = [-0.125, 0.375]
//! profile = [{ x_from_m = -0.125, x_to_m = 0.375, eps_re = 1.99, eps_im = 1.12 }]
//!
//! [target]
//! x_extent_m = [0.075, 0.175]
//! eps_re = 1.0
//! eps_im = 2.28e6
//! ```
//!
//! `eps_im` is the loss magnitude ε″, so the material is `eps_re − j·eps_im`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FrequencyGrid, ProfileSegment, ScanPlan, Scene, SlabObstacle, TargetPlate};
use crate::error::{Error, Result};
use crate::kernels::Material;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub radar: RadarSection,
    pub frequency: FrequencySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstacle: Option<ObstacleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarSection {
    pub y_tr_m: f64,
    pub x_start_m: f64,
    pub step_m: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencySection {
    pub start_hz: f64,
    pub step_hz: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSection {
    pub present: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_front_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_extent_m: Option<[f64; 2]>,
    #[serde(default)]
    pub profile: Vec<ProfileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileEntry {
    pub x_from_m: f64,
    pub x_to_m: f64,
    pub eps_re: f64,
    pub eps_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub x_extent_m: [f64; 2],
    pub eps_re: f64,
    pub eps_im: f64,
}

fn material(field: &str, eps_re: f64, eps_im: f64) -> Result<Material> {
    Material::new(eps_re, eps_im).map_err(|e| match e {
        Error::Invalid { field: sub, reason } => Error::invalid(format!("{field}.{sub}"), reason),
        other => other,
    })
}

fn required<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| Error::invalid(field, "missing (required when present = true)"))
}

impl SceneFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("").to_owned();
            let detail = msg.lines().last().unwrap_or("").trim().to_owned();
            Error::format("scene file", format!("{line}: {detail}"))
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scene file serializes")
    }

    pub fn to_scene(&self) -> Result<Scene> {
        let r = &self.radar;
        let scan = ScanPlan::new(r.x_start_m, r.step_m, r.count, r.y_tr_m)?;
        let f = &self.frequency;
        let freq = FrequencyGrid::new(f.start_hz, f.step_hz, f.count)?;

        let obstacle = match &self.obstacle {
            Some(o) if o.present => {
                let y_front = required(o.y_front_m, "obstacle.y_front_m")?;
                let thickness = required(o.thickness_m, "obstacle.thickness_m")?;
                let [a, b] = required(o.x_extent_m, "obstacle.x_extent_m")?;
                let profile = o
                    .profile
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        Ok(ProfileSegment {
                            x_from: p.x_from_m,
                            x_to: p.x_to_m,
                            material: material(&format!("obstacle.profile[{i}]"), p.eps_re, p.eps_im)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(SlabObstacle::new(y_front, thickness, (a, b), profile)?)
            }
            _ => None,
        };

        let target = match &self.target {
            Some(t) => {
                let [a, b] = t.x_extent_m;
                Some(TargetPlate::new((a, b), material("target", t.eps_re, t.eps_im)?)?)
            }
            None => None,
        };
        Scene::new(scan, freq, obstacle, target)
    }

    pub fn from_scene(scene: &Scene) -> Self {
        let radar = RadarSection {
            y_tr_m: scene.scan.y_tr(),
            x_start_m: scene.scan.x_start(),
            step_m: scene.scan.step(),
            count: scene.scan.count(),
        };
        let frequency = FrequencySection {
            start_hz: scene.freq.f_start(),
            step_hz: scene.freq.f_step(),
            count: scene.freq.count(),
        };
        let obstacle = Some(match &scene.obstacle {
            Some(slab) => ObstacleSection {
                present: true,
                y_front_m: Some(slab.y_front()),
                thickness_m: Some(slab.thickness()),
                x_extent_m: Some([slab.x_extent().0, slab.x_extent().1]),
                profile: slab
                    .profile()
                    .iter()
                    .map(|seg| ProfileEntry {
                        x_from_m: seg.x_from,
                        x_to_m: seg.x_to,
                        eps_re: seg.material.eps_re(),
                        eps_im: seg.material.eps_loss(),
                    })
                    .collect(),
            },
            None => ObstacleSection {
                present: false,
                y_front_m: None,
                thickness_m: None,
                x_extent_m: None,
                profile: Vec::new(),
            },
        });
        let target = scene.target.map(|t| TargetSection {
            x_extent_m: [t.x_extent().0, t.x_extent().1],
            eps_re: t.material().eps_re(),
            eps_im: t.material().eps_loss(),
        });
        SceneFile {
            radar,
            frequency,
            obstacle,
            target,
        }
    }
}

impl Scene {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        SceneFile::parse(text)?.to_scene()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        SceneFile::from_scene(self).to_toml()
    }
}
