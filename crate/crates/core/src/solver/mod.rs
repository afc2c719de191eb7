//! Hybrid forward model: physical-optics scattering from the obstacle's front
//! face plus PO scattering from the target plate, with the target's incident
//! and scattered rays corrected by GO transmission through the slab.
//!
//! All fields are the z component of E for a z-polarized line source. The
//! Green's function is `G = (j/4) H₀⁽²⁾(k₀ρ)` and the magnetic-current term
//! uses the far-field normal derivative `∂G/∂n ≈ −jk₀ cosθ G`.

mod dataset;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{
    free_space_wavenumber, h0_2_unchecked, hankel_h0_2, reflection_coefficient,
    slab_phase_per_wavenumber, transmission_pair, Angle, Material, TransmissionPair, ETA_0, MU_0,
};
use crate::scene::{
    discretize, incidence_angle, Scene, SlabObstacle, SurfaceSample, Vec2,
    DEFAULT_SAMPLES_PER_WAVELENGTH,
};

pub use dataset::{Dataset, DATASET_MAGIC, DATASET_VERSION};

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub samples_per_wavelength: f64,
    /// Amplitude of the transmitted line-source field.
    pub e0: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            samples_per_wavelength: DEFAULT_SAMPLES_PER_WAVELENGTH,
            e0: 1.0,
        }
    }
}

/// Incident field at a surface sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentField {
    /// `E_z`.
    pub e: Complex64,
    /// `(H_x, H_y) = ŝ × ẑ E_z / η₀`.
    pub h: [Complex64; 2],
    /// Unit propagation direction `ŝ` from the transmitter to the sample.
    pub direction: Vec2,
}

/// Equivalent surface currents on a face with normal `+y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceCurrents {
    /// Electric current along z.
    pub j_z: Complex64,
    /// Magnetic current along `t̂ = ẑ × n̂`.
    pub m_t: Complex64,
}

/// A scattered field value and the number of quadrature samples that
/// contributed to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    pub value: Complex64,
    pub contributing: usize,
    /// Samples dropped at the grazing cutoff or lying behind the source.
    pub excluded: usize,
}

impl FieldValue {
    /// True when samples were supplied but none survived the grazing cutoff.
    pub fn all_grazing(&self) -> bool {
        self.contributing == 0 && self.excluded > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScatterPath {
    Obstacle,
    Target,
}

/// `E_i = E₀ H₀⁽²⁾(k d) · prior`, `H_i = ŝ × E_i / η₀`.
pub fn incident_fields(
    tr: Vec2,
    sample: &SurfaceSample,
    k: f64,
    e0: f64,
    prior: Complex64,
) -> Result<IncidentField> {
    let offset = sample.position - tr;
    let d = offset.norm();
    if !(d > 0.0) {
        return Err(Error::Domain("transmitter coincides with the surface sample".into()));
    }
    let s = offset * (1.0 / d);
    let e = e0 * hankel_h0_2(k * d)? * prior;
    // ŝ × ẑ = (s_y, −s_x)
    let h = [e * (s.y / ETA_0), e * (-s.x / ETA_0)];
    Ok(IncidentField { e, h, direction: s })
}

/// `J = (1 − R) n̂ × H_i` and `M = (1 + R) E_i × n̂`, reduced to scalars.
pub fn equivalent_currents(
    sample: &SurfaceSample,
    incident: &IncidentField,
    theta_i: Angle,
) -> SurfaceCurrents {
    let r = reflection_coefficient(theta_i, &sample.material);
    let n = sample.normal;
    let n_cross_h = n.x * incident.h[1] - n.y * incident.h[0];
    SurfaceCurrents {
        j_z: (1.0 - r) * n_cross_h,
        m_t: (1.0 + r) * incident.e,
    }
}

/// GO correction of the one-way path between the radar and a target sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabCrossing {
    pub point: Vec2,
    pub theta: Angle,
    pub material: Material,
    pub transmission: TransmissionPair,
    /// Slab phase divided by `k₀`.
    pub phase_per_wavenumber: Complex64,
}

impl SlabCrossing {
    /// `e^{jφ} T₀→₁ T₁→₀` at free-space wavenumber `k0`.
    pub fn factor(&self, k0: f64) -> Complex64 {
        self.transmission.product() * (J * k0 * self.phase_per_wavenumber).exp()
    }
}

/// Where the straight ray between `a` and `b` crosses the slab mid-plane.
///
/// The ray is parameterized from whichever end lies above the slab, so the
/// incident and the returning ray produce bitwise-identical results. Returns
/// `None` when the ray misses the slab's x extent or does not cross it.
pub fn slab_crossing(slab: &SlabObstacle, a: Vec2, b: Vec2) -> Option<SlabCrossing> {
    let (top, bottom) = if a.y >= b.y { (a, b) } else { (b, a) };
    let y_mid = slab.y_mid();
    if !(top.y > y_mid && bottom.y < y_mid) {
        return None;
    }
    let t = (top.y - y_mid) / (top.y - bottom.y);
    let point = Vec2::new(top.x + t * (bottom.x - top.x), y_mid);
    let material = slab.material_at(point.x)?;
    let dx = (bottom.x - top.x).abs();
    let theta = Angle::from_radians(dx.atan2(top.y - bottom.y)).ok()?;
    Some(SlabCrossing {
        point,
        theta,
        material,
        transmission: transmission_pair(theta, &Material::AIR, &material),
        phase_per_wavenumber: slab_phase_per_wavenumber(theta, &material, slab.thickness()),
    })
}

/// Frequency-independent part of one sample's contribution, as seen from one
/// transmitter position.
#[derive(Debug, Clone, Copy)]
struct Term {
    distance: f64,
    /// `(1 − R) cosθ / η₀`: electric current per unit incident field.
    j_per_e: Complex64,
    /// `(1 + R) cosθ`: magnetic current times the far-field obliquity.
    m_per_e: Complex64,
    segment_length: f64,
    /// Present on the target path when the ray crosses the slab.
    crossing: Option<(Complex64, Complex64)>,
}

/// Precomputed sample terms for one transmitter position.
#[derive(Debug, Clone)]
struct RayTable {
    obstacle: Vec<Term>,
    target: Vec<Term>,
    obstacle_excluded: usize,
    target_excluded: usize,
}

fn build_terms(
    tr: Vec2,
    samples: &[SurfaceSample],
    slab: Option<&SlabObstacle>,
    with_crossing: bool,
) -> (Vec<Term>, usize) {
    let mut terms = Vec::with_capacity(samples.len());
    let mut excluded = 0;
    for sample in samples {
        let Some(theta) = incidence_angle(tr, sample) else {
            excluded += 1;
            continue;
        };
        let r = reflection_coefficient(theta, &sample.material);
        let cos = theta.cos();
        let crossing = if with_crossing {
            slab.and_then(|s| slab_crossing(s, tr, sample.position))
                .map(|c| (c.transmission.product(), c.phase_per_wavenumber))
        } else {
            None
        };
        terms.push(Term {
            distance: (sample.position - tr).norm(),
            j_per_e: (1.0 - r) * (cos / ETA_0),
            m_per_e: (1.0 + r) * cos,
            segment_length: sample.segment_length,
            crossing,
        });
    }
    (terms, excluded)
}

/// Sums the quadrature terms at one frequency in their stored order.
fn evaluate(terms: &[Term], freq: f64, e0: f64) -> Complex64 {
    let k0 = free_space_wavenumber(freq);
    let omega_mu = 2.0 * PI * freq * MU_0;
    let mut sum = Complex64::new(0.0, 0.0);
    for t in terms {
        let h = h0_2_unchecked(k0 * t.distance);
        let go = match t.crossing {
            Some((trans, phase)) => trans * (J * k0 * phase).exp(),
            None => ONE,
        };
        let e_i = e0 * h * go;
        let g = 0.25 * J * h;
        let e_g = e_i * g;
        // −jωμ₀ J G + (+jk₀ cosθ) G M, both proportional to E_i G
        let integrand = -J * omega_mu * t.j_per_e * e_g + J * k0 * t.m_per_e * e_g;
        // the scattered ray retraces the incident one
        sum += integrand * t.segment_length * go;
    }
    sum
}

/// Discretized scattering faces of a scene.
#[derive(Debug, Clone)]
pub struct SceneSamples {
    pub obstacle: Vec<SurfaceSample>,
    pub target: Vec<SurfaceSample>,
}

impl SceneSamples {
    /// Samples both faces at `samples_per_wavelength` at the scene's highest
    /// frequency.
    pub fn new(scene: &Scene, samples_per_wavelength: f64) -> Result<Self> {
        let lambda = scene.freq.lambda_min();
        let obstacle = match &scene.obstacle {
            Some(slab) => discretize(slab, lambda, samples_per_wavelength)?,
            None => Vec::new(),
        };
        let target = match &scene.target {
            Some(plate) => discretize(plate, lambda, samples_per_wavelength)?,
            None => Vec::new(),
        };
        Ok(SceneSamples { obstacle, target })
    }

    pub fn len(&self) -> usize {
        self.obstacle.len() + self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn table(&self, tr: Vec2, scene: &Scene) -> RayTable {
        let slab = scene.obstacle.as_ref();
        let (obstacle, obstacle_excluded) = build_terms(tr, &self.obstacle, slab, false);
        let (target, target_excluded) = build_terms(tr, &self.target, slab, true);
        RayTable {
            obstacle,
            target,
            obstacle_excluded,
            target_excluded,
        }
    }
}

fn check_frequency(freq: f64) -> Result<()> {
    if freq.is_finite() && freq > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("frequency", format!("must be finite and > 0, got {freq}")))
    }
}

fn check_finite(value: Complex64, what: &str) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numerical(format!("{what} is not finite")))
    }
}

/// PO field at `tr` scattered by `samples` along the given path.
///
/// On the target path each sample's incident and scattered rays pick up the
/// slab crossing factor when `scene` has an obstacle in the way.
pub fn scattered_field(
    tr: Vec2,
    samples: &[SurfaceSample],
    freq: f64,
    path: ScatterPath,
    scene: &Scene,
    opts: &SolverOptions,
) -> Result<FieldValue> {
    check_frequency(freq)?;
    if samples.iter().any(|s| s.position == tr) {
        return Err(Error::Domain("transmitter coincides with a surface sample".into()));
    }
    let with_crossing = path == ScatterPath::Target;
    let (terms, excluded) = build_terms(tr, samples, scene.obstacle.as_ref(), with_crossing);
    let value = check_finite(evaluate(&terms, freq, opts.e0), "scattered field")?;
    Ok(FieldValue {
        value,
        contributing: terms.len(),
        excluded,
    })
}

/// Obstacle and target contributions at one transmitter position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalParts {
    pub obstacle: FieldValue,
    pub target: FieldValue,
}

impl SignalParts {
    pub fn total(&self) -> Complex64 {
        self.obstacle.value + self.target.value
    }
}

/// Both scattered contributions at `tr`, evaluated exactly as the sweep does.
pub fn signal_parts(
    tr: Vec2,
    scene: &Scene,
    freq: f64,
    opts: &SolverOptions,
) -> Result<SignalParts> {
    check_frequency(freq)?;
    let samples = SceneSamples::new(scene, opts.samples_per_wavelength)?;
    let table = samples.table(tr, scene);
    let obstacle = evaluate(&table.obstacle, freq, opts.e0);
    let target = evaluate(&table.target, freq, opts.e0);
    Ok(SignalParts {
        obstacle: FieldValue {
            value: check_finite(obstacle, "obstacle field")?,
            contributing: table.obstacle.len(),
            excluded: table.obstacle_excluded,
        },
        target: FieldValue {
            value: check_finite(target, "target field")?,
            contributing: table.target.len(),
            excluded: table.target_excluded,
        },
    })
}

/// `S(r_tr) = E_obs + E_tar`.
pub fn total_signal(tr: Vec2, scene: &Scene, freq: f64, opts: &SolverOptions) -> Result<FieldValue> {
    let parts = signal_parts(tr, scene, freq, opts)?;
    Ok(FieldValue {
        value: parts.total(),
        contributing: parts.obstacle.contributing + parts.target.contributing,
        excluded: parts.obstacle.excluded + parts.target.excluded,
    })
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::invalid("workers", "must be >= 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))
}

/// Full scan × frequency sweep.
///
/// Each scan position is handled by one task with a fixed summation order,
/// so the result does not depend on `workers`.
pub fn sweep(scene: &Scene, opts: &SolverOptions, workers: usize) -> Result<Dataset> {
    let samples = SceneSamples::new(scene, opts.samples_per_wavelength)?;
    let pool = thread_pool(workers)?;
    let scan = scene.scan;
    let freq = scene.freq;
    let columns: Vec<Vec<Complex64>> = pool.install(|| {
        (0..scan.count())
            .into_par_iter()
            .map(|p| {
                let table = samples.table(scan.position(p), scene);
                freq.frequencies()
                    .map(|f| evaluate(&table.obstacle, f, opts.e0) + evaluate(&table.target, f, opts.e0))
                    .collect()
            })
            .collect()
    });

    let (q_count, p_count) = (freq.count(), scan.count());
    let mut data = vec![Complex64::new(0.0, 0.0); q_count * p_count];
    for (p, column) in columns.iter().enumerate() {
        for (q, v) in column.iter().enumerate() {
            data[q * p_count + p] = *v;
        }
    }
    if data.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Numerical("sweep produced non-finite field values".into()));
    }
    Dataset::new(scan, freq, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{build_paper_scene, FrequencyGrid, PaperVariant, ScanPlan, TargetPlate};
    use approx::assert_relative_eq;

    fn sample(x: f64, y: f64, dl: f64, material: Material) -> SurfaceSample {
        SurfaceSample {
            position: Vec2::new(x, y),
            normal: Vec2::UNIT_Y,
            segment_length: dl,
            material,
        }
    }

    fn metal() -> Material {
        Material::new(1.0, 2.28e6).unwrap()
    }

    fn small_scene(obstacle: Option<SlabObstacle>, target_len: f64) -> Scene {
        let scan = ScanPlan::new(0.0, 0.01, 5, 0.5).unwrap();
        let freq = FrequencyGrid::new(79e9, 100e6, 3).unwrap();
        let plate = TargetPlate::new((0.02 - 0.5 * target_len, 0.02 + 0.5 * target_len), metal()).unwrap();
        Scene::new(scan, freq, obstacle, Some(plate)).unwrap()
    }

    #[test]
    fn incident_field_at_unit_argument() {
        let k = 2.0;
        let s = sample(0.0, 0.0, 1e-3, Material::AIR);
        let f = incident_fields(Vec2::new(0.0, 0.5), &s, k, 1.0, ONE).unwrap();
        assert!((f.e.re - 0.765_197_686_557_966_6).abs() < 1e-13);
        assert!((f.e.im + 0.088_256_964_215_676_96).abs() < 1e-13);
        assert_relative_eq!(f.h[0].norm() + f.h[1].norm(), f.e.norm() / ETA_0, max_relative = 1e-14);
        assert_eq!(f.direction, Vec2::new(0.0, -1.0));
        assert!(incident_fields(Vec2::new(0.0, 0.0), &s, k, 1.0, ONE).is_err());
    }

    #[test]
    fn current_limits() {
        let tr = Vec2::new(0.0, 0.5);
        let k = free_space_wavenumber(79e9);
        let air = sample(0.0, 0.0, 1e-3, Material::AIR);
        let inc = incident_fields(tr, &air, k, 1.0, ONE).unwrap();
        let c = equivalent_currents(&air, &inc, Angle::NORMAL);
        assert_relative_eq!(c.j_z.re, inc.e.re / ETA_0, max_relative = 1e-14);
        assert_eq!(c.m_t, inc.e);

        // PEC limit: M → 0, J → 2 E_i / η₀
        let pec = sample(0.0, 0.0, 1e-3, Material::new(1.0, 1e14).unwrap());
        let c = equivalent_currents(&pec, &inc, Angle::NORMAL);
        assert!(c.m_t.norm() < 1e-6 * inc.e.norm());
        assert!((c.j_z - 2.0 * inc.e / ETA_0).norm() < 1e-6 * c.j_z.norm());
    }

    #[test]
    fn empty_scene_is_silent() {
        let base = build_paper_scene(PaperVariant::NoObstacle);
        let empty = Scene::new(base.scan, base.freq, None, None).unwrap();
        let v = total_signal(Vec2::new(0.1, 0.5), &empty, 79e9, &SolverOptions::default()).unwrap();
        assert_eq!(v.value, Complex64::new(0.0, 0.0));
        assert_eq!(v.contributing, 0);
        assert!(!v.all_grazing());
    }

    #[test]
    fn grazing_samples_are_flagged() {
        let scene = small_scene(None, 0.01);
        let s = [sample(10.0, 0.0, 1e-3, Material::AIR)];
        let v = scattered_field(Vec2::new(0.0, 0.05), &s, 79e9, ScatterPath::Obstacle, &scene, &SolverOptions::default())
            .unwrap();
        assert!(v.all_grazing());
        assert_eq!(v.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_sample_hand_evaluation() {
        // one metal facet 0.4 m below and 0.1 m to the side of the radar;
        // reference computed in 40-digit arithmetic by
        // tests/data/gen_kernel_reference.py
        let scene = small_scene(None, 0.01);
        let s = [sample(0.1, 0.1, 3e-4, metal())];
        let v = scattered_field(Vec2::new(0.0, 0.5), &s, 79e9, ScatterPath::Target, &scene, &SolverOptions::default())
            .unwrap();
        assert_eq!(v.contributing, 1);
        let expect = Complex64::new(SINGLE_SAMPLE_RE, SINGLE_SAMPLE_IM);
        assert!((v.value - expect).norm() < 1e-9 * expect.norm(), "{} vs {}", v.value, expect);
    }

    const SINGLE_SAMPLE_RE: f64 = 2.132_148_284_963_432_5e-4;
    const SINGLE_SAMPLE_IM: f64 = -7.023_563_743_243_477e-5;

    #[test]
    fn no_obstacle_target_equals_total() {
        let scene = small_scene(None, 0.02);
        let opts = SolverOptions::default();
        let tr = scene.scan.position(2);
        let samples = SceneSamples::new(&scene, opts.samples_per_wavelength).unwrap();
        let direct = scattered_field(tr, &samples.target, 79e9, ScatterPath::Target, &scene, &opts).unwrap();
        let total = total_signal(tr, &scene, 79e9, &opts).unwrap();
        assert_eq!(direct.value, total.value);
    }

    #[test]
    fn monostatic_crossing_is_symmetric() {
        let scene = build_paper_scene(PaperVariant::Softwood);
        let slab = scene.obstacle.as_ref().unwrap();
        for p in [0, 37, 125, 250] {
            let tr = scene.scan.position(p);
            for x in [0.075, 0.1003, 0.16, 0.175] {
                let t = Vec2::new(x, 0.0);
                let inc = slab_crossing(slab, tr, t).unwrap();
                let ret = slab_crossing(slab, t, tr).unwrap();
                assert_eq!(inc, ret);
                assert_eq!(inc.factor(1655.0), ret.factor(1655.0));
            }
        }
    }

    #[test]
    fn crossing_outside_slab_is_absent() {
        let slab = SlabObstacle::homogeneous(0.25, 0.01, (0.0, 0.05), Material::AIR).unwrap();
        assert!(slab_crossing(&slab, Vec2::new(0.3, 0.5), Vec2::new(0.3, 0.0)).is_none());
        assert!(slab_crossing(&slab, Vec2::new(0.0, 0.5), Vec2::new(0.0, 0.3)).is_none());
        let c = slab_crossing(&slab, Vec2::new(0.0, 0.5), Vec2::new(0.04, 0.0)).unwrap();
        assert_relative_eq!(c.point.x, 0.02 * (0.5 - 0.245) / 0.25, max_relative = 1e-14);
    }

    #[test]
    fn transparent_obstacle_changes_nothing() {
        let base = build_paper_scene(PaperVariant::Mdf);
        let (a, b) = base.obstacle.as_ref().unwrap().x_extent();
        let clear = SlabObstacle::homogeneous(0.25, 0.009, (a, b), Material::AIR).unwrap();
        let with = Scene::new(base.scan, base.freq, Some(clear), base.target).unwrap();
        let without = Scene::new(base.scan, base.freq, None, base.target).unwrap();
        let opts = SolverOptions::default();
        for p in [0, 125, 250] {
            let tr = base.scan.position(p);
            let w = signal_parts(tr, &with, 79e9, &opts).unwrap();
            let wo = signal_parts(tr, &without, 79e9, &opts).unwrap();
            assert_eq!(w.target.value, wo.target.value);
            assert!(w.obstacle.value.norm() <= 1e-10 * w.target.value.norm());
        }
    }

    #[test]
    fn mdf_attenuates_target() {
        let mdf = build_paper_scene(PaperVariant::Mdf);
        let clear = build_paper_scene(PaperVariant::NoObstacle);
        let opts = SolverOptions::default();
        let tr = mdf.scan.position(125);
        let with = signal_parts(tr, &mdf, 79e9, &opts).unwrap();
        let without = signal_parts(tr, &clear, 79e9, &opts).unwrap();
        assert!(with.total().norm().is_finite());
        assert!(with.target.value.norm() < without.target.value.norm());
    }

    #[test]
    fn lossless_slab_respects_transmission_bound() {
        // max over angle of |T₀→₁ T₁→₀| for ε = 1.99, from the mpmath oracle
        let bound = 0.999_999_91;
        let slab = SlabObstacle::homogeneous(0.25, 0.009, (-1.0, 1.0), Material::lossless(1.99).unwrap()).unwrap();
        for i in 0..50 {
            let x = i as f64 * 0.02;
            let c = slab_crossing(&slab, Vec2::new(0.0, 0.5), Vec2::new(x, 0.0)).unwrap();
            for k0 in [1617.0, 1655.7, 1693.0] {
                assert!(c.factor(k0).norm() <= bound + 1e-12);
            }
        }
    }

    #[test]
    fn linear_in_source_amplitude() {
        let scene = small_scene(None, 0.02);
        let one = sweep(&scene, &SolverOptions::default(), 1).unwrap();
        let two = sweep(&scene, &SolverOptions { e0: 2.0, ..Default::default() }, 1).unwrap();
        let three = sweep(&scene, &SolverOptions { e0: 3.0, ..Default::default() }, 1).unwrap();
        for ((a, b), c) in one.data().iter().zip(two.data()).zip(three.data()) {
            assert_eq!(*b, 2.0 * a);
            assert!((c - 3.0 * a).norm() <= 1e-15 * c.norm());
        }
    }

    #[test]
    fn sweep_matches_pointwise_evaluation() {
        let scene = small_scene(None, 0.02);
        let opts = SolverOptions::default();
        let ds = sweep(&scene, &opts, 2).unwrap();
        assert_eq!((ds.q_count(), ds.p_count()), (3, 5));
        for q in 0..3 {
            for p in 0..5 {
                let v = total_signal(scene.scan.position(p), &scene, scene.freq.frequency(q), &opts).unwrap();
                assert_eq!(ds.get(q, p), v.value);
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let scene = small_scene(None, 0.02);
        let opts = SolverOptions::default();
        let a = sweep(&scene, &opts, 1).unwrap();
        let b = sweep(&scene, &opts, 3).unwrap();
        assert_eq!(a, b);
        assert!(sweep(&scene, &opts, 0).is_err());
    }

    #[test]
    fn small_facet_decays_like_squared_hankel() {
        let s = [sample(0.0, 0.0, 1e-4, metal())];
        let scene = small_scene(None, 0.01);
        let opts = SolverOptions::default();
        let k = free_space_wavenumber(79e9);
        let field = |d: f64| {
            scattered_field(Vec2::new(0.0, d), &s, 79e9, ScatterPath::Target, &scene, &opts)
                .unwrap()
                .value
                .norm()
        };
        let h2 = |d: f64| hankel_h0_2(k * d).unwrap().norm_sqr();
        for d in [0.5, 0.8] {
            let ratio = (field(d) / field(0.3)) / (h2(d) / h2(0.3));
            assert!((ratio - 1.0).abs() < 0.02, "d = {d}: {ratio}");
        }
    }

    #[test]
    fn adjacent_frequency_phase_step() {
        let d = 0.5;
        let s = [sample(0.0, 0.0, 1e-4, metal())];
        let scene = small_scene(None, 0.01);
        let opts = SolverOptions::default();
        let (f0, df) = (79e9, 14.0625e6);
        let at = |f: f64| {
            scattered_field(Vec2::new(0.0, d), &s, f, ScatterPath::Target, &scene, &opts)
                .unwrap()
                .value
        };
        let step = (at(f0 + df) / at(f0)).arg();
        let dk = free_space_wavenumber(f0 + df) - free_space_wavenumber(f0);
        assert!((step + 2.0 * dk * d).abs() < 1e-3, "{step} vs {}", -2.0 * dk * d);
    }
}
