//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any criterion fails.
//!
//! The full-scene runs are shared between criteria, so the whole suite runs
//! in one process instead of through the libtest harness.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};
use subsurf_core::fmcw::{dataset_from_if_cube, if_signal};
use subsurf_core::kernels::{
    hankel_h0_2, reflection_coefficient, transmission_pair, SPEED_OF_LIGHT,
};
use subsurf_core::metrics::{
    default_target_band, fwhm_length, main_lobe_width, peak_spacing, profile_at_target_center,
    relative_intensity,
};
use subsurf_core::*;

const WORKERS: usize = 8;

const C1_FWHM: (f64, f64) = (95e-3, 105e-3);
const C1_TIME_LIMIT_S: f64 = 600.0;
const C2_WIDTH: f64 = 41.7e-3;
const C2_REL_TOL: f64 = 0.20;
const C3_REL_INTENSITY: (f64, f64) = (0.2, 0.4);
const C4_SPACING: (f64, f64) = (16e-3, 24e-3);
const C4_FWHM: (f64, f64) = (90e-3, 105e-3);
const C5_REL_ERR: f64 = 1e-8;
const C5_POINTS: usize = 1000;
const C6_ANGLES: usize = 100;
const C6_METAL_TOL: f64 = 1e-3;
const C6_T_TOL: f64 = 1e-12;
const C7_REFLECTORS: usize = 5;
const C7_SEED: u64 = 0x5eed_0007;
const C8_WORKERS: [usize; 3] = [1, 4, 8];
const C9_REL_TOL: f64 = 1e-10;
const C10_FREQ: f64 = 79e9;
const C10_REL_TOL: f64 = 0.01;

struct Run {
    scene: Scene,
    dataset: Dataset,
    magnitude: MagnitudeImage,
    pixels: Vec<Complex64>,
    seconds: f64,
}

fn simulate(variant: PaperVariant) -> Run {
    let scene = build_paper_scene(variant);
    let t = Instant::now();
    let dataset = sweep(&scene, &SolverOptions::default(), WORKERS).unwrap();
    let grid = GridSpec::default_for(&scene.scan).unwrap();
    let image = backproject(&dataset, &grid, 0.0, WORKERS).unwrap();
    let seconds = t.elapsed().as_secs_f64();
    Run {
        scene,
        magnitude: image.magnitude(),
        pixels: image.pixels().to_vec(),
        dataset,
        seconds,
    }
}

fn run(variant: PaperVariant) -> &'static Run {
    static NONE: OnceLock<Run> = OnceLock::new();
    static MDF: OnceLock<Run> = OnceLock::new();
    static SOFTWOOD: OnceLock<Run> = OnceLock::new();
    let cell = match variant {
        PaperVariant::NoObstacle => &NONE,
        PaperVariant::Mdf => &MDF,
        PaperVariant::Softwood => &SOFTWOOD,
    };
    cell.get_or_init(|| simulate(variant))
}

/// Target band and profile peak of the unobstructed image; obstructed
/// profiles are cut in the same band and scaled by the same peak.
fn reference() -> ((f64, f64), f64) {
    let r = run(PaperVariant::NoObstacle);
    let width = range_resolution(&r.scene.freq).unwrap();
    let band = default_target_band(&r.magnitude, None, width).unwrap();
    (band, profile_at_target_center(&r.magnitude, band).unwrap().max())
}

fn within(v: f64, (lo, hi): (f64, f64)) -> bool {
    v >= lo && v <= hi
}

fn mm(v: f64) -> String {
    format!("{:.2} mm", v * 1e3)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c1() -> Outcome {
    let r = run(PaperVariant::NoObstacle);
    let (band, ref_max) = reference();
    let profile = profile_at_target_center(&r.magnitude, band).unwrap();
    let fwhm = fwhm_length(&profile).unwrap();
    let pass = within(fwhm, C1_FWHM) && r.seconds < C1_TIME_LIMIT_S;
    outcome(
        pass,
        format!(
            "no-obstacle FWHM {} in [95, 105] mm; sweep+image {:.1} s < {C1_TIME_LIMIT_S} s \
             ({WORKERS} workers); peak {ref_max:.4e}",
            mm(fwhm),
            r.seconds
        ),
    )
}

fn c2() -> Outcome {
    let r = run(PaperVariant::NoObstacle);
    let target = r.scene.target.unwrap();
    let centre = 0.5 * (target.x_extent().0 + target.x_extent().1);
    let grid = r.magnitude.grid();
    let column = r.magnitude.column(grid.x.nearest(centre));
    // half intensity, i.e. -3 dB of the magnitude
    let width = main_lobe_width(&grid.y, &column, 0.5f64.sqrt()).unwrap();
    let half_magnitude = main_lobe_width(&grid.y, &column, 0.5).unwrap();
    let window = (C2_WIDTH * (1.0 - C2_REL_TOL), C2_WIDTH * (1.0 + C2_REL_TOL));
    outcome(
        within(width, window),
        format!(
            "range main lobe at half power {} in [{}, {}] (41.7 mm ± 20%); at half magnitude {}",
            mm(width),
            mm(window.0),
            mm(window.1),
            mm(half_magnitude)
        ),
    )
}

fn c3() -> Outcome {
    let (band, ref_max) = reference();
    let r = run(PaperVariant::Mdf);
    let profile = profile_at_target_center(&r.magnitude, band).unwrap();
    let rel = relative_intensity(&profile, ref_max).unwrap();
    outcome(
        within(rel, C3_REL_INTENSITY),
        format!(
            "MDF relative intensity {rel:.4} in [0.2, 0.4] (band y in [{}, {}])",
            mm(band.0),
            mm(band.1)
        ),
    )
}

fn c4() -> Outcome {
    let (band, _) = reference();
    let r = run(PaperVariant::Softwood);
    let profile = profile_at_target_center(&r.magnitude, band).unwrap();
    let spacing = peak_spacing(&profile);
    let fwhm = fwhm_length(&profile);
    let pass = matches!(spacing, Ok(s) if within(s, C4_SPACING))
        && matches!(fwhm, Ok(f) if within(f, C4_FWHM));
    let show = |v: &Result<f64>| match v {
        Ok(v) => mm(*v),
        Err(e) => format!("undefined ({e})"),
    };
    outcome(
        pass,
        format!(
            "softwood peak spacing {} in [16, 24] mm; FWHM {} in [90, 105] mm",
            show(&spacing),
            show(&fwhm)
        ),
    )
}

fn c5() -> Outcome {
    let table = include_str!("data/hankel_reference.csv");
    let mut worst = (0.0f64, 0.0f64);
    let mut count = 0;
    for line in table.lines().skip(1).take(C5_POINTS) {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let exact = Complex64::new(v[1], -v[2]);
        let err = (hankel_h0_2(v[0]).unwrap() - exact).norm() / exact.norm();
        if err > worst.0 {
            worst = (err, v[0]);
        }
        count += 1;
    }
    outcome(
        count == C5_POINTS && worst.0 <= C5_REL_ERR,
        format!(
            "H0(2) over {count} log-spaced points on [0.1, 2500]: worst relative error {:.2e} \
             at x = {:.4} (limit 1e-8)",
            worst.0, worst.1
        ),
    )
}

fn c6() -> Outcome {
    let m = |(re, loss): (f64, f64)| Material::new(re, loss).unwrap();
    let materials = [
        ("air", Material::AIR),
        ("wood", m(scene::paper::EPS_WOOD)),
        ("grain", m(scene::paper::EPS_GRAIN)),
        ("metal", m(scene::paper::EPS_METAL)),
    ];
    let angles: Vec<Angle> = (0..C6_ANGLES)
        .map(|i| Angle::from_degrees(89.0 * i as f64 / (C6_ANGLES - 1) as f64).unwrap())
        .collect();

    let mut max_r = 0.0f64;
    let mut air_exact = true;
    for (name, mat) in &materials {
        for &a in &angles {
            let r = reflection_coefficient(a, mat);
            max_r = max_r.max(r.norm());
            if *name == "air" && r != Complex64::new(0.0, 0.0) {
                air_exact = false;
            }
        }
    }
    let passive = max_r <= 1.0;

    let metal = (reflection_coefficient(Angle::NORMAL, &materials[3].1) + 1.0).norm();
    let metal_ok = metal < C6_METAL_TOL;

    let mut t_err = 0.0f64;
    for eps in [1.99f64, 2.5, 4.0, 9.0] {
        let n = eps.sqrt();
        let exact = 4.0 * n / ((1.0 + n) * (1.0 + n));
        let t = transmission_pair(Angle::NORMAL, &Material::AIR, &Material::lossless(eps).unwrap()).product();
        t_err = t_err.max((t - exact).norm());
    }
    let t_ok = t_err <= C6_T_TOL;

    let flag = |ok: bool| if ok { "ok" } else { "FAIL" };
    outcome(
        passive && metal_ok && air_exact && t_ok,
        format!(
            "max|R| {max_r:.6} <= 1 [{}]; |R(0, metal) + 1| = {metal:.4e} < 1e-3 [{}]; \
             R(θ, air) == 0 [{}]; lossless T product error {t_err:.1e} <= 1e-12 [{}]",
            flag(passive),
            flag(metal_ok),
            flag(air_exact),
            flag(t_ok)
        ),
    )
}

fn c7() -> Outcome {
    let params = fmcw::RadarParams::paper();
    let scan = build_paper_scene(PaperVariant::NoObstacle).scan;
    let grid = GridSpec::default_for(&scan).unwrap();
    let mut rng = StdRng::seed_from_u64(C7_SEED);
    let mut pass = true;
    let mut worst = (0.0f64, 0.0f64);
    let mut bins = Vec::new();
    let mut offsets = Vec::new();
    for _ in 0..C7_REFLECTORS {
        let truth = Vec2::new(rng.random_range(0.04..0.21), rng.random_range(0.0..0.3));
        let tau = |p: usize| 2.0 * (scan.position(p) - truth).norm() / SPEED_OF_LIGHT;
        let cube: Vec<Vec<Complex64>> = (0..scan.count())
            .map(|p| if_signal(&params, &[fmcw::Reflector::new(1.0, tau(p)).unwrap()]))
            .collect();
        let dataset = dataset_from_if_cube(&cube, &params, &scan).unwrap();
        let image = backproject(&dataset, &grid, 0.0, WORKERS).unwrap();
        // the argmax pixel must be the pixel holding the reflector or one
        // of its neighbours
        let (ix, iy) = image.argmax();
        let di = ix.abs_diff(grid.x.nearest(truth.x));
        let dj = iy.abs_diff(grid.y.nearest(truth.y));
        worst = (worst.0.max((grid.x.value(ix) - truth.x).abs()), worst.1.max((grid.y.value(iy) - truth.y).abs()));
        offsets.push(format!("({di},{dj})"));
        pass &= di <= 1 && dj <= 1;

        let p = scan_index(&scan, truth.x);
        let expected = (params.n as f64 * params.slope * tau(p) * params.dt).round() as usize;
        let found = dft_peak(&cube[p]);
        pass &= found == expected;
        bins.push(format!("{found}/{expected}"));
    }
    outcome(
        pass,
        format!(
            "{C7_REFLECTORS} point reflectors: argmax pixel offsets {} <= (1,1) cell; \
             worst |dx| {}, |dy| {}; beat bins found/expected {}",
            offsets.join(" "),
            mm(worst.0),
            mm(worst.1),
            bins.join(" ")
        ),
    )
}

fn scan_index(scan: &ScanPlan, x: f64) -> usize {
    (((x - scan.x_start()) / scan.step()).round() as usize).min(scan.count() - 1)
}

fn dft_peak(s: &[Complex64]) -> usize {
    let n = s.len();
    let mag = |bin: usize| -> f64 {
        s.iter()
            .enumerate()
            .map(|(i, v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((bin * i) % n) as f64 / n as f64))
            .sum::<Complex64>()
            .norm()
    };
    (0..n).max_by(|&a, &b| mag(a).total_cmp(&mag(b))).unwrap()
}

fn c8() -> Outcome {
    let base = run(PaperVariant::NoObstacle);
    let grid = GridSpec::default_for(&base.scene.scan).unwrap();
    let bytes = base.dataset.to_bytes();
    let bits = |px: &[Complex64]| -> Vec<(u64, u64)> { px.iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect() };
    let base_bits = bits(&base.pixels);
    let mut pass = true;
    let mut notes = Vec::new();
    for w in C8_WORKERS {
        let ds = sweep(&base.scene, &SolverOptions::default(), w).unwrap();
        let same_ds = ds.to_bytes() == bytes;
        let img = backproject(&base.dataset, &grid, 0.0, w).unwrap();
        let same_img = bits(img.pixels()) == base_bits;
        pass &= same_ds && same_img;
        notes.push(format!("{w}: dataset {} image {}", same_ds, same_img));
    }
    outcome(
        pass,
        format!("byte-identical to the {WORKERS}-worker run ({})", notes.join(", ")),
    )
}

fn c9() -> Outcome {
    let base = run(PaperVariant::NoObstacle);
    let mdf = build_paper_scene(PaperVariant::Mdf);
    let slab = mdf.obstacle.as_ref().unwrap();
    let clear = SlabObstacle::homogeneous(slab.y_front(), slab.thickness(), slab.x_extent(), Material::AIR).unwrap();
    let scene = Scene::new(mdf.scan, mdf.freq, Some(clear), mdf.target).unwrap();
    let ds = sweep(&scene, &SolverOptions::default(), WORKERS).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in ds.data().iter().zip(base.dataset.data()) {
        let err = (a - b).norm();
        worst = worst.max(if err == 0.0 { 0.0 } else { err / b.norm() });
    }
    outcome(
        worst <= C9_REL_TOL,
        format!("slab with ε = 1 vs no slab: worst relative entry difference {worst:.2e} <= 1e-10"),
    )
}

fn c10() -> Outcome {
    let scene = build_paper_scene(PaperVariant::NoObstacle);
    let coarse = SolverOptions::default();
    let fine = SolverOptions {
        samples_per_wavelength: 2.0 * coarse.samples_per_wavelength,
        ..coarse
    };
    let mut worst = 0.0f64;
    for tr in scene.scan.positions() {
        let a = total_signal(tr, &scene, C10_FREQ, &coarse).unwrap().value.norm();
        let b = total_signal(tr, &scene, C10_FREQ, &fine).unwrap().value.norm();
        worst = worst.max((a - b).abs() / b);
    }
    outcome(
        worst < C10_REL_TOL,
        format!("10 → 20 samples per wavelength at 79 GHz: worst magnitude change {:.4}% < 1%", worst * 100.0),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("C1", c1),
        ("C2", c2),
        ("C3", c3),
        ("C4", c4),
        ("C5", c5),
        ("C6", c6),
        ("C7", c7),
        ("C8", c8),
        ("C9", c9),
        ("C10", c10),
    ];
    let mut failed = Vec::new();
    for (id, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("error: {msg}"))
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("{id:<4}{verdict}  {}", result.detail);
        if !result.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: {} of 10 criteria fail ({})", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
