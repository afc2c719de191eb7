use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use subsurf_core::fmcw::{dataset_from_if_cube, read_if_csv, RadarParams};
use subsurf_core::imaging::{read_image_csv, write_image_csv, write_pgm, ImageMeta};
use subsurf_core::metrics::{
    default_target_band, fwhm_length, peak_spacing_with, profile_at_target_center, relative_intensity,
};
use subsurf_core::solver::SceneSamples;
use subsurf_core::{
    backproject, build_paper_scene, range_resolution, sweep, Dataset, Error, GridSpec, MagnitudeImage,
    Normalization, PaperVariant, Result, Scene, SolverOptions,
};

use crate::{AnalyzeArgs, ImageArgs, SceneArgs, SimulateArgs};

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) => 3,
        _ => 2,
    }
}

fn check_workers(workers: usize) -> Result<()> {
    if workers == 0 {
        return Err(Error::Invalid {
            field: "--workers".into(),
            reason: "must be >= 1".into(),
        });
    }
    Ok(())
}

fn load_scene(path: &Path) -> Result<Scene> {
    if !path.exists() {
        return Err(Error::Io {
            path: path.to_owned(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
        });
    }
    Scene::load(path)
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    check_workers(args.workers)?;
    let scene = load_scene(&args.scene)?;
    let opts = SolverOptions {
        samples_per_wavelength: args.spw,
        ..SolverOptions::default()
    };
    let samples = SceneSamples::new(&scene, args.spw)?;
    let start = Instant::now();
    let dataset = sweep(&scene, &opts, args.workers)?;
    let elapsed = start.elapsed().as_secs_f64();
    dataset.write(&args.out)?;
    if let Some(csv) = &args.csv {
        dataset.write_csv(csv)?;
    }
    println!(
        "P = {}, Q = {}, wall time {elapsed:.2} s, {} surface samples ({} obstacle, {} target) at {} per wavelength",
        dataset.p_count(),
        dataset.q_count(),
        samples.len(),
        samples.obstacle.len(),
        samples.target.len(),
        args.spw
    );
    Ok(())
}

fn load_dataset(args: &ImageArgs) -> Result<Dataset> {
    let scene = args.scene.as_deref().map(load_scene).transpose()?;
    if let Some(raw) = &args.raw_if {
        let scene = scene.expect("clap enforces --scene with --raw-if");
        let cube = read_if_csv(raw)?;
        return dataset_from_if_cube(&cube, &RadarParams::paper(), &scene.scan);
    }
    let path = args.dataset.as_ref().expect("clap enforces --dataset or --raw-if");
    if path.extension().is_some_and(|e| e == "csv") {
        let Some(scene) = scene else {
            return Err(Error::Invalid {
                field: "--scene".into(),
                reason: "a CSV dataset needs the scene file for the radar height".into(),
            });
        };
        return Dataset::read_csv(path, scene.scan.y_tr());
    }
    Dataset::read(path)
}

fn with_suffix(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn image(args: ImageArgs) -> Result<()> {
    check_workers(args.workers)?;
    let dataset = load_dataset(&args)?;
    let grid = GridSpec::for_scan(dataset.scan(), args.pixel_x, args.pixel_y)?;
    let start = Instant::now();
    let image = backproject(&dataset, &grid, args.range_offset, args.workers)?;
    let elapsed = start.elapsed().as_secs_f64();
    let magnitude = image.magnitude();
    let peak = magnitude.max();
    // an all-zero image stays all zero
    let scale = if peak > 0.0 { peak } else { 1.0 };
    let display = subsurf_core::imaging::normalize_magnitude(&magnitude, Normalization::External(scale))?;

    write_pgm(&display, with_suffix(&args.out, "pgm"))?;
    write_image_csv(&magnitude, with_suffix(&args.out, "csv"))?;
    let freq = dataset.freq();
    ImageMeta {
        x_start_m: grid.x.start(),
        x_step_m: grid.x.step(),
        x_count: grid.x.count(),
        y_start_m: grid.y.start(),
        y_step_m: grid.y.step(),
        y_count: grid.y.count(),
        normalization_max: peak,
        f_start_hz: freq.f_start(),
        f_step_hz: freq.f_step(),
        f_count: freq.count(),
        range_offset_m: args.range_offset,
        row_order: "y_descending".into(),
    }
    .write(with_suffix(&args.out, "meta"))?;
    println!(
        "{} x {} pixels in {elapsed:.2} s, peak magnitude {peak:e}",
        grid.x.count(),
        grid.y.count()
    );
    Ok(())
}

/// Image CSV and, when present, its sidecar. `path` is a stem or the CSV.
fn load_image(path: &Path) -> Result<(MagnitudeImage, Option<ImageMeta>)> {
    let (csv, meta) = if path.extension().is_some_and(|e| e == "csv") {
        (path.to_owned(), path.with_extension("meta"))
    } else {
        (with_suffix(path, "csv"), with_suffix(path, "meta"))
    };
    let image = read_image_csv(&csv)?;
    let meta = if meta.exists() { Some(ImageMeta::read(&meta)?) } else { None };
    Ok((image, meta))
}

#[derive(Debug, Default, Serialize)]
struct Report {
    image: String,
    reference: Option<String>,
    target_band_m: Option<[f64; 2]>,
    fwhm_m: Option<f64>,
    relative_intensity: Option<f64>,
    peak_spacing_m: Option<f64>,
    range_resolution_m: Option<f64>,
    /// Metrics that could not be computed, with the reason.
    errors: std::collections::BTreeMap<&'static str, String>,
}

pub fn analyze(args: AnalyzeArgs) -> Result<()> {
    if args.relative && args.reference.is_none() {
        return Err(Error::Invalid {
            field: "--reference".into(),
            reason: "relative intensity needs a reference image".into(),
        });
    }
    let (image, meta) = load_image(&args.image)?;
    let reference = args.reference.as_deref().map(load_image).transpose()?;
    let scene = args.scene.as_deref().map(load_scene).transpose()?;

    let mut report = Report {
        image: args.image.display().to_string(),
        reference: args.reference.as_ref().map(|p| p.display().to_string()),
        ..Report::default()
    };
    let resolution = meta
        .as_ref()
        .or(reference.as_ref().and_then(|r| r.1.as_ref()))
        .map(|m| m.f_step_hz * m.f_count as f64)
        .map(|bandwidth| subsurf_core::kernels::SPEED_OF_LIGHT / (2.0 * bandwidth))
        .or_else(|| scene.as_ref().and_then(|s| range_resolution(&s.freq).ok()));
    report.range_resolution_m = resolution;
    let Some(width) = resolution else {
        report.errors.insert(
            "range_resolution_m",
            "no image metadata or scene to take the bandwidth from".into(),
        );
        return emit(&report, args.out.as_deref());
    };

    let band = match &reference {
        Some((r, _)) => default_target_band(r, None, width),
        None => {
            let back = scene.as_ref().and_then(|s| s.obstacle.as_ref()).map(|o| o.y_back());
            default_target_band(&image, back, width)
        }
    };
    let band = match band {
        Ok(b) => b,
        Err(e) => {
            report.errors.insert("target_band_m", e.to_string());
            return emit(&report, args.out.as_deref());
        }
    };
    report.target_band_m = Some([band.0, band.1]);
    let profile = profile_at_target_center(&image, band)?;
    let mut record = |name: &'static str, value: Result<f64>| match value {
        Ok(v) => Some(v),
        Err(e) => {
            report.errors.insert(name, e.to_string());
            None
        }
    };
    let fwhm = record("fwhm_m", fwhm_length(&profile));
    let spacing = record("peak_spacing_m", peak_spacing_with(&profile, args.prominence));
    // scaled by the reference's own profile peak in the same band
    let relative = reference.as_ref().and_then(|(r, _)| {
        let value = profile_at_target_center(r, band).and_then(|p| relative_intensity(&profile, p.max()));
        record("relative_intensity", value)
    });
    report.fwhm_m = fwhm;
    report.peak_spacing_m = spacing;
    report.relative_intensity = relative;
    emit(&report, args.out.as_deref())
}

fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    println!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text + "\n").map_err(|e| Error::Io {
            path: path.to_owned(),
            source: e,
        })?;
    }
    Ok(())
}

pub fn scene(args: SceneArgs) -> Result<()> {
    let variant: PaperVariant = args.variant.parse()?;
    let text = build_paper_scene(variant).to_toml_string();
    std::fs::write(&args.out, text).map_err(|e| Error::Io {
        path: args.out.clone(),
        source: e,
    })
}
