//! Fixtures shared by the benchmarks: reduced copies of the canonical scenes
//! that keep a single iteration well under a second.

use subsurf_core::{build_paper_scene, FrequencyGrid, PaperVariant, ScanPlan, Scene};

/// The canonical scene with every `stride`-th scan position and frequency.
pub fn thinned_scene(variant: PaperVariant, stride: usize) -> Scene {
    let full = build_paper_scene(variant);
    let scan = ScanPlan::new(
        full.scan.x_start(),
        full.scan.step() * stride as f64,
        full.scan.count().div_ceil(stride),
        full.scan.y_tr(),
    )
    .expect("thinned scan is valid");
    let freq = FrequencyGrid::new(
        full.freq.f_start(),
        full.freq.f_step() * stride as f64,
        full.freq.count().div_ceil(stride),
    )
    .expect("thinned grid is valid");
    Scene::new(scan, freq, full.obstacle, full.target).expect("same geometry")
}

/// Log-spaced Hankel arguments spanning the series and asymptotic branches.
pub fn hankel_arguments(n: usize) -> Vec<f64> {
    let (lo, hi) = (0.1f64.ln(), 2500f64.ln());
    (0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()).collect()
}
