//! Shared fixtures for the stage benchmarks: one deterministic synthetic
//! sample at the reference layout, plus the pipeline settings that process
//! it cleanly.

use straincam_core::synth::generate_sample;
use straincam_core::{
    CameraModel, ColorImage, DisplacementField, GridSpec, NoiseSpec, PipelineConfig, Point2,
    SynthSample,
};

pub fn bench_camera() -> CameraModel {
    CameraModel { fx: 400.0, fy: 400.0, cx: 320.0, cy: 240.0, k1: 0.05, k2: 0.0, k3: 0.0, k4: 0.0 }
}

/// Settings matched to the synthetic layout; CLAHE stays off because flat
/// synthetic lighting needs no equalization.
pub fn bench_config() -> PipelineConfig {
    let mut config = PipelineConfig::default();
    config.camera = Some(bench_camera());
    config.filters.clahe_enabled = false;
    config
}

/// Mid-amplitude point contact on the default 640×480 layout.
pub fn bench_pair() -> (ColorImage, ColorImage, SynthSample) {
    let field = DisplacementField::Point {
        center: Point2::new(320.0, 226.5),
        amplitude: 4.0,
        epsilon: 90.0,
    };
    generate_sample(
        &GridSpec::default(),
        &field,
        Some(&bench_camera()),
        &NoiseSpec::default(),
        straincam_core::strain::DEFAULT_ALPHA,
        100,
        100,
    )
    .expect("default layout must generate")
}
