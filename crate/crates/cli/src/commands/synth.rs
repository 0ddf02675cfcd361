//! `synth`: render synthetic frame pairs with ground-truth sidecars.
//!
//! Each dataset file describes one batch: a marker layout, a displacement
//! field, optional lens and noise models, and a sample count. Every sample
//! yields `<name>_<i>_ref.png`, `<name>_<i>_def.png`, and `<name>_<i>.json`
//! (the exact generation parameters plus the ground-truth strain).

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use straincam_core::imaging::io::save_color;
use straincam_core::strain::DEFAULT_ALPHA;
use straincam_core::synth::generate_sample;
use straincam_core::{CameraModel, DisplacementField, Error, GridSpec, NoiseSpec, Result};

use super::{out_path, print_json, read_text, stem, write_json};
use crate::CommonArgs;

#[derive(Args)]
pub struct SynthArgs {
    /// Dataset description files (TOML), one batch each
    #[arg(required = true)]
    pub spec: Vec<PathBuf>,

    /// Base noise seed; overrides the seed in every dataset file
    #[arg(long)]
    pub seed: Option<u64>,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// One batch of samples sharing a layout and field shape.
#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct DatasetSpec {
    count: usize,
    grid: GridSpec,
    field: DisplacementField,
    camera: Option<CameraModel>,
    noise: NoiseSpec,
    alpha: f64,
    k_u: usize,
    k_v: usize,
    /// Evenly spaced field amplitudes `[lo, hi]` across the batch.
    amplitude_sweep: Option<[f64; 2]>,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            count: 1,
            grid: GridSpec::default(),
            field: DisplacementField::None,
            camera: None,
            noise: NoiseSpec::default(),
            alpha: DEFAULT_ALPHA,
            k_u: 100,
            k_v: 100,
            amplitude_sweep: None,
        }
    }
}

fn with_amplitude(field: &DisplacementField, amplitude: f64) -> Result<DisplacementField> {
    match *field {
        DisplacementField::Point { center, epsilon, .. } => {
            Ok(DisplacementField::Point { center, amplitude, epsilon })
        }
        DisplacementField::Edge { point, angle, epsilon, .. } => {
            Ok(DisplacementField::Edge { point, angle, amplitude, epsilon })
        }
        _ => Err(Error::Config("amplitude_sweep needs a point or edge field".into())),
    }
}

#[derive(Serialize)]
struct SynthDoc {
    command: &'static str,
    datasets: Vec<DatasetDoc>,
}

#[derive(Serialize)]
struct DatasetDoc {
    spec: String,
    samples: Vec<SampleDoc>,
}

#[derive(Serialize)]
struct SampleDoc {
    name: String,
    gamma_ss: f64,
    reference: String,
    deformed: String,
    sidecar: String,
}

pub fn run(args: &SynthArgs) -> Result<()> {
    // Generation ignores the pipeline config, but one the user passed
    // should still be read and validated.
    args.common.load_config()?;
    let mut datasets = Vec::new();
    for spec_path in &args.spec {
        let text = read_text(spec_path)?;
        let spec: DatasetSpec = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", spec_path.display())))?;
        if spec.count == 0 {
            return Err(Error::Config("count must be at least 1".into()));
        }
        spec.grid.validate()?;
        spec.field.validate()?;
        if let Some(cam) = &spec.camera {
            cam.validate()?;
        }
        spec.noise.validate()?;

        let base_seed = args.seed.unwrap_or(spec.noise.seed);
        let name = stem(spec_path);
        let mut samples = Vec::new();
        for i in 0..spec.count {
            let field = match spec.amplitude_sweep {
                Some([lo, hi]) => {
                    let t =
                        if spec.count == 1 { 0.0 } else { i as f64 / (spec.count - 1) as f64 };
                    with_amplitude(&spec.field, lo + (hi - lo) * t)?
                }
                None => spec.field,
            };
            // Each sample consumes two seeds: reference and deformed frame.
            let noise = NoiseSpec { seed: base_seed.wrapping_add(2 * i as u64), ..spec.noise };
            let (reference, deformed, sidecar) = generate_sample(
                &spec.grid,
                &field,
                spec.camera.as_ref(),
                &noise,
                spec.alpha,
                spec.k_u,
                spec.k_v,
            )?;
            let tag = format!("{name}_{i:03}");
            let ref_path = out_path(&args.common.out_dir, &format!("{tag}_ref.png"))?;
            let def_path = out_path(&args.common.out_dir, &format!("{tag}_def.png"))?;
            let side_path = out_path(&args.common.out_dir, &format!("{tag}.json"))?;
            save_color(&reference, &ref_path)?;
            save_color(&deformed, &def_path)?;
            write_json(&side_path, &sidecar)?;
            samples.push(SampleDoc {
                name: tag,
                gamma_ss: sidecar.gamma_ss,
                reference: ref_path.display().to_string(),
                deformed: def_path.display().to_string(),
                sidecar: side_path.display().to_string(),
            });
        }
        datasets.push(DatasetDoc { spec: spec_path.display().to_string(), samples });
    }

    let doc = SynthDoc { command: "synth", datasets };
    if args.common.json {
        print_json(&doc)?;
    } else {
        for ds in &doc.datasets {
            println!("{}: {} sample(s) in {}", ds.spec, ds.samples.len(), args.common.out_dir.display());
            for s in &ds.samples {
                println!("  {} gamma_ss {:.6}", s.name, s.gamma_ss);
            }
        }
    }
    Ok(())
}
