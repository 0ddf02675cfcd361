//! `strain`: measure a deformed frame against a reference frame.
//!
//! Writes `strain.json` (the measurement), `field.csv`, and `field.png`
//! (the sampled displacement-distance field as data and as a heat map).

use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use straincam_core::imaging::io::save_color;
use straincam_core::pipeline::process_pair;
use straincam_core::{ContactEstimate, EdgeEstimate, ForceEstimate, Result};

use super::{load_frame, out_path, print_json, write_json};
use crate::CommonArgs;

#[derive(Args)]
pub struct StrainArgs {
    /// Reference (unloaded) frame
    pub reference: PathBuf,

    /// Deformed frame to measure against the reference
    pub target: PathBuf,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Contents of `strain.json`; deliberately free of output paths so the
/// artifact only depends on the inputs and the config.
#[derive(Serialize)]
struct Measurement {
    reference: String,
    target: String,
    grid_rows: usize,
    grid_cols: usize,
    k_u: usize,
    k_v: usize,
    gamma_ss: f64,
    total_distance: f64,
    alpha: f64,
    force: ForceEstimate,
    contact: Option<ContactEstimate>,
    edge: Option<EdgeEstimate>,
}

#[derive(Serialize)]
struct StrainDoc {
    command: &'static str,
    #[serde(flatten)]
    measurement: Measurement,
    outputs: Outputs,
}

#[derive(Serialize)]
struct Outputs {
    report: String,
    field_csv: String,
    field_png: String,
}

pub fn run(args: &StrainArgs) -> Result<()> {
    let config = args.common.load_config()?;
    let reference = load_frame(&args.reference)?;
    let target = load_frame(&args.target)?;
    let (ref_extraction, _, analysis) = process_pair(&reference, &target, &config)?;

    let measurement = Measurement {
        reference: args.reference.display().to_string(),
        target: args.target.display().to_string(),
        grid_rows: ref_extraction.grid.rows(),
        grid_cols: ref_extraction.grid.cols(),
        k_u: config.spline.k_u,
        k_v: config.spline.k_v,
        gamma_ss: analysis.strain.gamma_ss,
        total_distance: analysis.strain.total_distance,
        alpha: analysis.strain.alpha,
        force: analysis.force,
        contact: analysis.contact,
        edge: analysis.edge,
    };

    let report_path = out_path(&args.common.out_dir, "strain.json")?;
    let csv_path = out_path(&args.common.out_dir, "field.csv")?;
    let png_path = out_path(&args.common.out_dir, "field.png")?;
    write_json(&report_path, &measurement)?;
    let mut csv = Vec::new();
    analysis.field.write_csv(&mut csv)?;
    fs::write(&csv_path, csv)?;
    save_color(&analysis.field.to_false_color(), &png_path)?;

    let doc = StrainDoc {
        command: "strain",
        measurement,
        outputs: Outputs {
            report: report_path.display().to_string(),
            field_csv: csv_path.display().to_string(),
            field_png: png_path.display().to_string(),
        },
    };
    if args.common.json {
        print_json(&doc)?;
    } else {
        let m = &doc.measurement;
        println!("gamma_ss {:.6}", m.gamma_ss);
        println!(
            "force {:.3} N ({})",
            m.force.force,
            if m.force.in_range { "within calibration range" } else { "outside calibration range" }
        );
        match &m.contact {
            Some(c) => println!(
                "contact ({:.1}, {:.1}) confidence {:.2}",
                c.center.x, c.center.y, c.confidence
            ),
            None => println!("contact none"),
        }
        match &m.edge {
            Some(e) if !e.degenerate => println!("edge {:.1} deg", e.angle),
            Some(_) => println!("edge isotropic (no dominant direction)"),
            None => println!("edge none"),
        }
        println!("wrote {}", report_path.display());
        println!("wrote {}", csv_path.display());
        println!("wrote {}", png_path.display());
    }
    Ok(())
}
