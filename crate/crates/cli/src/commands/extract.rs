//! `extract`: one frame in, control-grid CSV/JSON and a debug overlay out.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use straincam_core::imaging::io::save_color;
use straincam_core::pipeline::extract_grid;
use straincam_core::Result;

use super::{load_frame, out_path, print_json, stem, write_json};
use crate::{overlay, CommonArgs};

#[derive(Args)]
pub struct ExtractArgs {
    /// Input frame (PNG, PGM, or PPM)
    pub image: PathBuf,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Serialize)]
struct ExtractDoc {
    command: &'static str,
    input: String,
    quads: usize,
    midpoints: usize,
    grid: GridSummary,
    outputs: Outputs,
}

#[derive(Serialize)]
struct GridSummary {
    rows: usize,
    cols: usize,
    valid: usize,
}

#[derive(Serialize)]
struct Outputs {
    csv: String,
    json: String,
    overlay: String,
}

pub fn run(args: &ExtractArgs) -> Result<()> {
    let config = args.common.load_config()?;
    let img = load_frame(&args.image)?;
    let extraction = extract_grid(&img, &config)?;

    let name = stem(&args.image);
    let csv_path = out_path(&args.common.out_dir, &format!("{name}_grid.csv"))?;
    let json_path = out_path(&args.common.out_dir, &format!("{name}_grid.json"))?;
    let overlay_path = out_path(&args.common.out_dir, &format!("{name}_overlay.png"))?;

    let mut csv = Vec::new();
    extraction.grid.write_csv(&mut csv)?;
    fs::write(&csv_path, csv)?;
    write_json(&json_path, &extraction.grid)?;
    let marked = overlay::draw(&extraction.undistorted, &extraction.quads, &extraction.midpoints);
    save_color(&marked, &overlay_path)?;

    let doc = ExtractDoc {
        command: "extract",
        input: args.image.display().to_string(),
        quads: extraction.quads.len(),
        midpoints: extraction.midpoints.len(),
        grid: GridSummary {
            rows: extraction.grid.rows(),
            cols: extraction.grid.cols(),
            valid: extraction.grid.valid_count(),
        },
        outputs: Outputs {
            csv: csv_path.display().to_string(),
            json: json_path.display().to_string(),
            overlay: overlay_path.display().to_string(),
        },
    };
    if args.common.json {
        print_json(&doc)?;
    } else {
        println!(
            "{} quads, {} midpoints, {}x{} grid ({} valid)",
            doc.quads, doc.midpoints, doc.grid.rows, doc.grid.cols, doc.grid.valid
        );
        println!("wrote {}", csv_path.display());
        println!("wrote {}", json_path.display());
        println!("wrote {}", overlay_path.display());
    }
    Ok(())
}
