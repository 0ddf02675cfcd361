//! `undistort`: write the distortion-free version of one frame.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use straincam_core::imaging::io::save_color;
use straincam_core::imaging::undistort_fisheye;
use straincam_core::{Error, Result};

use super::{load_frame, out_path, print_json, stem};
use crate::CommonArgs;

#[derive(Args)]
pub struct UndistortArgs {
    /// Input frame (PNG, PGM, or PPM)
    pub image: PathBuf,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Serialize)]
struct UndistortDoc {
    command: &'static str,
    input: String,
    output: String,
    width: usize,
    height: usize,
}

pub fn run(args: &UndistortArgs) -> Result<()> {
    let config = args.common.load_config()?;
    let cam = config
        .camera
        .as_ref()
        .ok_or_else(|| Error::Config("undistort needs a [camera] section in the config".into()))?;
    let img = load_frame(&args.image)?;
    let out = undistort_fisheye(&img, cam)?;
    let path = out_path(&args.common.out_dir, &format!("{}_undistorted.png", stem(&args.image)))?;
    save_color(&out, &path)?;
    if args.common.json {
        print_json(&UndistortDoc {
            command: "undistort",
            input: args.image.display().to_string(),
            output: path.display().to_string(),
            width: out.width(),
            height: out.height(),
        })?;
    } else {
        println!("wrote {}", path.display());
    }
    Ok(())
}
