//! One module per subcommand plus shared output plumbing.

pub mod calibrate;
pub mod extract;
pub mod strain;
pub mod synth;
pub mod undistort;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use straincam_core::imaging::io::load_color;
use straincam_core::{ColorImage, Error, Result};

/// Creates `dir` if needed and returns the path of `name` inside it.
fn out_path(dir: &Path, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    Ok(dir.join(name))
}

/// Loads a frame with the path included in any error message.
fn load_frame(path: &Path) -> Result<ColorImage> {
    load_color(path).map_err(|e| {
        Error::Io(io::Error::new(io::ErrorKind::Other, format!("{}: {e}", path.display())))
    })
}

/// Reads a text file with the path included in any error message.
fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// File stem used to derive output names from an input path.
fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

/// Writes a pretty JSON document with a trailing newline.
fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_pretty_json(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// The one machine-readable document a `--json` run puts on stdout.
fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", to_pretty_json(value)?);
    Ok(())
}
