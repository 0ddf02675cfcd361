//! `calibrate`: fit the strain-to-force line from measured pairs.
//!
//! Input is a CSV of `gamma,force` rows; a single header line is allowed.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use straincam_core::strain::fit_calibration;
use straincam_core::{Error, Result};

use super::{out_path, print_json, read_text, write_json};
use crate::CommonArgs;

#[derive(Args)]
pub struct CalibrateArgs {
    /// CSV file of `gamma,force` measurement pairs
    pub pairs: PathBuf,

    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_pairs(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match fields.as_slice() {
            [g, f] => g.parse::<f64>().and_then(|g| f.parse::<f64>().map(|f| (g, f))).ok(),
            _ => None,
        };
        match parsed {
            Some(pair) => out.push(pair),
            None if lineno == 0 => continue, // header row
            None => {
                return Err(Error::Parse(format!(
                    "line {}: expected `gamma,force`, got `{line}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct CalibrateDoc {
    command: &'static str,
    input: String,
    samples: usize,
    slope: f64,
    intercept: f64,
    residual_rms: f64,
    valid_range: [f64; 2],
    output: String,
}

pub fn run(args: &CalibrateArgs) -> Result<()> {
    // Fitting ignores the pipeline config, but one the user passed
    // should still be read and validated.
    args.common.load_config()?;
    let text = read_text(&args.pairs)?;
    let pairs = parse_pairs(&text)?;
    let fit = fit_calibration(&pairs)?;
    let path = out_path(&args.common.out_dir, "calibration.json")?;
    write_json(&path, &fit)?;

    let doc = CalibrateDoc {
        command: "calibrate",
        input: args.pairs.display().to_string(),
        samples: pairs.len(),
        slope: fit.model.slope,
        intercept: fit.model.intercept,
        residual_rms: fit.residual_rms,
        valid_range: fit.model.valid_range,
        output: path.display().to_string(),
    };
    if args.common.json {
        print_json(&doc)?;
    } else {
        println!(
            "force = {:.4} * gamma + {:.4}  (rms residual {:.4} N over {} pairs)",
            doc.slope, doc.intercept, doc.residual_rms, doc.samples
        );
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_rows() {
        let pairs = parse_pairs("1.0,2.0\n2.0,4.5\n").unwrap();
        assert_eq!(pairs, vec![(1.0, 2.0), (2.0, 4.5)]);
    }

    #[test]
    fn skips_a_header_row() {
        let pairs = parse_pairs("gamma,force\n1.0,2.0\n").unwrap();
        assert_eq!(pairs, vec![(1.0, 2.0)]);
    }

    #[test]
    fn rejects_malformed_rows_after_the_first() {
        assert!(matches!(parse_pairs("1.0,2.0\noops\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_pairs("1.0,2.0\n1.0,2.0,3.0\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn ignores_blank_lines_and_whitespace() {
        let pairs = parse_pairs("\n 1.0 , 2.0 \n\n2.0,4.0\n").unwrap();
        assert_eq!(pairs, vec![(1.0, 2.0), (2.0, 4.0)]);
    }
}
