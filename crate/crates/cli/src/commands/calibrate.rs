use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use holdtrack::annotation::parse_reference_points;
use holdtrack::geometry::estimate_homography;
use holdtrack::Homography;
use serde::Serialize;

use super::read_text;
use crate::config::Config;
use crate::output::{comment_header, emit, with_provenance, write_atomic};
use crate::Format;

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Reference points: `{"unit": "cm", "pairs": [{"image": [x, y], "wall": [x, y]}, ...]}`.
    points: PathBuf,
    /// Homography file to write.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct PointResidual {
    image: [f64; 2],
    wall: [f64; 2],
    /// Distance on the wall, in `unit`.
    wall_error: f64,
    /// Distance in the image after mapping the wall point back, in pixels.
    pixel_error: f64,
}

#[derive(Debug, Serialize)]
struct Calibration {
    unit: String,
    /// Image to wall.
    homography: Homography,
    points: usize,
    mean_wall_error: f64,
    max_wall_error: f64,
    mean_pixel_error: f64,
    max_pixel_error: f64,
    residuals: Vec<PointResidual>,
}

pub fn run(args: &CalibrateArgs, config: &Config, format: Format) -> Result<()> {
    let doc = parse_reference_points::<f64>(&read_text(&args.points)?)
        .with_context(|| format!("parsing {}", args.points.display()))?;
    let (image, wall) = doc.split();
    let h = estimate_homography(&image, &wall).context("estimating homography")?;
    let back = h.inverse().context("inverting homography")?;
    let mut residuals = Vec::with_capacity(image.len());
    for (i, w) in image.iter().zip(&wall) {
        let on_wall = h.project(*i)?;
        let in_image = back.project(*w)?;
        residuals.push(PointResidual {
            image: [i.x, i.y],
            wall: [w.x, w.y],
            wall_error: on_wall.distance(w),
            pixel_error: in_image.distance(i),
        });
    }
    let n = residuals.len() as f64;
    let mean = |f: fn(&PointResidual) -> f64| residuals.iter().map(f).sum::<f64>() / n;
    let max = |f: fn(&PointResidual) -> f64| residuals.iter().map(f).fold(0.0, f64::max);
    let cal = Calibration {
        unit: doc.unit.clone(),
        homography: h,
        points: residuals.len(),
        mean_wall_error: mean(|r| r.wall_error),
        max_wall_error: max(|r| r.wall_error),
        mean_pixel_error: mean(|r| r.pixel_error),
        max_pixel_error: max(|r| r.pixel_error),
        residuals: Vec::new(),
    };
    let cal = Calibration { residuals, ..cal };

    if let Some(out) = &args.out {
        #[derive(Serialize)]
        struct HomographyDoc<'a> {
            format_version: u32,
            unit: &'a str,
            homography: &'a Homography,
        }
        let doc = HomographyDoc { format_version: 1, unit: &cal.unit, homography: &cal.homography };
        write_atomic(out, with_provenance(config, &doc)?.as_bytes())?;
    }

    let text = match format {
        Format::Structured => with_provenance(config, &cal)?,
        Format::Csv => {
            let mut s = comment_header(config) + "image_x,image_y,wall_x,wall_y,wall_error,pixel_error\n";
            for r in &cal.residuals {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.image[0], r.image[1], r.wall[0], r.wall[1], r.wall_error, r.pixel_error
                ));
            }
            s
        }
        Format::Text => {
            let m = cal.homography.m;
            let mut s = comment_header(config);
            s.push_str(&format!("homography (image -> wall, {}):\n", cal.unit));
            for row in m {
                s.push_str(&format!("  {:>14.6e} {:>14.6e} {:>14.6e}\n", row[0], row[1], row[2]));
            }
            s.push_str(&format!(
                "{} points; reprojection error mean {:.3} px, max {:.3} px; wall error mean {:.3} {u}, max {:.3} {u}\n",
                cal.points,
                cal.mean_pixel_error,
                cal.max_pixel_error,
                cal.mean_wall_error,
                cal.max_wall_error,
                u = cal.unit
            ));
            s
        }
    };
    emit(None, &text)
}
