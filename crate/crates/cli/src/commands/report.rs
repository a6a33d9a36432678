use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use holdtrack::eval::{render_csv, render_text, EvalReport};

use super::read_text;
use crate::config::Config;
use crate::output::{comment_header, emit, with_provenance};
use crate::Format;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report written by `eval --format structured`.
    report: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

pub fn run(args: &ReportArgs, config: &Config, format: Format) -> Result<()> {
    let mut doc: serde_json::Value = serde_json::from_str(&read_text(&args.report)?)
        .with_context(|| format!("parsing {}", args.report.display()))?;
    if let Some(map) = doc.as_object_mut() {
        map.remove("provenance");
    }
    let report: EvalReport =
        serde_json::from_value(doc).with_context(|| format!("parsing {}", args.report.display()))?;
    let text = match format {
        Format::Text => comment_header(config) + &render_text(&report),
        Format::Csv => comment_header(config) + &render_csv(&report),
        Format::Structured => with_provenance(config, &report)?,
    };
    emit(args.out.as_deref(), &text)
}
