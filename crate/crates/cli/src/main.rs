//! `holdtrack`: detect hold usage from keypoint streams, score it, calibrate
//! walls, summarise annotation sets, and generate synthetic climbs.

mod commands;
mod config;
mod exit;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use holdtrack::eval::MatchMode;

use config::{Config, Overrides};

#[derive(Debug, Parser)]
#[command(name = "holdtrack", version, about = "Climbing hold usage from pose keypoints")]
struct Cli {
    /// TOML file with `[detector]`, `[eval]` and `[stats]` tables.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Frame rate to use instead of the one declared in streams and topos.
    #[arg(long, global = true, value_name = "FPS")]
    fps_override: Option<f64>,
    /// tIoU threshold for matching; repeat for several.
    #[arg(long = "threshold", global = true, value_name = "T")]
    thresholds: Vec<f64>,
    #[arg(long, global = true, value_parser = parse_match_mode)]
    match_mode: Option<MatchMode>,
    /// Worker threads for multi-video commands (0: all cores).
    #[arg(long, short = 'j', global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    /// JSON.
    Structured,
}

fn parse_match_mode(s: &str) -> Result<MatchMode, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect hold usages in one keypoint stream or a directory of them.
    Detect(commands::detect::DetectArgs),
    /// Score predicted usages against ground truth.
    Eval(commands::eval::EvalArgs),
    /// Fit the image-to-wall homography from reference points.
    Calibrate(commands::calibrate::CalibrateArgs),
    /// Video and hold-usage statistics of an annotation directory.
    Stats(commands::stats::StatsArgs),
    /// Generate a synthetic keypoint stream and its ground truth.
    Simulate(commands::simulate::SimulateArgs),
    /// Re-render a structured evaluation report.
    Report(commands::report::ReportArgs),
}

/// Detector thresholds settable from the command line.
#[derive(Debug, Clone, Default, Args)]
pub struct DetectorFlags {
    /// Seconds of continuous overlap before contact counts as usage.
    #[arg(long, value_name = "SECONDS")]
    persistence: Option<f64>,
    /// Longest overlap gap, in seconds, that still continues a usage.
    #[arg(long, value_name = "SECONDS")]
    memory: Option<f64>,
    /// Minimum keypoint confidence.
    #[arg(long)]
    confidence: Option<f64>,
}

fn run(cli: Cli) -> Result<()> {
    let detector_flags = match &cli.command {
        Command::Detect(a) => a.detector.clone(),
        _ => DetectorFlags::default(),
    };
    let overrides = Overrides {
        fps: cli.fps_override,
        thresholds: cli.thresholds.clone(),
        match_mode: cli.match_mode,
        jobs: cli.jobs,
        persistence_seconds: detector_flags.persistence,
        memory_seconds: detector_flags.memory,
        confidence: detector_flags.confidence,
    };
    let config = Config::load(cli.config.as_deref())?.apply(&overrides);
    if let Some(fps) = config.fps_override {
        if !(fps > 0.0) || !fps.is_finite() {
            return Err(exit::Precondition(format!("--fps-override must be positive, got {fps}")).into());
        }
    }
    match cli.command {
        Command::Detect(a) => commands::detect::run(&a, &config, cli.format),
        Command::Eval(a) => commands::eval::run(&a, &config, cli.format),
        Command::Calibrate(a) => commands::calibrate::run(&a, &config, cli.format),
        Command::Stats(a) => commands::stats::run(&a, &config, cli.format),
        Command::Simulate(a) => commands::simulate::run(&a, &config, cli.format),
        Command::Report(a) => commands::report::run(&a, &config, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(exit::SUCCESS),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::code_for(&err))
        }
    }
}
