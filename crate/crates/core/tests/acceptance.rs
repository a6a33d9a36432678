//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p holdtrack-core --test acceptance -- --nocapture` to
//! see the report. Criterion 8 needs the published annotation set; point
//! `HOLDTRACK_DATASET_DIR` at a directory with `<video>.usage.csv` and
//! `<video>.topo.json` files to include it.

mod common;

use std::io::Write;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use holdtrack::annotation::layout::scan_dir;
use holdtrack::annotation::{
    parse_keypoints, parse_topo, parse_usage, serialize_keypoints, serialize_topo, serialize_usage, FrameRecord,
    FrameSpan, Hold, HoldRef, Keypoint, KeypointStream, Person, ReferencePair, Resolution, RouteTopo, StreamHeader,
    UsageInterval,
};
use holdtrack::detector::{detect, events_to_intervals, DetectorConfig};
use holdtrack::eval::{match_intervals, metrics, span_tiou, tiou, MatchMode, MatchResult, MatchedPair, TiouAveraging};
use holdtrack::geometry::{estimate_homography, Aabb, Homography, Point2};
use holdtrack::sim::{synthesize, Move, ScenarioSpec};
use holdtrack::stats::{compute_stats, StatsOptions, VideoAnnotations};
use holdtrack::Extremity;
use num_rational::Ratio;
use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use common::{random_intervals, random_scenario, rng, sorted, MEMORY};

const C1_BUDGET: Duration = Duration::from_secs(1);
const C1_FLOAT_TOL: f64 = 1e-12;
const C2_BUDGET: Duration = Duration::from_secs(10);
const C2_FIXTURES: u64 = 1000;
const C3_BUDGET: Duration = Duration::from_secs(30);
const C3_SCENARIOS: u64 = 100;
const C5_TRIALS: u64 = 200;
const C5_MIN_TIOU: f64 = 0.95;
const C6_EMPTY_FRAMES: u32 = 150;
const C7_BUDGET: Duration = Duration::from_secs(10);
const C7_EXACT_TOL: f64 = 1e-8;
const C7_TRIALS: u64 = 100;
const C7_NOISE_PX: f64 = 1.0;
const C7_MIN_PASS_RATE: f64 = 0.95;
const C8_BUDGET: Duration = Duration::from_secs(60);
const C8_DURATION_TOL: f64 = 0.02;
const C8_OCCLUSION_TOL: f64 = 0.5;
const C9_DOCUMENTS: u64 = 10_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, budget: Duration) -> Outcome {
    let took = start.elapsed();
    ensure!(took <= budget, "took {took:.2?}, budget {budget:?}");
    Ok(format!("{took:.2?}"))
}

fn iv(ext: Extremity, hold: u32, first: u32, last: u32) -> UsageInterval {
    UsageInterval::simple(ext, HoldRef::Id(hold), first, last).unwrap()
}

fn half_open(ext: Extremity, start: u32, end: u32) -> UsageInterval {
    UsageInterval::new(ext, HoldRef::Id(1), FrameSpan::new(start, end).unwrap(), vec![]).unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let a = half_open(Extremity::RIGHT_HAND, 0, 100);
    ensure!(span_tiou(&a.span(), &a.span()) == Ratio::from_integer(1), "identical spans are not 1");
    ensure!(tiou(&a, &a) == 1.0, "identical spans are not 1.0");
    let b = half_open(Extremity::RIGHT_HAND, 100, 200);
    ensure!(span_tiou(&a.span(), &b.span()) == Ratio::from_integer(0), "disjoint spans are not 0");
    let c = half_open(Extremity::RIGHT_HAND, 50, 150);
    let third = span_tiou(&a.span(), &c.span());
    ensure!(third == Ratio::new(1, 3), "[0,100)/[50,150) gave {third}");
    ensure!((tiou(&a, &c) - 1.0 / 3.0).abs() < C1_FLOAT_TOL, "float tIoU off by more than {C1_FLOAT_TOL}");
    within(t, C1_BUDGET)
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let m = MatchResult {
        pairs: vec![
            MatchedPair { gt: 0, pred: 0, tiou: Ratio::from_integer(1) },
            MatchedPair { gt: 1, pred: 1, tiou: Ratio::new(1, 2) },
        ],
        unmatched_gt: vec![2],
        unmatched_pred: vec![2],
    };
    let k = metrics(&m, TiouAveraging::MatchedPairs);
    ensure!((k.tp, k.fp, k.fn_) == (2, 1, 1), "counts {:?}", (k.tp, k.fp, k.fn_));
    ensure!(k.accuracy == Some(0.5), "accuracy {:?}", k.accuracy);
    ensure!(k.precision == Some(2.0 / 3.0), "precision {:?}", k.precision);
    ensure!(k.sensitivity == Some(2.0 / 3.0), "sensitivity {:?}", k.sensitivity);

    let thresholds = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9];
    for seed in 0..C2_FIXTURES {
        let mut r = rng(seed);
        let (n_gt, n_pred) = (r.random_range(0..20), r.random_range(0..20));
        let gt = random_intervals(&mut r, n_gt, 1000, 4);
        let pred = random_intervals(&mut r, n_pred, 1000, 4);
        let mode = [MatchMode::HoldOnly, MatchMode::LimbKind, MatchMode::LimbExact][r.random_range(0..3)];
        let tps: Vec<usize> = thresholds.iter().map(|&th| match_intervals(&gt, &pred, th, mode).tp()).collect();
        ensure!(tps.windows(2).all(|w| w[1] <= w[0]), "fixture {seed}: TP by threshold {tps:?}");
    }
    within(t, C2_BUDGET).map(|s| format!("{C2_FIXTURES} fixtures, {s}"))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let cfg = DetectorConfig::default();
    let mut intervals = 0;
    for seed in 0..C3_SCENARIOS {
        let spec = random_scenario(seed);
        ensure!(spec.topo.holds.len() <= 15, "scenario {seed} has too many holds");
        let (stream, truth) = synthesize(&spec).map_err(|e| format!("scenario {seed}: {e}"))?;
        ensure!(stream.frames.len() <= 2000, "scenario {seed} is too long");
        let (events, _) = detect(&stream, &spec.topo, &cfg).map_err(|e| format!("scenario {seed}: {e}"))?;
        let pred = events_to_intervals(&events);
        let m = match_intervals(&truth, &pred, 0.0, MatchMode::LimbExact);
        ensure!(
            m.fp() == 0 && m.fn_count() == 0,
            "scenario {seed}: {} FP, {} FN over {} truths",
            m.fp(),
            m.fn_count(),
            truth.len()
        );
        ensure!(m.pairs.iter().all(|p| p.tiou == Ratio::from_integer(1)), "scenario {seed}: tIoU below 1");
        ensure!(sorted(pred) == sorted(truth.clone()), "scenario {seed}: intervals differ");
        intervals += truth.len();
    }
    within(t, C3_BUDGET).map(|s| format!("{C3_SCENARIOS} scenarios, {intervals} intervals, {s}"))
}

fn single_grip(frames: u32, first: u32, last: u32) -> ScenarioSpec<f64> {
    let mut r = rng(4);
    let mut topo = common::random_topo(&mut r, 6);
    topo.frame_count = Some(frames);
    let hold = topo.holds[0].id;
    ScenarioSpec::new(topo, vec![Move { extremity: Extremity::RIGHT_HAND, hold, start: first, end: last }])
}

fn criterion_4() -> Outcome {
    let cfg = DetectorConfig::default();
    ensure!(cfg.persistence_frames(25.0) == 13, "persistence at 25 fps is {}", cfg.persistence_frames(25.0));
    for (len, expected) in [(12u32, 0usize), (13, 1)] {
        let spec = single_grip(200, 50, 50 + len - 1);
        let (stream, _) = synthesize(&spec).map_err(|e| e.to_string())?;
        let (events, _) = detect(&stream, &spec.topo, &cfg).map_err(|e| e.to_string())?;
        ensure!(events.len() == expected, "{len}-frame overlap gave {} events", events.len());
    }
    Ok("12 frames: none, 13 frames: one".into())
}

fn count_per_pair(v: &[UsageInterval]) -> BTreeMap<(Extremity, HoldRef), usize> {
    let mut out = BTreeMap::new();
    for u in v {
        *out.entry((u.extremity, u.hold)).or_insert(0) += 1;
    }
    out
}

/// Moves the anchor of `ext` off every hold for `frames`.
fn lift_limb(stream: &mut KeypointStream<f64>, spec: &ScenarioSpec<f64>, ext: Extremity, frames: std::ops::Range<u32>) {
    let conv = holdtrack::geometry::SkeletonConvention::by_name(&spec.convention).unwrap();
    let name = conv.anchor_name(ext).to_string();
    for f in &mut stream.frames[frames.start as usize..frames.end as usize] {
        for p in &mut f.persons {
            p.keypoints.insert(name.clone(), Keypoint::new(1.0, 1.0, 0.9));
        }
    }
}

fn criterion_5() -> Outcome {
    let cfg = DetectorConfig::default();
    let mut worst = 1.0f64;
    for trial in 0..C5_TRIALS {
        let spec = random_scenario(10_000 + trial);
        let mut r = rng(20_000 + trial);
        let (mut stream, truth) = synthesize(&spec).map_err(|e| format!("trial {trial}: {e}"))?;
        let candidates: Vec<&Move> = spec.moves.iter().filter(|m| m.end - m.start >= 3).collect();
        ensure!(!candidates.is_empty(), "trial {trial}: no move long enough for a gap");
        let m = candidates[r.random_range(0..candidates.len())];
        let room = m.end - m.start - 1;
        let gap = r.random_range(1..=MEMORY.min(room));
        let from = r.random_range(m.start + 1..=m.end - gap);
        lift_limb(&mut stream, &spec, m.extremity, from..from + gap);
        let (events, _) = detect(&stream, &spec.topo, &cfg).map_err(|e| format!("trial {trial}: {e}"))?;
        let pred = events_to_intervals(&events);
        ensure!(
            count_per_pair(&pred) == count_per_pair(&truth),
            "trial {trial}: event counts changed after a {gap}-frame gap"
        );
        let target = iv(m.extremity, m.hold, m.start, m.end);
        let best = pred
            .iter()
            .filter(|p| p.extremity == m.extremity && p.hold == target.hold)
            .map(|p| tiou(p, &target))
            .fold(0.0, f64::max);
        worst = worst.min(best);
        ensure!(best >= C5_MIN_TIOU, "trial {trial}: merged tIoU {best:.3}");
    }
    Ok(format!("{C5_TRIALS} trials, worst merged tIoU {worst:.3}"))
}

fn criterion_6() -> Outcome {
    let cfg = DetectorConfig::default();
    let mut spec = single_grip(700, 100, 500);
    let (plain, truth) = synthesize(&spec).map_err(|e| e.to_string())?;
    spec.empty_frames = vec![(200, 200 + C6_EMPTY_FRAMES - 1)];
    let (gappy, _) = synthesize(&spec).map_err(|e| e.to_string())?;
    let empty = gappy.frames.iter().filter(|f| f.persons.is_empty()).count();
    ensure!(empty == C6_EMPTY_FRAMES as usize, "{empty} empty frames");
    let a = events_to_intervals(&detect(&plain, &spec.topo, &cfg).map_err(|e| e.to_string())?.0);
    let b = events_to_intervals(&detect(&gappy, &spec.topo, &cfg).map_err(|e| e.to_string())?.0);
    ensure!(b == truth, "detected {b:?}, expected {truth:?}");
    ensure!(a == b, "empty frames changed the detection");

    // the same inside random climbs: the grip spanning the empty run stays whole
    for seed in 0..20 {
        let mut spec = random_scenario(30_000 + seed);
        let Some(m) = spec.moves.iter().copied().find(|m| m.end - m.start > C6_EMPTY_FRAMES + 2) else { continue };
        spec.empty_frames = vec![(m.start + 1, m.start + C6_EMPTY_FRAMES)];
        let (stream, _) = synthesize(&spec).map_err(|e| e.to_string())?;
        let pred = events_to_intervals(&detect(&stream, &spec.topo, &cfg).map_err(|e| e.to_string())?.0);
        let target = iv(m.extremity, m.hold, m.start, m.end);
        ensure!(pred.contains(&target), "seed {seed}: grip {}-{} was split or moved", m.start, m.end);
    }
    Ok(format!("{C6_EMPTY_FRAMES} empty frames inside a 401-frame grip"))
}

/// Camera looking slightly up at the wall: wall cm to image px.
fn wall_to_image() -> Homography<f64> {
    Homography::from_rows([[2.1, 0.15, 95.0], [0.05, 2.3, 130.0], [0.00004, 0.0003, 1.0]])
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let truth = wall_to_image();
    let corners_wall = [Point2::new(0.0, 0.0), Point2::new(260.0, 0.0), Point2::new(260.0, 480.0), Point2::new(0.0, 480.0)];
    let corners_img: Vec<_> = corners_wall.iter().map(|&p| truth.project(p).unwrap()).collect();
    let fitted = estimate_homography(&corners_img, &corners_wall).map_err(|e| e.to_string())?;
    let back = fitted.inverse().map_err(|e| e.to_string())?;
    let exact_err = back.reprojection_error(&corners_wall, &corners_img).map_err(|e| e.to_string())?;
    ensure!(exact_err < C7_EXACT_TOL, "exact 4-point error {exact_err:e}");

    // 14 x 25 bolt grid at 20 cm pitch
    let wall: Vec<Point2<f64>> =
        (0..25).flat_map(|r| (0..14).map(move |c| Point2::new(20.0 * c as f64, 20.0 * r as f64))).collect();
    ensure!(wall.len() == 350, "grid has {} bolts", wall.len());
    let corner_idx = [0, 13, 349, 336];
    let normal = Normal::new(0.0, C7_NOISE_PX).unwrap();
    let (mut wins, mut sum_all, mut sum_four) = (0u64, 0.0, 0.0);
    for seed in 0..C7_TRIALS {
        let mut r: ChaCha8Rng = rng(seed);
        let image: Vec<Point2<f64>> = wall
            .iter()
            .map(|&p| {
                let q = truth.project(p).unwrap();
                Point2::new(q.x + normal.sample(&mut r), q.y + normal.sample(&mut r))
            })
            .collect();
        let err = |h: Homography<f64>| -> Result<f64, String> {
            let inv = h.inverse().map_err(|e| e.to_string())?;
            inv.reprojection_error(&wall, &image).map_err(|e| e.to_string())
        };
        let all = err(estimate_homography(&image, &wall).map_err(|e| e.to_string())?)?;
        let img4: Vec<_> = corner_idx.iter().map(|&i| image[i]).collect();
        let wall4: Vec<_> = corner_idx.iter().map(|&i| wall[i]).collect();
        let four = err(estimate_homography(&img4, &wall4).map_err(|e| e.to_string())?)?;
        sum_all += all;
        sum_four += four;
        if all <= four {
            wins += 1;
        }
    }
    let rate = wins as f64 / C7_TRIALS as f64;
    ensure!(rate >= C7_MIN_PASS_RATE, "all-point fit won {wins}/{C7_TRIALS}");
    let n = C7_TRIALS as f64;
    within(t, C7_BUDGET).map(|s| {
        format!(
            "exact {exact_err:.1e}; all-point {:.2} px vs 4-point {:.2} px, won {wins}/{C7_TRIALS}, {s}",
            sum_all / n,
            sum_four / n
        )
    })
}

fn load_dataset(dir: &Path) -> Result<Vec<VideoAnnotations>, String> {
    let files = scan_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut videos = Vec::new();
    for (id, f) in files {
        let (Some(usage), Some(topo)) = (f.usage, f.topo) else { continue };
        let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()));
        let usages = parse_usage(&read(&usage)?).map_err(|e| format!("{}: {e}", usage.display()))?;
        let topo: RouteTopo<f64> = parse_topo(&read(&topo)?).map_err(|e| format!("{}: {e}", topo.display()))?;
        videos.push(VideoAnnotations {
            video_id: id,
            route: topo.route_name,
            fps: topo.fps,
            frame_count: topo.frame_count,
            usages,
        });
    }
    Ok(videos)
}

fn criterion_8(dir: &Path) -> Outcome {
    let t = Instant::now();
    let videos = load_dataset(dir)?;
    ensure!(!videos.is_empty(), "no annotated videos in {}", dir.display());
    let r = compute_stats(&videos, &StatsOptions::default()).overall;
    let c = r.usage_count;
    ensure!((c.total, c.hands, c.feet) == (940, 481, 459), "usage counts {:?}", (c.total, c.hands, c.feet));
    let near = |v: Option<f64>, want: f64, tol: f64| v.is_some_and(|v| (v - want).abs() <= tol);
    let d = r.usage_seconds;
    ensure!(
        near(d.total, 5.27, C8_DURATION_TOL) && near(d.hands, 5.55, C8_DURATION_TOL) && near(d.feet, 4.97, C8_DURATION_TOL),
        "durations {:?}",
        (d.total, d.hands, d.feet)
    );
    let o = r.occlusion_percent;
    ensure!(
        near(o.total, 26.98, C8_OCCLUSION_TOL)
            && near(o.hands, 50.53, C8_OCCLUSION_TOL)
            && near(o.feet, 2.19, C8_OCCLUSION_TOL),
        "occlusion {:?}",
        (o.total, o.hands, o.feet)
    );
    within(t, C8_BUDGET)
}

fn random_usage_doc(r: &mut ChaCha8Rng) -> Vec<UsageInterval> {
    (0..r.random_range(0..12))
        .map(|_| {
            let ext = Extremity::ALL[r.random_range(0..4)];
            let hold = if r.random_bool(0.1) { HoldRef::Wall } else { HoldRef::Id(r.random_range(0..500)) };
            let start = r.random_range(0..100_000);
            let len = r.random_range(1..2000);
            let span = FrameSpan::new(start, start + len).unwrap();
            let mut occluded = Vec::new();
            let mut cursor = start;
            while r.random_bool(0.4) && cursor < start + len {
                let a = r.random_range(cursor..start + len);
                let b = r.random_range(a + 1..=start + len);
                occluded.push(FrameSpan::new(a, b).unwrap());
                cursor = b;
            }
            UsageInterval::new(ext, hold, span, occluded).unwrap()
        })
        .collect()
}

fn coord(r: &mut ChaCha8Rng) -> f64 {
    r.random_range(0.0..4000.0)
}

fn random_topo_doc(r: &mut ChaCha8Rng) -> RouteTopo<f64> {
    let holds = (0..r.random_range(1..20u32))
        .map(|i| {
            let (x, y) = (coord(r), coord(r));
            Hold {
                id: i * 3 + r.random_range(0..3),
                bbox: Aabb::from_coords(x, y, x + r.random_range(0.5..80.0), y + r.random_range(0.5..80.0)).unwrap(),
                is_foothold: r.random_bool(0.5),
            }
        })
        .collect();
    let reference_points = if r.random_bool(0.5) {
        (0..4).map(|_| ReferencePair { image: [coord(r), coord(r)], wall: [coord(r), coord(r)] }).collect()
    } else {
        vec![]
    };
    let homography = r.random_bool(0.3).then(|| {
        Homography::from_rows([
            [coord(r), coord(r), coord(r)],
            [coord(r), coord(r), coord(r)],
            [r.random_range(-0.01..0.01), r.random_range(-0.01..0.01), 1.0],
        ])
    });
    RouteTopo {
        format_version: 1,
        route_name: format!("route \"{}\"", r.random_range(0..1000)),
        video_id: format!("v{}", r.random::<u32>()),
        fps: r.random_range(1.0..240.0),
        resolution: Resolution { width: r.random_range(1..8000), height: r.random_range(1..8000) },
        frame_count: r.random_bool(0.5).then(|| r.random_range(0..1_000_000)),
        wall_unit: ["cm", "m", "mm"][r.random_range(0..3)].into(),
        reference_points,
        homography,
        holds,
    }
}

fn random_stream_doc(r: &mut ChaCha8Rng) -> KeypointStream<f64> {
    let mut extra = BTreeMap::new();
    if r.random_bool(0.5) {
        extra.insert("crop_margin".to_string(), serde_json::json!(r.random_range(0.0..1.0)));
    }
    let header = StreamHeader {
        format_version: 1,
        video_id: format!("v{}", r.random::<u16>()),
        fps: r.random_range(1.0..240.0),
        resolution: Resolution { width: r.random_range(1..4000), height: r.random_range(1..4000) },
        convention: ["coco17", "coco25", "mediapipe33"][r.random_range(0..3)].into(),
        backend: ["mediapipe", "yolov8", "vitpose", "synthetic"][r.random_range(0..4)].into(),
        model_variant: r.random_bool(0.5).then(|| "large".to_string()),
        extra,
    };
    let mut frame = 0u32;
    let frames = (0..r.random_range(0..8))
        .map(|_| {
            frame += r.random_range(1..30);
            let persons = (0..r.random_range(0..3u32))
                .map(|id| Person {
                    id,
                    keypoints: (0..r.random_range(0..6))
                        .map(|k| (format!("kp_{k}"), Keypoint::new(coord(r) - 100.0, coord(r), r.random_range(0.0..=1.0))))
                        .collect(),
                })
                .collect();
            FrameRecord { frame, inference_ms: r.random_bool(0.5).then(|| r.random_range(0.0..500.0)), persons }
        })
        .collect();
    KeypointStream { header, frames }
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    for i in 0..C9_DOCUMENTS {
        let usage = random_usage_doc(&mut r);
        let back = parse_usage(&serialize_usage(&usage)).map_err(|e| format!("usage doc {i}: {e}"))?;
        ensure!(back == usage, "usage doc {i} changed");

        let topo = random_topo_doc(&mut r);
        let back: RouteTopo<f64> = parse_topo(&serialize_topo(&topo)).map_err(|e| format!("topo doc {i}: {e}"))?;
        ensure!(back == topo, "topo doc {i} changed");

        let stream = random_stream_doc(&mut r);
        let back: KeypointStream<f64> =
            parse_keypoints(&serialize_keypoints(&stream)).map_err(|e| format!("keypoint doc {i}: {e}"))?;
        ensure!(back == stream, "keypoint doc {i} changed");
    }
    Ok(format!("{C9_DOCUMENTS} documents per format"))
}

fn dataset_dir() -> Option<std::path::PathBuf> {
    std::env::var_os("HOLDTRACK_DATASET_DIR").map(Into::into)
}

#[test]
fn acceptance() {
    let criteria: [(u8, &str, fn() -> Outcome); 8] = [
        (1, "tIoU values", criterion_1),
        (2, "metric formulas and threshold monotonicity", criterion_2),
        (3, "detector equals simulator truth", criterion_3),
        (4, "persistence boundary", criterion_4),
        (5, "memory merge", criterion_5),
        (6, "empty frames inside a grip", criterion_6),
        (7, "homography calibration", criterion_7),
        (9, "format round-trips", criterion_9),
    ];
    let mut failed = Vec::new();
    let mut lines = Vec::new();
    for (id, name, run) in criteria {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match &outcome {
            Ok(detail) => lines.push(format!("criterion {id} PASS  {name} ({detail})")),
            Err(why) => {
                lines.push(format!("criterion {id} FAIL  {name}: {why}"));
                failed.push(id);
            }
        }
        if id == 7 {
            lines.push(match dataset_dir() {
                None => "criterion 8 NOT RUN  dataset statistics (set HOLDTRACK_DATASET_DIR)".to_string(),
                Some(dir) => match criterion_8(&dir) {
                    Ok(detail) => format!("criterion 8 PASS  dataset statistics ({detail})"),
                    Err(why) => {
                        failed.push(8);
                        format!("criterion 8 FAIL  dataset statistics: {why}")
                    }
                },
            });
        }
    }
    // Straight to the stderr handle: the harness only captures the print macros.
    let mut err = std::io::stderr().lock();
    for line in &lines {
        let _ = writeln!(err, "{line}");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
#[ignore = "needs the published annotation set in HOLDTRACK_DATASET_DIR"]
fn dataset_reproduction() {
    let dir = dataset_dir().expect("HOLDTRACK_DATASET_DIR is not set");
    if let Err(why) = criterion_8(&dir) {
        panic!("{why}");
    }
}
