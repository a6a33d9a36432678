//! Random routes and climbs shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use holdtrack::annotation::{Hold, HoldRef, Resolution, RouteTopo, UsageInterval};
use holdtrack::geometry::Aabb;
use holdtrack::sim::{Move, ScenarioSpec};
use holdtrack::Extremity;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const WIDTH: u32 = 720;
pub const HEIGHT: u32 = 1280;
pub const FPS: f64 = 25.0;
/// Persistence and memory windows of the default detector at 25 fps.
pub const PERSISTENCE: u32 = 13;
pub const MEMORY: u32 = 25;

const COLUMNS: [f64; 3] = [220.0, 370.0, 520.0];
const ROW_TOP: f64 = 200.0;
const ROW_PITCH: f64 = 180.0;
const ROWS: usize = 5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to 15 holds on a 3-column grid, with non-contiguous ids.
pub fn random_topo(rng: &mut ChaCha8Rng, holds: usize) -> RouteTopo<f64> {
    let mut slots: Vec<(usize, usize)> = (0..ROWS).flat_map(|r| (0..3).map(move |c| (r, c))).collect();
    slots.shuffle(rng);
    let mut ids: Vec<u32> = (0..60).collect();
    ids.shuffle(rng);
    let holds = slots
        .iter()
        .take(holds.clamp(1, ROWS * 3))
        .zip(ids)
        .map(|(&(r, c), id)| {
            let cx = COLUMNS[c] + rng.random_range(-10.0..10.0);
            let cy = ROW_TOP + ROW_PITCH * r as f64 + rng.random_range(-10.0..10.0);
            let hw = rng.random_range(12.0..25.0);
            let hh = rng.random_range(12.0..25.0);
            Hold {
                id,
                bbox: Aabb::from_coords(cx - hw, cy - hh, cx + hw, cy + hh).unwrap(),
                is_foothold: rng.random_bool(0.5),
            }
        })
        .collect();
    RouteTopo {
        format_version: 1,
        route_name: "synthetic".into(),
        video_id: "synthetic".into(),
        fps: FPS,
        resolution: Resolution { width: WIDTH, height: HEIGHT },
        frame_count: None,
        wall_unit: "cm".into(),
        reference_points: vec![],
        homography: None,
        holds,
    }
}

/// Moves for every limb: each at least `PERSISTENCE` frames long, and a limb
/// returning to the same hold waits longer than the memory window.
pub fn random_moves(rng: &mut ChaCha8Rng, topo: &RouteTopo<f64>, frames: u32) -> Vec<Move> {
    let ids: Vec<u32> = topo.holds.iter().map(|h| h.id).collect();
    let mut moves = Vec::new();
    for ext in Extremity::ALL {
        let mut t = rng.random_range(0..60u32);
        let mut last_end: BTreeMap<u32, u32> = BTreeMap::new();
        loop {
            let len = rng.random_range(PERSISTENCE..=200);
            if t + len > frames {
                break;
            }
            // a hold left within the memory window would merge with the new visit
            let free: Vec<u32> =
                ids.iter().copied().filter(|h| last_end.get(h).is_none_or(|&e| t - e - 1 > MEMORY)).collect();
            if free.is_empty() {
                t += MEMORY;
                continue;
            }
            let hold = free[rng.random_range(0..free.len())];
            moves.push(Move { extremity: ext, hold, start: t, end: t + len - 1 });
            last_end.insert(hold, t + len - 1);
            t += len + rng.random_range(1..=60u32);
        }
    }
    moves.sort_by_key(|m| (m.start, m.extremity));
    moves
}

pub fn random_convention(rng: &mut ChaCha8Rng) -> String {
    ["coco17", "coco25", "mediapipe33"][rng.random_range(0..3)].to_string()
}

/// Noise-free scenario with up to 15 holds and at most 2000 frames.
pub fn random_scenario(seed: u64) -> ScenarioSpec<f64> {
    let mut rng = rng(seed);
    let holds = rng.random_range(3..=15);
    let topo = random_topo(&mut rng, holds);
    let frames = rng.random_range(300..=2000);
    let moves = random_moves(&mut rng, &topo, frames);
    let mut spec = ScenarioSpec::new(topo, moves);
    spec.convention = random_convention(&mut rng);
    spec.frame_count = Some(frames);
    spec.seed = seed;
    spec
}

pub fn sorted(mut v: Vec<UsageInterval>) -> Vec<UsageInterval> {
    v.sort_by_key(|u| (u.start(), u.end(), u.extremity, u.hold));
    v
}

pub fn random_intervals(rng: &mut ChaCha8Rng, n: usize, frames: u32, holds: u32) -> Vec<UsageInterval> {
    (0..n)
        .map(|_| {
            let ext = Extremity::ALL[rng.random_range(0..4)];
            let hold = HoldRef::Id(rng.random_range(0..holds));
            let start = rng.random_range(0..frames);
            let end = (start + rng.random_range(0..200)).min(frames - 1);
            UsageInterval::simple(ext, hold, start, end).unwrap()
        })
        .collect()
}
