use std::collections::BTreeMap;

use crate::geometry::Point2;
use crate::limb::Extremity;
use crate::scalar::Real;

/// Overlap run for one `(limb, hold)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairRun {
    /// First overlapping frame; kept when a run resumes after a short gap.
    pub start: u32,
    pub last_overlap: u32,
    /// Frame at which the run reached the persistence threshold.
    pub confirmed_at: Option<u32>,
}

impl PairRun {
    fn begin(frame: u32) -> Self {
        Self { start: frame, last_overlap: frame, confirmed_at: None }
    }

    pub fn is_confirmed(&self) -> bool {
        self.confirmed_at.is_some()
    }
}

/// Live bookkeeping of the detector: open runs and last known limb anchors.
#[derive(Debug, Clone)]
pub struct DetectionState<T> {
    pub(super) last_frame: Option<u32>,
    runs: BTreeMap<(Extremity, u32), PairRun>,
    pub(super) last_anchor: [Option<(Point2<T>, u32)>; 4],
}

impl<T> Default for DetectionState<T> {
    fn default() -> Self {
        Self { last_frame: None, runs: BTreeMap::new(), last_anchor: [None, None, None, None] }
    }
}

impl<T: Real> DetectionState<T> {
    pub fn last_frame(&self) -> Option<u32> {
        self.last_frame
    }

    pub fn run(&self, ext: Extremity, hold: u32) -> Option<&PairRun> {
        self.runs.get(&(ext, hold))
    }

    pub fn open_runs(&self) -> impl Iterator<Item = ((Extremity, u32), &PairRun)> {
        self.runs.iter().map(|(k, v)| (*k, v))
    }

    /// Last accepted anchor for `ext` and the frame it was observed in.
    pub fn last_anchor(&self, ext: Extremity) -> Option<(Point2<T>, u32)> {
        self.last_anchor[ext.index()]
    }

    /// Applies one frame's overlap set and returns the runs that ended.
    pub(super) fn advance(
        &mut self,
        frame: u32,
        overlapping: &[(Extremity, u32)],
        persistence: u32,
        memory: u32,
    ) -> Vec<((Extremity, u32), PairRun)> {
        let mut closed = Vec::new();
        for &key in overlapping {
            let run = match self.runs.get_mut(&key) {
                Some(run) if frame - run.last_overlap - 1 <= memory => {
                    run.last_overlap = frame;
                    run
                }
                Some(run) => {
                    // gap too long: the earlier run is over, this overlap starts afresh
                    closed.push((key, *run));
                    *run = PairRun::begin(frame);
                    run
                }
                None => self.runs.entry(key).or_insert(PairRun::begin(frame)),
            };
            if run.confirmed_at.is_none() && frame - run.start + 1 >= persistence {
                run.confirmed_at = Some(frame);
            }
        }
        let expired: Vec<_> = self
            .runs
            .iter()
            .filter(|(_, run)| run.last_overlap != frame && frame - run.last_overlap > memory)
            .map(|(k, _)| *k)
            .collect();
        for key in expired {
            if let Some(run) = self.runs.remove(&key) {
                closed.push((key, run));
            }
        }
        closed
    }

    pub(super) fn drain(&mut self) -> Vec<((Extremity, u32), PairRun)> {
        std::mem::take(&mut self.runs).into_iter().collect()
    }
}
