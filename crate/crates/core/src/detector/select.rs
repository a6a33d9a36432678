use crate::annotation::{Person, RouteTopo};
use crate::geometry::{Aabb, Point2};
use crate::scalar::Real;

/// Hold region widened by `margin_fraction` of its width on every side.
pub fn climbing_region<T: Real>(topo: &RouteTopo<T>, margin_fraction: f64) -> Option<Aabb<T>> {
    let region = topo.hold_region()?;
    Some(region.expanded(region.width() * T::lit(margin_fraction)))
}

/// Picks the person most likely to be the climber.
///
/// Ranking: most confident keypoints (`>= threshold`) inside `region`, then
/// the larger summed confidence of those keypoints, then the lower person
/// id. Persons with no such keypoint never qualify.
pub fn select_climber_in<T: Real>(persons: &[Person<T>], region: &Aabb<T>, threshold: T) -> Option<u32> {
    let mut best: Option<(usize, T, u32)> = None;
    for person in persons {
        let (count, total) = person
            .keypoints
            .values()
            .filter(|k| k.confidence >= threshold && region.contains(&Point2::new(k.x, k.y)))
            .fold((0usize, T::zero()), |(n, s), k| (n + 1, s + k.confidence));
        if count == 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some((bn, bs, bid)) => {
                count > bn || (count == bn && (total > bs || (total == bs && person.id < bid)))
            }
        };
        if better {
            best = Some((count, total, person.id));
        }
    }
    best.map(|(_, _, id)| id)
}

pub fn select_climber<T: Real>(persons: &[Person<T>], topo: &RouteTopo<T>, margin_fraction: f64, threshold: T) -> Option<u32> {
    let region = climbing_region(topo, margin_fraction)?;
    select_climber_in(persons, &region, threshold)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::annotation::Keypoint;

    fn person(id: u32, kps: &[(f64, f64, f64)]) -> Person<f64> {
        let keypoints: BTreeMap<_, _> = kps
            .iter()
            .enumerate()
            .map(|(i, &(x, y, c))| (format!("k{i:02}"), Keypoint::new(x, y, c)))
            .collect();
        Person { id, keypoints }
    }

    fn region() -> Aabb<f64> {
        Aabb::from_coords(0.0, 0.0, 100.0, 100.0).unwrap()
    }

    #[test]
    fn single_person() {
        let p = person(7, &[(10., 10., 0.9)]);
        assert_eq!(select_climber_in(&[p], &region(), 0.3), Some(7));
    }

    #[test]
    fn strict_dominance_by_count() {
        let a = person(1, &[(10., 10., 0.5); 10]);
        let b = person(0, &[(10., 10., 1.0); 2]);
        assert_eq!(select_climber_in(&[b, a], &region(), 0.3), Some(1));
    }

    #[test]
    fn tie_on_count_broken_by_confidence_then_id() {
        let first = person(3, &[(10., 10., 0.9); 9]);
        let mut kps = vec![(10., 10., 0.9); 8];
        kps.push((10., 10., 0.7));
        let second = person(2, &kps);
        // 8.1 vs 7.9 summed confidence
        assert_eq!(select_climber_in(&[first.clone(), second], &region(), 0.3), Some(3));
        let twin = Person { id: 1, ..first.clone() };
        assert_eq!(select_climber_in(&[first, twin], &region(), 0.3), Some(1));
    }

    #[test]
    fn outside_or_low_confidence_does_not_qualify() {
        let outside = person(0, &[(500., 500., 0.9)]);
        let weak = person(1, &[(10., 10., 0.1)]);
        assert_eq!(select_climber_in(&[outside, weak], &region(), 0.3), None);
        assert_eq!(select_climber_in::<f64>(&[], &region(), 0.3), None);
    }
}
