use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exact hypervolume (minimisation) of `points` with respect to `reference`.
///
/// Points that do not strictly dominate the reference in every coordinate
/// add nothing. Computed by slicing along the last objective down to a 2-D
/// sweep, which is exact and fast enough for fronts of a few hundred points.
pub fn hypervolume<P: AsRef<[f64]>>(points: &[P], reference: &[f64]) -> Result<f64> {
    let d = reference.len();
    if d == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    let mut pts: Vec<&[f64]> = Vec::with_capacity(points.len());
    for p in points {
        let p = p.as_ref();
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
        if p.iter().zip(reference).all(|(a, r)| a < r) {
            pts.push(p);
        }
    }
    Ok(slice_volume(&mut pts, reference, d))
}

fn slice_volume(pts: &mut [&[f64]], reference: &[f64], d: usize) -> f64 {
    if pts.is_empty() {
        return 0.0;
    }
    match d {
        1 => reference[0] - pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        2 => {
            pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
            let mut area = 0.0;
            let mut best_y = reference[1];
            for p in pts.iter() {
                if p[1] < best_y {
                    area += (reference[0] - p[0]) * (best_y - p[1]);
                    best_y = p[1];
                }
            }
            area
        }
        _ => {
            let last = d - 1;
            pts.sort_by(|a, b| a[last].total_cmp(&b[last]));
            let mut volume = 0.0;
            for i in 0..pts.len() {
                let lo = pts[i][last];
                let hi = if i + 1 < pts.len() {
                    pts[i + 1][last]
                } else {
                    reference[last]
                };
                if hi > lo {
                    let mut below: Vec<&[f64]> = pts[..=i].iter().map(|p| &p[..last]).collect();
                    volume += slice_volume(&mut below, &reference[..last], last) * (hi - lo);
                }
            }
            volume
        }
    }
}

/// Per-objective min/max used for min-max scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBounds {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl ObjectiveBounds {
    /// Scales into [0, 1]; constant objectives map to 0.
    pub fn normalize(&self, p: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            let span = self.max[i] - self.min[i];
            out[i] = if span > 0.0 { (p[i] - self.min[i]) / span } else { 0.0 };
        }
        out
    }

    pub fn denormalize(&self, p: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.min[i] + p[i] * (self.max[i] - self.min[i]);
        }
        out
    }
}

/// Min-max scales all points over their union.
pub fn normalize_objectives(points: &[[f64; 3]]) -> Result<(Vec<[f64; 3]>, ObjectiveBounds)> {
    if points.is_empty() {
        return Err(Error::Empty("objective set"));
    }
    let mut b = ObjectiveBounds {
        min: [f64::INFINITY; 3],
        max: [f64::NEG_INFINITY; 3],
    };
    for p in points {
        for i in 0..3 {
            b.min[i] = b.min[i].min(p[i]);
            b.max[i] = b.max[i].max(p[i]);
        }
    }
    Ok((points.iter().map(|p| b.normalize(p)).collect(), b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn box_and_empty() {
        assert_eq!(hypervolume(&[[0.5, 0.5, 0.5]], &[1.0, 1.0, 1.0]).unwrap(), 0.125);
        let empty: [[f64; 3]; 0] = [];
        assert_eq!(hypervolume(&empty, &[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(hypervolume(&[[1.5, 0.5, 0.5]], &[1.0, 1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let pts = [alloc::vec![0.1, 0.2]];
        assert_eq!(
            hypervolume(&pts, &[1.0, 1.0, 1.0]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn two_boxes_inclusion_exclusion() {
        // 0.8*0.4*0.4 twice minus the 0.4*0.4*0.4 overlap.
        let hv = hypervolume(&[[0.2, 0.6, 0.6], [0.6, 0.2, 0.6]], &[1.0, 1.0, 1.0]).unwrap();
        assert!((hv - (2.0 * 0.128 - 0.064)).abs() < 1e-12);
    }

    fn monte_carlo(points: &[[f64; 3]], samples: usize, seed: u64) -> f64 {
        let mut rng = seeded_rng(seed);
        let hits = (0..samples)
            .filter(|_| {
                let s = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
                points.iter().any(|p| p.iter().zip(&s).all(|(a, b)| a <= b))
            })
            .count();
        hits as f64 / samples as f64
    }

    #[test]
    fn two_point_front_matches_monte_carlo() {
        let pts = [[0.2, 0.6, 0.6], [0.6, 0.2, 0.6]];
        let exact = hypervolume(&pts, &[1.0, 1.0, 1.0]).unwrap();
        let mc = monte_carlo(&pts, 1_000_000, 17);
        assert!((exact - mc).abs() / exact < 0.01, "{exact} vs {mc}");
    }

    #[test]
    fn normalization_cases() {
        let (n, b) = normalize_objectives(&[[1.0, 3.0, 0.0], [5.0, 3.0, 2.0]]).unwrap();
        assert_eq!(n, alloc::vec![[0.0, 0.0, 0.0], [1.0, 0.0, 1.0]]);
        assert_eq!(b.denormalize(&n[1]), [5.0, 3.0, 2.0]);
        assert!(normalize_objectives(&[]).is_err());
    }

    proptest! {
        #[test]
        fn adding_a_point_never_decreases_volume(seed in any::<u64>(), n in 1usize..12) {
            let mut rng = seeded_rng(seed);
            let pts: Vec<[f64; 3]> = (0..n).map(|_| [rng.random(), rng.random(), rng.random()]).collect();
            let extra = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
            let before = hypervolume(&pts, &[1.0; 3]).unwrap();
            let mut more = pts.clone();
            more.push(extra);
            prop_assert!(hypervolume(&more, &[1.0; 3]).unwrap() >= before - 1e-12);
        }

        #[test]
        fn rescaling_round_trips(seed in any::<u64>()) {
            let mut rng = seeded_rng(seed);
            let pts: Vec<[f64; 3]> = (0..8).map(|_| [rng.random_range(-5.0..5.0), rng.random_range(0.0..100.0), 2.0]).collect();
            let (n, b) = normalize_objectives(&pts).unwrap();
            for (p, q) in pts.iter().zip(&n) {
                let r = b.denormalize(q);
                for i in 0..3 {
                    prop_assert!((r[i] - p[i]).abs() < 1e-9);
                }
            }
        }
    }
}
