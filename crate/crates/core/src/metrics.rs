//! Front quality indicators: hypervolume, generational distance and the
//! number of points on the obtained front.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{ideal_and_nadir, ObjectiveVector, Problem};

/// Reference point for hypervolume in normalized objective space.
pub const HV_REFERENCE: ObjectiveVector = ObjectiveVector { f1: 1.1, f2: 1.1 };

/// Number of analytic front samples used as the GD reference.
pub const GD_REFERENCE_POINTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub hv: f64,
    pub gd: f64,
    pub nop: usize,
}

/// Normalization and reference point under which hypervolume is reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HvReference {
    pub reference: ObjectiveVector,
    pub ideal: ObjectiveVector,
    pub nadir: ObjectiveVector,
}

impl HvReference {
    /// Ideal and nadir taken from the analytic front, reference `(1.1, 1.1)`.
    pub fn for_problem(problem: Problem) -> Self {
        let (ideal, nadir) = ideal_and_nadir(problem);
        HvReference {
            reference: HV_REFERENCE,
            ideal,
            nadir,
        }
    }

    pub fn hypervolume(&self, front: &[ObjectiveVector]) -> f64 {
        hypervolume2d(&normalize(front, self.ideal, self.nadir), self.reference)
    }
}

/// Maps each objective affinely so that `ideal -> 0` and `nadir -> 1`.
pub fn normalize(
    front: &[ObjectiveVector],
    ideal: ObjectiveVector,
    nadir: ObjectiveVector,
) -> Vec<ObjectiveVector> {
    let scale = |v: f64, lo: f64, hi: f64| {
        if hi > lo {
            (v - lo) / (hi - lo)
        } else {
            v - lo
        }
    };
    front
        .iter()
        .map(|p| ObjectiveVector {
            f1: scale(p.f1, ideal.f1, nadir.f1),
            f2: scale(p.f2, ideal.f2, nadir.f2),
        })
        .collect()
}

/// Exact area dominated by `front` and bounded by `reference` (minimization).
/// Points that do not strictly dominate the reference contribute nothing.
pub fn hypervolume2d(front: &[ObjectiveVector], reference: ObjectiveVector) -> f64 {
    let mut pts: Vec<ObjectiveVector> = front
        .iter()
        .filter(|p| p.f1 < reference.f1 && p.f2 < reference.f2)
        .copied()
        .collect();
    pts.sort_by(|a, b| a.f1.total_cmp(&b.f1).then(a.f2.total_cmp(&b.f2)));

    // sweep in f1 order; only points that lower the running f2 add area
    let mut area = 0.0;
    let mut ceiling = reference.f2;
    for p in pts {
        if p.f2 < ceiling {
            area += (reference.f1 - p.f1) * (ceiling - p.f2);
            ceiling = p.f2;
        }
    }
    area
}

/// `sqrt(sum d_i^2) / |Q|`, where `d_i` is the Euclidean distance from the
/// i-th obtained point to its nearest reference point.
pub fn generational_distance(
    front: &[ObjectiveVector],
    reference_front: &[ObjectiveVector],
) -> Result<f64> {
    if front.is_empty() {
        return Err(Error::Empty("front"));
    }
    if reference_front.is_empty() {
        return Err(Error::Empty("reference front"));
    }
    let sum_sq: f64 = front
        .iter()
        .map(|p| {
            reference_front
                .iter()
                .map(|r| (p.f1 - r.f1).powi(2) + (p.f2 - r.f2).powi(2))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(sum_sq.sqrt() / front.len() as f64)
}

pub fn nop(front: &[ObjectiveVector]) -> usize {
    front.len()
}

/// HV, GD and NoP of a final front. `reference_front` is the analytic sample
/// GD is measured against.
pub fn report(
    front: &[ObjectiveVector],
    hv_reference: &HvReference,
    reference_front: &[ObjectiveVector],
) -> Result<MetricReport> {
    Ok(MetricReport {
        hv: hv_reference.hypervolume(front),
        gd: generational_distance(front, reference_front)?,
        nop: nop(front),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archive::{ArchiveEntry, ParetoArchive};
    use crate::bitcore::BitString;
    use crate::objectives::true_front;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ov(f1: f64, f2: f64) -> ObjectiveVector {
        ObjectiveVector { f1, f2 }
    }

    #[test]
    fn normalization_examples() {
        let (ideal, nadir) = (ov(0.0, 0.0), ov(1.0, 1.0));
        assert_eq!(
            normalize(&[ov(0.25, 0.5)], ideal, nadir),
            vec![ov(0.25, 0.5)]
        );
        let (ideal, nadir) = (ov(1.0, -2.0), ov(3.0, 2.0));
        assert_eq!(
            normalize(&[ideal, nadir, ov(2.0, 0.0)], ideal, nadir),
            vec![ov(0.0, 0.0), ov(1.0, 1.0), ov(0.5, 0.5)]
        );
    }

    #[test]
    fn hypervolume_examples() {
        assert_eq!(hypervolume2d(&[ov(0.0, 0.0)], ov(1.0, 1.0)), 1.0);
        assert_eq!(
            hypervolume2d(&[ov(0.0, 1.0), ov(1.0, 0.0)], ov(1.0, 1.0)),
            0.0
        );
        let hv = hypervolume2d(&[ov(0.0, 1.0), ov(1.0, 0.0)], ov(1.1, 1.1));
        assert!((hv - 0.21).abs() < 1e-12, "{hv}");
        assert_eq!(hypervolume2d(&[], ov(1.0, 1.0)), 0.0);
        assert_eq!(hypervolume2d(&[ov(2.0, 0.0)], ov(1.0, 1.0)), 0.0);
    }

    #[test]
    fn hypervolume_ignores_dominated_points() {
        let a = hypervolume2d(&[ov(0.2, 0.2)], ov(1.0, 1.0));
        let b = hypervolume2d(&[ov(0.2, 0.2), ov(0.5, 0.5), ov(0.2, 0.7)], ov(1.0, 1.0));
        assert_eq!(a, b);
    }

    #[test]
    fn zdt1_analytic_hypervolume() {
        // 0.1 * 1.1 + integral_0^1 (1.1 - (1 - sqrt f)) df = 0.11 + 0.1 + 2/3
        let front = true_front(Problem::Zdt1, 1000).unwrap();
        let hv = HvReference::for_problem(Problem::Zdt1).hypervolume(&front);
        let exact = 0.11 + 0.1 + 2.0 / 3.0;
        assert!((hv - exact).abs() <= 0.002, "{hv}");
    }

    #[test]
    fn gd_examples() {
        let f = true_front(Problem::Zdt1, 1000).unwrap();
        assert_eq!(generational_distance(&f[10..20], &f).unwrap(), 0.0);
        assert_eq!(
            generational_distance(&[ov(0.0, 2.0)], &[ov(0.0, 1.0)]).unwrap(),
            1.0
        );
        // (0, 1.1) is 0.1 from (0, 1); the curve passes closest to (1, 0.1)
        // at f1 = 0.96, squared distance 0.04^2 + 0.08^2 = 0.008
        let gd = generational_distance(&[ov(0.0, 1.1), ov(1.0, 0.1)], &f).unwrap();
        assert!((gd - 0.018f64.sqrt() / 2.0).abs() < 5e-4, "{gd}");
        assert!(generational_distance(&[], &f).is_err());
        assert!(generational_distance(&f, &[]).is_err());
    }

    #[test]
    fn nop_counts_archive_size() {
        assert_eq!(nop(&[]), 0);
        assert_eq!(nop(&[ov(0.0, 0.0)]), 1);
        let mut a = ParetoArchive::new();
        for (i, (f1, f2)) in [(0.0, 1.0), (1.0, 0.0), (2.0, 2.0)].into_iter().enumerate() {
            a.insert(ArchiveEntry::new(
                BitString::from_bools(&[i == 1, i == 2]),
                ov(f1, f2),
            ));
        }
        assert_eq!(nop(&a.objectives()), 2);
    }

    fn monte_carlo_hv(
        front: &[ObjectiveVector],
        reference: ObjectiveVector,
        samples: usize,
        seed: u64,
    ) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hits = (0..samples)
            .filter(|_| {
                let q = ov(
                    rng.gen::<f64>() * reference.f1,
                    rng.gen::<f64>() * reference.f2,
                );
                front.iter().any(|p| p.f1 <= q.f1 && p.f2 <= q.f2)
            })
            .count() as f64;
        let box_area = reference.f1 * reference.f2;
        let p = hits / samples as f64;
        (
            p * box_area,
            box_area * (p * (1.0 - p) / samples as f64).sqrt(),
        )
    }

    #[test]
    fn hypervolume_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..3 {
            let n = rng.gen_range(1..=20);
            let front: Vec<_> = (0..n).map(|_| ov(rng.gen(), rng.gen())).collect();
            let reference = ov(1.1, 1.1);
            let (estimate, se) = monte_carlo_hv(&front, reference, 200_000, trial);
            let exact = hypervolume2d(&front, reference);
            assert!(
                (exact - estimate).abs() <= 3.0 * se.max(1e-9),
                "{exact} vs {estimate}"
            );
        }
    }

    proptest! {
        #[test]
        fn hypervolume_is_monotone(
            pts in proptest::collection::vec((0.0f64..1.2, 0.0f64..1.2), 0..20),
            extra in (0.0f64..1.2, 0.0f64..1.2),
        ) {
            let front: Vec<_> = pts.iter().map(|&(a, b)| ov(a, b)).collect();
            let before = hypervolume2d(&front, HV_REFERENCE);
            let mut grown = front.clone();
            grown.push(ov(extra.0, extra.1));
            prop_assert!(hypervolume2d(&grown, HV_REFERENCE) >= before);
        }

        #[test]
        fn metrics_are_permutation_invariant(
            pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..20),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            let front: Vec<_> = pts.iter().map(|&(a, b)| ov(a, b)).collect();
            let mut shuffled = front.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let reference = true_front(Problem::Zdt1, 200).unwrap();
            prop_assert_eq!(hypervolume2d(&front, HV_REFERENCE), hypervolume2d(&shuffled, HV_REFERENCE));
            let a = generational_distance(&front, &reference).unwrap();
            let b = generational_distance(&shuffled, &reference).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn gd_of_front_against_itself_is_zero(
            pts in proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 1..30)
        ) {
            let front: Vec<_> = pts.iter().map(|&(a, b)| ov(a, b)).collect();
            prop_assert_eq!(generational_distance(&front, &front).unwrap(), 0.0);
        }

        #[test]
        fn single_point_gd_is_nearest_distance(
            p in (0.0f64..3.0, 0.0f64..3.0),
            refs in proptest::collection::vec((0.0f64..3.0, 0.0f64..3.0), 1..30),
        ) {
            let refs: Vec<_> = refs.iter().map(|&(a, b)| ov(a, b)).collect();
            let nearest = refs
                .iter()
                .map(|r| ((p.0 - r.f1).powi(2) + (p.1 - r.f2).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            let gd = generational_distance(&[ov(p.0, p.1)], &refs).unwrap();
            prop_assert!((gd - nearest).abs() <= 1e-12);
        }
    }
}
