//! Pareto-dominance archives and crowding-distance leader selection.
//!
//! Both the swarm-wide repository and the per-particle repositories are a
//! [`ParetoArchive`]. Entries are kept sorted by `(f1, f2)`; because entries
//! are mutually non-dominated, `f2` is then non-increasing along the archive,
//! which lets dominance checks and evictions run on a binary search instead
//! of a scan.

use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitcore::BitString;
use crate::error::{Error, Result};
use crate::objectives::ObjectiveVector;

/// Fraction of the least crowded entries that leaders are drawn from.
pub const LEADER_POOL_FRACTION: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub position: BitString,
    pub objectives: ObjectiveVector,
}

impl ArchiveEntry {
    pub fn new(position: BitString, objectives: ObjectiveVector) -> Self {
        ArchiveEntry {
            position,
            objectives,
        }
    }
}

/// Pareto dominance for minimization.
#[inline]
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2)
}

#[derive(Debug, Clone, Default)]
pub struct ParetoArchive {
    entries: Vec<ArchiveEntry>,
    capacity: Option<usize>,
    pool: OnceLock<Vec<usize>>,
}

/// Per-particle repository of non-dominated personal bests.
pub type PersonalArchive = ParetoArchive;

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// An archive that truncates its most crowded entries once it holds more
    /// than `capacity` entries.
    pub fn bounded(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid("archive_capacity", "must be at least 1"));
        }
        Ok(ParetoArchive {
            capacity: Some(capacity),
            ..Self::default()
        })
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries ordered by ascending `f1`.
    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<ArchiveEntry> {
        self.entries
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.entries.iter().map(|e| e.objectives).collect()
    }

    /// Offers `candidate` to the archive. It is rejected if an existing entry
    /// dominates it or if the same position is already stored; otherwise every
    /// entry it dominates is evicted and it is added.
    pub fn insert(&mut self, candidate: ArchiveEntry) -> bool {
        let c = candidate.objectives;

        // The last entry with f1 <= c.f1 has the smallest f2 among them.
        let upto = self.entries.partition_point(|e| e.objectives.f1 <= c.f1);
        if upto > 0 {
            let best = &self.entries[upto - 1].objectives;
            if dominates(best, &c) {
                return false;
            }
            if *best == c
                && self.entries[..upto]
                    .iter()
                    .rev()
                    .take_while(|e| e.objectives == c)
                    .any(|e| e.position == candidate.position)
            {
                return false;
            }
        }

        let start = self.entries.partition_point(|e| e.objectives.f1 < c.f1);
        let end = start
            + self.entries[start..]
                .iter()
                .take_while(|e| e.objectives.f2 >= c.f2 && e.objectives != c)
                .count();
        self.entries.splice(start..end, std::iter::once(candidate));
        self.pool = OnceLock::new();

        if let Some(cap) = self.capacity {
            while self.entries.len() > cap {
                let distances = crowding_distances(&self.objectives());
                let most_crowded = distances
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(i, _)| i)
                    .expect("archive is non-empty");
                self.entries.remove(most_crowded);
            }
        }
        true
    }

    /// Indices of the least crowded entries: the top 10% by crowding
    /// distance (at least one), extended to every entry tied with the last.
    pub fn leader_pool(&self) -> &[usize] {
        self.pool.get_or_init(|| {
            if self.entries.is_empty() {
                return Vec::new();
            }
            let distances = crowding_distances(&self.objectives());
            let mut order: Vec<usize> = (0..distances.len()).collect();
            order.sort_by(|&a, &b| distances[b].total_cmp(&distances[a]).then(a.cmp(&b)));
            let keep = ((distances.len() as f64 * LEADER_POOL_FRACTION).floor() as usize).max(1);
            let threshold = distances[order[keep - 1]];
            order.retain(|&i| distances[i] >= threshold);
            order.sort_unstable();
            order
        })
    }

    /// Uniform draw from [`leader_pool`](Self::leader_pool).
    pub fn select_leader<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&ArchiveEntry> {
        if self.entries.is_empty() {
            return Err(Error::EmptyArchive);
        }
        let pool = self.leader_pool();
        Ok(&self.entries[pool[rng.gen_range(0..pool.len())]])
    }
}

/// Selects a personal best from a particle's own repository, using the same
/// least-crowded rule as global leader selection.
pub fn select_pbest<'a, R: Rng + ?Sized>(
    personal: &'a PersonalArchive,
    rng: &mut R,
) -> Result<&'a ArchiveEntry> {
    personal.select_leader(rng)
}

/// Crowding distance of every point of a front. Boundary points of each
/// objective are infinite; interior points sum their normalized neighbor gaps.
pub fn crowding_distances(front: &[ObjectiveVector]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut distance = vec![0.0; n];
    let objectives: [fn(&ObjectiveVector) -> f64; 2] = [|v| v.f1, |v| v.f2];
    for value in objectives {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| value(&front[a]).total_cmp(&value(&front[b])));
        let min = value(&front[order[0]]);
        let max = value(&front[order[n - 1]]);
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = max - min;
        if range > 0.0 {
            for w in order.windows(3) {
                distance[w[1]] += (value(&front[w[2]]) - value(&front[w[0]])) / range;
            }
        }
    }
    distance
}
