use std::cmp::Ordering;

use crate::architecture::Architecture;
use crate::circuit::Timestep;
use crate::placement::Mapping;

/// Multiset of hop distances of the unresolved pairs in a slice.
///
/// Stored as a histogram over distances; only distances of at least two are
/// counted since adjacent pairs need no swap. Ordering is lexicographic on
/// the entries sorted in descending order, which on histograms means: the
/// vector with more pairs at the largest distance where the two differ is
/// the larger one.
#[derive(Debug, Clone, Default)]
pub struct DistanceVector {
    counts: Vec<u32>,
}

impl DistanceVector {
    pub fn new() -> Self {
        DistanceVector::default()
    }

    pub fn from_distances(distances: impl IntoIterator<Item = usize>) -> Self {
        let mut v = DistanceVector::new();
        for d in distances {
            v.add(d);
        }
        v
    }

    pub(crate) fn with_capacity(max_distance: usize) -> Self {
        DistanceVector {
            counts: vec![0; max_distance + 1],
        }
    }

    /// Records one pair at distance `d`; adjacent pairs are ignored.
    pub fn add(&mut self, d: usize) {
        if d < 2 {
            return;
        }
        if self.counts.len() <= d {
            self.counts.resize(d + 1, 0);
        }
        self.counts[d] += 1;
    }

    pub(crate) fn remove(&mut self, d: usize) {
        if d < 2 {
            return;
        }
        let slot = &mut self.counts[d];
        debug_assert!(*slot > 0, "removing absent distance {d}");
        *slot -= 1;
    }

    /// Largest entry, or `None` if every pair is adjacent.
    pub fn max_distance(&self) -> Option<usize> {
        self.counts.iter().rposition(|&c| c > 0)
    }

    pub fn count_at_max(&self) -> u32 {
        self.max_distance().map_or(0, |d| self.counts[d])
    }

    pub fn len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.max_distance().is_none()
    }

    /// Sum of entries.
    pub fn total(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(d, &c)| d as u64 * c as u64)
            .sum()
    }

    /// Entries in descending order.
    pub fn entries(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        for (d, &c) in self.counts.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(d, c as usize));
        }
        out
    }

    /// `(max, count at max)`, the key compared by the strictness rule.
    pub fn diameter_key(&self) -> (usize, u32) {
        (self.max_distance().unwrap_or(0), self.count_at_max())
    }
}

impl Ord for DistanceVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.counts.len().max(other.counts.len());
        for d in (0..len).rev() {
            let a = self.counts.get(d).copied().unwrap_or(0);
            let b = other.counts.get(d).copied().unwrap_or(0);
            if a != b {
                return a.cmp(&b);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for DistanceVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for DistanceVector {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DistanceVector {}

/// Distances of the pairs of `s` under `m`. Pairs with an unmapped qubit are
/// skipped.
pub fn distance_vector(s: &Timestep, m: &Mapping, arch: &Architecture) -> DistanceVector {
    let mut v = DistanceVector::with_capacity(arch.diameter());
    for &(a, b) in &s.pairs {
        if let (Some(x), Some(y)) = (m.node(a), m.node(b)) {
            v.add(arch.distance(x, y));
        }
    }
    v
}

/// Whether moving from `before` to `after` shrinks the slice's diameter:
/// the maximum distance drops, or stays and fewer pairs sit at it.
pub fn strictly_improves(before: &DistanceVector, after: &DistanceVector) -> bool {
    after.diameter_key() < before.diameter_key()
}
