//! Evaluation archive with incremental extrema and worst-m indexing.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::space::SearchSpace;

/// One evaluated point.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    /// 1-based evaluation ordinal.
    pub index: usize,
    pub x: Vec<f64>,
    /// Projected coordinates; `None` when the projection is the identity.
    x_proj: Option<Vec<f64>>,
    pub value: f64,
}

impl ArchiveEntry {
    pub fn new(index: usize, x: Vec<f64>, value: f64) -> Self {
        Self {
            index,
            x,
            x_proj: None,
            value,
        }
    }

    pub fn with_projection(index: usize, x: Vec<f64>, x_proj: Vec<f64>, value: f64) -> Self {
        Self {
            index,
            x,
            x_proj: Some(x_proj),
            value,
        }
    }

    /// Coordinates in the projected space (the raw point under identity).
    pub fn projected(&self) -> &[f64] {
        self.x_proj.as_deref().unwrap_or(&self.x)
    }

    /// Total order used for worst-m selection: by value, then by ordinal.
    fn rank_cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.index.cmp(&other.index))
    }
}

/// All evaluations of a run.
///
/// Keeps the running maximum and minimum and the `m` lowest-valued entries
/// (ties broken by lower ordinal), sorted ascending so that the acceptance
/// test visits the tightest bounds first.
#[derive(Debug, Clone)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    best: usize,
    worst: usize,
    /// Positions into `entries`, ascending by `(value, index)`.
    worst_m: Vec<usize>,
    m: usize,
}

impl Archive {
    /// Empty archive tracking the `m` worst entries. `m` must be positive;
    /// `usize::MAX` keeps every entry.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("worst-m capacity must be >= 1".into()));
        }
        Ok(Self {
            entries: Vec::new(),
            best: 0,
            worst: 0,
            worst_m: Vec::new(),
            m,
        })
    }

    /// Appends an entry. Its ordinal must be `len() + 1` and its value finite.
    pub fn insert(&mut self, entry: ArchiveEntry) -> Result<()> {
        let expected = self.entries.len() + 1;
        if entry.index != expected {
            return Err(Error::OutOfOrder {
                expected,
                got: entry.index,
            });
        }
        if !entry.value.is_finite() {
            return Err(Error::NonFiniteValue {
                index: entry.index,
                value: entry.value,
            });
        }
        if let Some(first) = self.entries.first() {
            if entry.x.len() != first.x.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.x.len(),
                    got: entry.x.len(),
                });
            }
        }

        let pos = self.entries.len();
        if pos > 0 {
            if entry.value > self.entries[self.best].value {
                self.best = pos;
            }
            if entry.value < self.entries[self.worst].value {
                self.worst = pos;
            }
        }
        self.entries.push(entry);
        self.insert_worst_m(pos);
        Ok(())
    }

    /// Convenience wrapper assigning the next ordinal.
    pub fn push(&mut self, x: Vec<f64>, x_proj: Option<Vec<f64>>, value: f64) -> Result<()> {
        let index = self.entries.len() + 1;
        let entry = match x_proj {
            Some(p) => ArchiveEntry::with_projection(index, x, p, value),
            None => ArchiveEntry::new(index, x, value),
        };
        self.insert(entry)
    }

    fn insert_worst_m(&mut self, pos: usize) {
        let entries = &self.entries;
        let new = &entries[pos];
        let at = self
            .worst_m
            .partition_point(|&i| entries[i].rank_cmp(new) == Ordering::Less);
        if self.worst_m.len() < self.m {
            self.worst_m.insert(at, pos);
        } else if at < self.worst_m.len() {
            self.worst_m.pop();
            self.worst_m.insert(at, pos);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity_m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn best(&self) -> Option<&ArchiveEntry> {
        self.entries.get(self.best)
    }

    pub fn worst(&self) -> Option<&ArchiveEntry> {
        self.entries.get(self.worst)
    }

    /// `max_j f(X_j)`; `-inf` when empty.
    pub fn best_value(&self) -> f64 {
        self.best().map_or(f64::NEG_INFINITY, |e| e.value)
    }

    /// `min_j f(X_j)`; `+inf` when empty.
    pub fn worst_value(&self) -> f64 {
        self.worst().map_or(f64::INFINITY, |e| e.value)
    }

    /// The worst-m set, ascending by value.
    pub fn worst_m(&self) -> impl ExactSizeIterator<Item = &ArchiveEntry> + '_ {
        self.worst_m.iter().map(move |&i| &self.entries[i])
    }

    /// Adaptive threshold floor `(f_max − f_min) / diam(X)`.
    pub fn epsilon_floor(&self, space: &SearchSpace) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyArchive);
        }
        Ok((self.best_value() - self.worst_value()) / space.diameter())
    }

    pub fn into_entries(self) -> Vec<ArchiveEntry> {
        self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn archive_of(values: &[f64], m: usize) -> Archive {
        let mut a = Archive::new(m).unwrap();
        for (i, &v) in values.iter().enumerate() {
            a.push(vec![i as f64], None, v).unwrap();
        }
        a
    }

    fn worst_values(a: &Archive) -> Vec<f64> {
        a.worst_m().map(|e| e.value).collect()
    }

    #[test]
    fn keeps_two_smallest() {
        let a = archive_of(&[3.0, 1.0, 2.0, 5.0, 4.0], 2);
        assert_eq!(worst_values(&a), vec![1.0, 2.0]);
        assert_eq!(a.best_value(), 5.0);
        assert_eq!(a.worst_value(), 1.0);
    }

    #[test]
    fn small_archive_keeps_everything() {
        let a = archive_of(&[4.0, 2.0, 9.0, 1.0, 7.0], 8);
        assert_eq!(a.worst_m().len(), 5);
        assert_eq!(worst_values(&a), vec![1.0, 2.0, 4.0, 7.0, 9.0]);
    }

    #[test]
    fn ties_prefer_lower_ordinal() {
        let a = archive_of(&[1.0, 0.0, 1.0, 1.0], 2);
        let idx: Vec<usize> = a.worst_m().map(|e| e.index).collect();
        assert_eq!(idx, vec![2, 1]);
        // best ties also resolve to the first occurrence
        assert_eq!(a.best().unwrap().index, 1);
    }

    #[test]
    fn rejects_bad_insertions() {
        let mut a = Archive::new(2).unwrap();
        assert!(matches!(
            a.insert(ArchiveEntry::new(2, vec![0.0], 1.0)),
            Err(Error::OutOfOrder { expected: 1, got: 2 })
        ));
        assert!(matches!(
            a.push(vec![0.0], None, f64::NAN),
            Err(Error::NonFiniteValue { .. })
        ));
        a.push(vec![0.0], None, 1.0).unwrap();
        assert!(matches!(
            a.push(vec![0.0, 1.0], None, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Archive::new(0).is_err());
    }

    #[test]
    fn floor_arithmetic() {
        let space = SearchSpace::hypercube(1, 0.0, 2.0).unwrap();
        let a = archive_of(&[0.0, 1.0], 8);
        assert_eq!(a.epsilon_floor(&space).unwrap(), 0.5);
        let c = archive_of(&[3.0, 3.0, 3.0], 8);
        assert_eq!(c.epsilon_floor(&space).unwrap(), 0.0);
        assert!(matches!(
            Archive::new(1).unwrap().epsilon_floor(&space),
            Err(Error::EmptyArchive)
        ));
    }

    #[test]
    fn projected_defaults_to_raw() {
        let e = ArchiveEntry::new(1, vec![1.0, 2.0], 0.0);
        assert_eq!(e.projected(), &[1.0, 2.0]);
        let p = ArchiveEntry::with_projection(1, vec![1.0, 2.0], vec![3.0], 0.0);
        assert_eq!(p.projected(), &[3.0]);
    }

    fn brute_force_worst(values: &[f64], m: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (1..=values.len()).collect();
        idx.sort_by(|&a, &b| {
            values[a - 1]
                .total_cmp(&values[b - 1])
                .then(a.cmp(&b))
        });
        idx.truncate(m);
        idx
    }

    proptest! {
        #[test]
        fn worst_m_matches_full_sort(
            values in prop::collection::vec(-5i32..5, 1..300),
            m in 1usize..20,
        ) {
            // Small integer range forces many ties.
            let values: Vec<f64> = values.into_iter().map(f64::from).collect();
            let mut a = Archive::new(m).unwrap();
            for (i, &v) in values.iter().enumerate() {
                a.push(vec![0.0], None, v).unwrap();
                let got: Vec<usize> = a.worst_m().map(|e| e.index).collect();
                prop_assert_eq!(got, brute_force_worst(&values[..=i], m));
            }
        }

        #[test]
        fn floor_is_order_free(mut values in prop::collection::vec(-1e3f64..1e3, 1..50), seed in any::<u64>()) {
            let space = SearchSpace::hypercube(2, -1.0, 3.0).unwrap();
            let f1 = archive_of(&values, 4).epsilon_floor(&space).unwrap();
            // deterministic shuffle
            let mut s = seed;
            for i in (1..values.len()).rev() {
                s = crate::rng::splitmix64(s);
                values.swap(i, (s % (i as u64 + 1)) as usize);
            }
            let f2 = archive_of(&values, 4).epsilon_floor(&space).unwrap();
            prop_assert_eq!(f1, f2);
        }
    }
}
