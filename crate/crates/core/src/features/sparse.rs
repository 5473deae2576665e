use serde::{Deserialize, Serialize};

use super::FeatureError;

/// Sorted sparse vector with a declared dimensionality.
///
/// Indices are strictly increasing and below `dim`; zeros are never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        SparseVector {
            dim,
            entries: Vec::new(),
        }
    }

    /// Builds a vector from unordered pairs. Duplicate indices are summed and
    /// resulting zeros dropped.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, f64)>) -> Result<Self, FeatureError> {
        if let Some(&(index, _)) = pairs.iter().find(|(i, _)| *i >= dim) {
            return Err(FeatureError::IndexOutOfRange { index, dim });
        }
        pairs.sort_by_key(|&(i, _)| i);
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((last, acc)) if *last == i => *acc += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|&(_, v)| v != 0.0);
        Ok(SparseVector { dim, entries })
    }

    pub fn from_dense(values: &[f64]) -> Self {
        SparseVector {
            dim: values.len(),
            entries: values
                .iter()
                .copied()
                .enumerate()
                .filter(|&(_, v)| v != 0.0)
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            dense[i] = v;
        }
        dense
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * dense[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        if factor == 0.0 {
            self.entries.clear();
        } else {
            self.entries.iter_mut().for_each(|(_, v)| *v *= factor);
        }
    }

    /// Scales to unit L2 norm; the zero vector is left alone.
    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            self.scale(1.0 / norm);
        }
    }
}

/// Concatenates blocks at consecutive offsets in the given order.
pub fn combine(blocks: &[SparseVector]) -> SparseVector {
    let dim = blocks.iter().map(SparseVector::dim).sum();
    let mut entries = Vec::with_capacity(blocks.iter().map(SparseVector::nnz).sum());
    let mut offset = 0;
    for block in blocks {
        entries.extend(block.iter().map(|(i, v)| (offset + i, v)));
        offset += block.dim();
    }
    SparseVector { dim, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn from_pairs_sorts_merges_and_drops_zeros() {
        let v = SparseVector::from_pairs(5, vec![(3, 1.0), (1, 2.0), (3, -1.0), (0, 0.0)]).unwrap();
        assert_eq!(v.entries(), &[(1, 2.0)]);
        assert!(SparseVector::from_pairs(2, vec![(2, 1.0)]).is_err());
    }

    #[test]
    fn combine_examples() {
        let a = SparseVector::from_pairs(3, vec![(0, 1.0)]).unwrap();
        assert_eq!(combine(std::slice::from_ref(&a)), a);

        let b = SparseVector::from_pairs(2, vec![(1, 5.0)]).unwrap();
        let joined = combine(&[a, b]);
        assert_eq!(joined.dim(), 5);
        assert_eq!(joined.entries(), &[(0, 1.0), (4, 5.0)]);

        let empty = combine(&[SparseVector::zeros(4), SparseVector::zeros(6)]);
        assert_eq!(empty.dim(), 10);
        assert!(empty.is_empty());
    }

    fn block() -> impl Strategy<Value = SparseVector> {
        (1usize..6).prop_flat_map(|dim| {
            prop::collection::vec((0..dim, -3.0f64..3.0), 0..dim)
                .prop_map(move |pairs| SparseVector::from_pairs(dim, pairs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn combine_is_associative(a in block(), b in block(), c in block()) {
            let left = combine(&[combine(&[a.clone(), b.clone()]), c.clone()]);
            let right = combine(&[a.clone(), combine(&[b.clone(), c.clone()])]);
            let flat = combine(&[a, b, c]);
            prop_assert_eq!(&left, &flat);
            prop_assert_eq!(&right, &flat);
        }

        #[test]
        fn dense_round_trip(v in block()) {
            prop_assert_eq!(SparseVector::from_dense(&v.to_dense()), v);
        }
    }
}
