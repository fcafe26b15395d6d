//! Finitely supported sequences and signed indicator vectors.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A finitely supported real sequence indexed from 1.
///
/// Entries are kept sorted by index with no explicit zeros, so equality is
/// equality of sequences.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vector from `(index, value)` pairs. Zeros are dropped;
    /// index 0, repeated indices and non-finite values are rejected.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut map = BTreeMap::new();
        for (n, v) in pairs {
            if n == 0 {
                return invalid("indices start at 1");
            }
            if !v.is_finite() {
                return invalid(format!("non-finite coefficient at index {n}"));
            }
            if map.insert(n, v).is_some() {
                return invalid(format!("index {n} given twice"));
            }
        }
        Ok(Self {
            entries: map.into_iter().filter(|&(_, v)| v != 0.0).collect(),
        })
    }

    /// `dense[0]` becomes the coefficient of `e_1`.
    pub fn from_dense(dense: &[f64]) -> Result<Self> {
        Self::from_pairs(dense.iter().enumerate().map(|(i, &v)| (i + 1, v)))
    }

    /// The unit vector `e_n`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::from_pairs([(n, 1.0)])
    }

    /// Trusted constructor for already sorted, zero-free entries.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(usize, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(n, v)| n >= 1 && v != 0.0));
        Self { entries }
    }

    pub fn get(&self, n: usize) -> f64 {
        match self.entries.binary_search_by_key(&n, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn set(&mut self, n: usize, v: f64) {
        assert!(n >= 1, "indices start at 1");
        match self.entries.binary_search_by_key(&n, |e| e.0) {
            Ok(i) if v == 0.0 => {
                self.entries.remove(i);
            }
            Ok(i) => self.entries[i].1 = v,
            Err(i) if v != 0.0 => self.entries.insert(i, (n, v)),
            Err(_) => {}
        }
    }

    /// Size of the support.
    pub fn len(&self) -> usize {
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

    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.1.abs()))
    }

    pub fn scale(&self, t: f64) -> Self {
        if t == 0.0 {
            return Self::new();
        }
        Self::from_sorted_unchecked(self.entries.iter().map(|&(n, v)| (n, v * t)).collect())
    }

    /// Restriction `P_A x` to the indices in `a`.
    pub fn project(&self, a: &[usize]) -> Self {
        Self::from_sorted_unchecked(self.entries.iter().copied().filter(|(n, _)| a.contains(n)).collect())
    }

    /// `x - P_A x`.
    pub fn remove(&self, a: &[usize]) -> Self {
        Self::from_sorted_unchecked(self.entries.iter().copied().filter(|(n, _)| !a.contains(n)).collect())
    }

    /// Partial sum `S_m x` of the basis expansion.
    pub fn partial_sum(&self, m: usize) -> Self {
        Self::from_sorted_unchecked(self.entries.iter().copied().filter(|e| e.0 <= m).collect())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (n, v) = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, f(a[i - 1].1, 0.0))
            } else if i >= a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, f(0.0, b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, f(a[i - 1].1, b[j - 1].1))
            };
            if v != 0.0 {
                out.push((n, v));
            }
        }
        Self::from_sorted_unchecked(out)
    }
}

impl Add for &SparseVector {
    type Output = SparseVector;
    fn add(self, rhs: &SparseVector) -> SparseVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SparseVector {
    type Output = SparseVector;
    fn sub(self, rhs: &SparseVector) -> SparseVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &SparseVector {
    type Output = SparseVector;
    fn neg(self) -> SparseVector {
        self.scale(-1.0)
    }
}

impl Mul<&SparseVector> for f64 {
    type Output = SparseVector;
    fn mul(self, rhs: &SparseVector) -> SparseVector {
        rhs.scale(self)
    }
}

/// A finite index set with a sign attached to each index; stands for the
/// vector `1_{εA} = Σ ε_n e_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedSet {
    indices: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedSet {
    /// Indices must be distinct and positive; they are sorted on the way in.
    pub fn new(indices: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        if indices.len() != signs.len() {
            return invalid("indices and signs differ in length");
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return invalid("signs must be +1 or -1");
        }
        let mut pairs: Vec<(usize, i8)> = indices.into_iter().zip(signs).collect();
        pairs.sort_unstable();
        if pairs.iter().any(|p| p.0 == 0) {
            return invalid("indices start at 1");
        }
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return invalid("repeated index in signed set");
        }
        Ok(Self {
            indices: pairs.iter().map(|p| p.0).collect(),
            signs: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// All signs `+1`.
    pub fn positive(indices: Vec<usize>) -> Result<Self> {
        let n = indices.len();
        Self::new(indices, vec![1; n])
    }

    /// Signs alternating `+1, -1, +1, ...` along increasing indices.
    pub fn alternating(indices: Vec<usize>) -> Result<Self> {
        let mut indices = indices;
        indices.sort_unstable();
        let signs = (0..indices.len()).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        Self::new(indices, signs)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn to_vector(&self) -> SparseVector {
        SparseVector::from_sorted_unchecked(
            self.indices
                .iter()
                .zip(&self.signs)
                .map(|(&n, &s)| (n, s as f64))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_drops_zeros_and_sorts() {
        let x = SparseVector::from_pairs([(5, 1.0), (2, 0.0), (1, -3.0)]).unwrap();
        assert_eq!(x.entries(), &[(1, -3.0), (5, 1.0)]);
        assert_eq!(x.get(2), 0.0);
        assert_eq!(x.max_index(), Some(5));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SparseVector::from_pairs([(0, 1.0)]).is_err());
        assert!(SparseVector::from_pairs([(1, 1.0), (1, 2.0)]).is_err());
        assert!(SparseVector::from_pairs([(1, f64::NAN)]).is_err());
        assert!(SignedSet::new(vec![1, 1], vec![1, 1]).is_err());
        assert!(SignedSet::new(vec![1], vec![2]).is_err());
    }

    #[test]
    fn arithmetic() {
        let x = SparseVector::from_dense(&[1.0, 2.0, 3.0]).unwrap();
        let y = SparseVector::from_pairs([(2, 2.0), (4, 1.0)]).unwrap();
        assert_eq!((&x - &y).entries(), &[(1, 1.0), (3, 3.0), (4, -1.0)]);
        assert_eq!((&x + &y).entries(), &[(1, 1.0), (2, 4.0), (3, 3.0), (4, 1.0)]);
        assert_eq!(x.partial_sum(2).entries(), &[(1, 1.0), (2, 2.0)]);
        assert_eq!(x.project(&[1, 3]).entries(), &[(1, 1.0), (3, 3.0)]);
        assert_eq!(x.remove(&[1, 3]).entries(), &[(2, 2.0)]);
    }

    #[test]
    fn set_and_signed_sets() {
        let mut x = SparseVector::new();
        x.set(3, 1.0);
        x.set(1, 2.0);
        x.set(3, 0.0);
        assert_eq!(x.entries(), &[(1, 2.0)]);
        let s = SignedSet::alternating(vec![4, 2, 3]).unwrap();
        assert_eq!(s.to_vector().entries(), &[(2, 1.0), (3, -1.0), (4, 1.0)]);
    }
}
