//! Finitely supported vectors in `span{e_m}`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::map::Index;
use crate::scalar::{Real, Scalar};

/// Coordinate map `index → scalar`; zero coordinates are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<S: Scalar> {
    entries: BTreeMap<Index, S>,
}

impl<S: Scalar> Default for SparseVector<S> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> SparseVector<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `e_j`.
    pub fn basis(j: u64) -> Self {
        let mut v = Self::zero();
        v.set(BigUint::from(j), S::one());
        v
    }

    /// `Σ coeffs[m-1] e_m`.
    pub fn from_coefficients(coeffs: &[S]) -> Self {
        let mut v = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            v.set(BigUint::from(i as u64 + 1), *c);
        }
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (Index, S)>>(pairs: I) -> Self {
        let mut v = Self::zero();
        for (j, c) in pairs {
            let cur = v.get(&j);
            v.set(j, cur + c);
        }
        v
    }

    pub fn get(&self, j: &BigUint) -> S {
        self.entries.get(j).copied().unwrap_or_else(S::zero)
    }

    pub fn get_at(&self, j: u64) -> S {
        self.get(&BigUint::from(j))
    }

    /// Stores `value` at `j`, removing the entry when `value` is zero.
    pub fn set(&mut self, j: Index, value: S) {
        if value.is_zero_scalar() {
            self.entries.remove(&j);
        } else {
            self.entries.insert(j, value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Index, &S)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest stored index (the degree), `None` for the zero vector.
    pub fn max_index(&self) -> Option<&Index> {
        self.entries.keys().next_back()
    }

    pub fn degree(&self) -> u64 {
        self.max_index()
            .map(|j| j.to_u64().unwrap_or(u64::MAX))
            .unwrap_or(0)
    }

    pub fn scale(&self, c: S) -> Self {
        Self::from_pairs(self.entries.iter().map(|(j, v)| (j.clone(), *v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (j, v) in other.iter() {
            let cur = out.get(j);
            out.set(j.clone(), cur + *v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-S::one()))
    }

    /// `(Σ|α_m|^p)^{1/p}` over the support.
    pub fn p_norm(&self, p: S::Real) -> S::Real {
        let one = S::Real::one();
        if p == one {
            return self
                .entries
                .values()
                .fold(S::Real::zero(), |acc, v| acc + v.modulus());
        }
        // Scale by the largest modulus so that |α|^p cannot overflow.
        let scale = self
            .entries
            .values()
            .map(|v| v.modulus())
            .fold(S::Real::zero(), Float::max);
        if scale == S::Real::zero() || !scale.is_finite() {
            return scale;
        }
        let sum = self
            .entries
            .values()
            .fold(S::Real::zero(), |acc, v| acc + (v.modulus() / scale).powf(p));
        scale * sum.powf(one / p)
    }

    /// Dense coordinates `1..=d`.
    pub fn project(&self, d: u64) -> Vec<S> {
        (1..=d).map(|m| self.get_at(m)).collect()
    }

    /// Restriction to indices `≤ d`.
    pub fn truncate(&self, d: u64) -> Self {
        let bound = BigUint::from(d);
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(j, _)| **j <= bound)
                .map(|(j, v)| (j.clone(), *v))
                .collect(),
        }
    }
}

/// p-norm of a dense projected vector.
pub fn dense_p_norm<S: Scalar>(v: &[S], p: S::Real) -> S::Real {
    SparseVector::from_coefficients(v).p_norm(p)
}

/// Whether `a` and `b` agree coordinatewise to relative `rel` (absolute near zero).
pub fn approx_eq<S: Scalar>(a: &SparseVector<S>, b: &SparseVector<S>, rel: f64) -> bool {
    let rel = S::Real::from_f64_lossy(rel);
    let keys: std::collections::BTreeSet<&Index> = a.entries.keys().chain(b.entries.keys()).collect();
    keys.into_iter().all(|j| {
        let (x, y) = (a.get(j), b.get(j));
        let scale = x.modulus().max(y.modulus()).max(S::Real::one());
        (x - y).modulus() <= rel * scale
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_norm_examples() {
        assert_eq!(SparseVector::<f64>::basis(3).p_norm(2.0), 1.0);
        let v = SparseVector::from_coefficients(&[1.0f64, 1.0]);
        assert_eq!(v.p_norm(1.0), 2.0);
        let w = SparseVector::from_coefficients(&[3.0f64, 4.0]);
        assert!((w.p_norm(2.0) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn p_norm_survives_huge_entries() {
        let v = SparseVector::from_coefficients(&[1e300f64, 1e300]);
        let n = v.p_norm(2.0);
        assert!((n / (1e300 * 2f64.sqrt()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zeros_are_not_stored() {
        let mut v = SparseVector::from_coefficients(&[0.0f64, 2.0, 0.0]);
        assert_eq!(v.len(), 1);
        v.set(BigUint::from(2u32), 0.0);
        assert!(v.is_empty());
        assert_eq!(v.degree(), 0);
    }

    #[test]
    fn sub_cancels() {
        let v = SparseVector::from_coefficients(&[1.0f64, 2.0]);
        assert!(v.sub(&v).is_empty());
    }
}
