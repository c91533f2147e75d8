//! The unilateral pseudo-shift `T_{f,ω}` and its powers.
//!
//! `T(Σ α_m e_m) = Σ w_{f(m)} α_{f(m)} e_m`, and
//! `T^n(Σ α_m e_m) = Σ α_{f^n(m)} W_{m,n} e_m` with
//! `W_{m,n} = Π_{ν=1..n} w_{f^ν(m)}`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::log_scalar::LogScalar;
use crate::map::{Index, ShiftMap};
use crate::scalar::Scalar;
use crate::sparse::SparseVector;
use crate::weights::WeightRule;

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoShift<S: Scalar> {
    map: ShiftMap,
    weights: WeightRule<S>,
}

impl<S: Scalar> PseudoShift<S> {
    pub fn new(map: ShiftMap, weights: WeightRule<S>) -> Result<Self> {
        weights.validate()?;
        Ok(Self { map, weights })
    }

    /// Weighted backward shift: `f(m) = m + 1`.
    pub fn weighted_shift(weights: WeightRule<S>) -> Result<Self> {
        Self::new(ShiftMap::successor(), weights)
    }

    /// `λB`, the constant-weight backward shift.
    pub fn rolewicz(lambda: S) -> Result<Self> {
        Self::weighted_shift(WeightRule::constant(lambda)?)
    }

    pub fn map(&self) -> &ShiftMap {
        &self.map
    }

    pub fn weights(&self) -> &WeightRule<S> {
        &self.weights
    }

    pub fn is_weighted_shift(&self) -> bool {
        self.map.is_successor()
    }

    /// Upper bound for `‖T‖ = sup_m |w_{f(m)}|`; exact when the rule attains its bound on `f(ℕ)`.
    pub fn norm_bound(&self) -> S::Real {
        self.weights.bound()
    }

    pub fn weight(&self, j: &BigUint) -> S {
        self.weights.weight(j)
    }

    /// `W_{m,n}` in log form; `W_{m,0} = 1`.
    pub fn weight_product(&self, m: &BigUint, n: u64) -> LogScalar<S> {
        let mut acc = LogScalar::one();
        let mut cur = m.clone();
        for _ in 0..n {
            cur = self.map.apply(&cur);
            acc = acc * self.log_weight(&cur);
        }
        acc
    }

    pub fn weight_product_at(&self, m: u64, n: u64) -> LogScalar<S> {
        self.weight_product(&BigUint::from(m), n)
    }

    fn log_weight(&self, j: &BigUint) -> LogScalar<S> {
        LogScalar::from_scalar(self.weights.weight(j)).expect("weights are validated nonzero")
    }

    /// One application of `T`.
    pub fn apply(&self, x: &SparseVector<S>) -> SparseVector<S> {
        SparseVector::from_pairs(x.iter().filter_map(|(j, a)| {
            self.map
                .preimage(j)
                .map(|m| (m, self.weights.weight(j) * *a))
        }))
    }

    /// `T^n x`, computed coordinatewise through `f^{-n}` and `W_{m,n}`.
    pub fn apply_power(&self, n: u64, x: &SparseVector<S>) -> SparseVector<S> {
        SparseVector::from_pairs(x.iter().filter_map(|(j, a)| {
            self.map
                .inverse_iterate(n, j)
                .map(|m| {
                    let w = self.weight_product(&m, n).to_scalar();
                    (m, w * *a)
                })
        }))
    }

    /// `T^n e_j`: `W_{f^{-n}(j),n} e_{f^{-n}(j)}` or zero.
    pub fn power_on_basis(&self, n: u64, j: &Index) -> Option<(Index, LogScalar<S>)> {
        let m = self.map.inverse_iterate(n, j)?;
        let w = self.weight_product(&m, n);
        Some((m, w))
    }
}

/// `B^r` for the weighted backward shift with the given weights, as the
/// pseudo-shift over `m ↦ m + r` with `w̃_{m+r} = w_{m+1}···w_{m+r}`.
pub fn power_as_pseudoshift<S: Scalar>(weights: &WeightRule<S>, r: u64) -> Result<PseudoShift<S>> {
    if r == 0 {
        return Err(Error::InvalidArgument("power r must be at least 1".into()));
    }
    let map = ShiftMap::affine(r)?;
    let converted = match (weights, r) {
        (w, 1) => w.clone(),
        (WeightRule::Constant(c), _) => {
            let mut acc = S::one();
            for _ in 0..r {
                acc = acc * *c;
            }
            WeightRule::constant(acc)?
        }
        (w, _) => WeightRule::BlockProduct {
            base: Box::new(w.clone()),
            span: r,
        },
    };
    PseudoShift::new(map, converted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn backward_shift_apply() {
        let t = PseudoShift::rolewicz(2.0f64).unwrap();
        let y = t.apply(&SparseVector::basis(5));
        assert_eq!(y, SparseVector::basis(4).scale(2.0));
        assert!(t.apply(&SparseVector::basis(1)).is_empty());
    }

    #[test]
    fn example_a_apply_pulls_from_four() {
        let mut e = BTreeMap::new();
        e.insert(4, 3.0f64);
        let t = PseudoShift::new(ShiftMap::example_a(), WeightRule::table(e, 1.0).unwrap()).unwrap();
        assert_eq!(t.apply(&SparseVector::basis(4)), SparseVector::basis(1).scale(3.0));
    }

    #[test]
    fn apply_power_backward_shift() {
        let t = PseudoShift::rolewicz(2.0f64).unwrap();
        let y = t.apply_power(3, &SparseVector::basis(8));
        assert!((y.get_at(5) - 8.0).abs() < 1e-13);
        assert_eq!(y.len(), 1);
        // support inside [n] is annihilated
        let x = SparseVector::from_coefficients(&[1.0, 2.0, 3.0]);
        assert!(t.apply_power(3, &x).is_empty());
    }

    #[test]
    fn weight_product_constant() {
        let t = PseudoShift::rolewicz(2.0f64).unwrap();
        let w = t.weight_product_at(1, 10);
        assert!((w.log_magnitude() - 10.0 * 2f64.ln()).abs() < 1e-13);
        assert_eq!(w.phase(), 1.0);
        assert_eq!(t.weight_product_at(7, 0), LogScalar::one());
    }

    #[test]
    fn constant_power_conversion() {
        let w = WeightRule::constant(2.0f64).unwrap();
        let t = power_as_pseudoshift(&w, 3).unwrap();
        assert_eq!(t.weights(), &WeightRule::Constant(8.0));
        assert_eq!(t.map(), &ShiftMap::affine(3).unwrap());
        let same = power_as_pseudoshift(&w, 1).unwrap();
        assert!(same.is_weighted_shift());
    }

    #[test]
    fn table_power_conversion_matches_composition() {
        let mut e = BTreeMap::new();
        e.insert(5, 3.0f64);
        e.insert(6, 5.0);
        let w = WeightRule::table(e, 1.5).unwrap();
        let t = power_as_pseudoshift(&w, 2).unwrap();
        let b = PseudoShift::weighted_shift(w).unwrap();
        let x = SparseVector::basis(6);
        assert_eq!(t.apply(&x).get_at(4), 15.0);
        assert_eq!(b.apply_power(2, &x).get_at(4), 15.0);
    }
}
