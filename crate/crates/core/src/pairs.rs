//! Overlaps between image prefixes of different operators.
//!
//! Every criterion condition quantifies over `j ∈ f_ℓ^n([M])` and splits on
//! whether `j` lands in `f_i^n([M])` (an image overlap) or in
//! `f_i^n(ℕ \ [M])` (a tail overlap). This module enumerates those points
//! once, in a fixed order, together with the two weight products involved.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::log_scalar::LogScalar;
use crate::map::Index;
use crate::operator::PseudoShift;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// `j ∈ f_ℓ^n([M]) ∩ f_i^n([M])`
    Overlap,
    /// `j ∈ f_ℓ^n([M]) ∩ f_i^n(ℕ \ [M])`
    Tail,
}

/// One `j` shared by the images of operators `i` and `ℓ` (0-based).
#[derive(Debug, Clone)]
pub struct PairPoint<S: Scalar> {
    pub i: usize,
    pub l: usize,
    pub j: Index,
    /// `f_i^{-n}(j)`
    pub pre_i: Index,
    /// `f_ℓ^{-n}(j)`, always in `[M]`.
    pub pre_l: u64,
    pub membership: Membership,
    /// `W^{(i)}_{f_i^{-n}(j),n} / W^{(ℓ)}_{f_ℓ^{-n}(j),n}`
    pub ratio: LogScalar<S>,
}

/// All points shared between ordered pairs `i ≠ ℓ`, iterated as
/// `i`, then `ℓ`, then `f_ℓ^{-n}(j)` ascending.
pub fn pair_points<S: Scalar>(ts: &[PseudoShift<S>], n: u64, m_count: u64) -> Vec<PairPoint<S>> {
    let bound = BigUint::from(m_count);
    let mut products: Vec<HashMap<Index, LogScalar<S>>> = vec![HashMap::new(); ts.len()];
    let mut product = |op: usize, m: &Index| -> LogScalar<S> {
        *products[op]
            .entry(m.clone())
            .or_insert_with(|| ts[op].weight_product(m, n))
    };
    let images: Vec<Vec<Index>> = ts.iter().map(|t| t.map().image_prefix(n, m_count)).collect();

    let mut out = Vec::new();
    for (i, ti) in ts.iter().enumerate() {
        for (l, image) in images.iter().enumerate() {
            if i == l {
                continue;
            }
            for (idx, j) in image.iter().enumerate() {
                let Some(pre_i) = ti.map().inverse_iterate(n, j) else {
                    continue;
                };
                let pre_l = idx as u64 + 1;
                let membership = if pre_i <= bound {
                    Membership::Overlap
                } else {
                    Membership::Tail
                };
                let ratio = product(i, &pre_i) / product(l, &BigUint::from(pre_l));
                out.push(PairPoint {
                    i,
                    l,
                    j: j.clone(),
                    pre_i,
                    pre_l,
                    membership,
                    ratio,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::ShiftMap;
    use crate::weights::WeightRule;

    #[test]
    fn identical_shifts_overlap_on_shifted_prefix() {
        let t = PseudoShift::rolewicz(2.0f64).unwrap();
        let pts = pair_points(&[t.clone(), t], 5, 3);
        assert_eq!(pts.len(), 6);
        assert!(pts.iter().all(|p| p.membership == Membership::Overlap));
        let js: Vec<u64> = pts[..3].iter().map(|p| p.j.to_u64_digits()[0]).collect();
        assert_eq!(js, vec![6, 7, 8]);
    }

    #[test]
    fn example_pair_has_no_tail_points() {
        let w = WeightRule::constant(2.0f64).unwrap();
        let t1 = PseudoShift::new(ShiftMap::example_a(), w.clone()).unwrap();
        let t2 = PseudoShift::new(ShiftMap::example_b(), w).unwrap();
        for n in 2..8 {
            for m in 2..20 {
                let pts = pair_points(&[t1.clone(), t2.clone()], n, m);
                assert!(pts.iter().all(|p| p.membership == Membership::Overlap));
            }
        }
    }

    #[test]
    fn example_pair_single_coordinate_has_tail() {
        let w = WeightRule::constant(2.0f64).unwrap();
        let t1 = PseudoShift::new(ShiftMap::example_a(), w.clone()).unwrap();
        let t2 = PseudoShift::new(ShiftMap::example_b(), w).unwrap();
        // f_1^2(1) = 8 = f_2^2(2) with 2 outside [1]
        let pts = pair_points(&[t1, t2], 2, 1);
        let tail: Vec<_> = pts.iter().filter(|p| p.membership == Membership::Tail).collect();
        assert_eq!(tail.len(), 1);
        assert_eq!((tail[0].i, tail[0].l), (1, 0));
        assert_eq!(tail[0].pre_i, BigUint::from(2u32));
    }
}
