//! Seeded random instances for sweeps and self-tests.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::map::{ShiftMap, ShiftRule};
use crate::operator::PseudoShift;
use crate::sparse::SparseVector;
use crate::weights::WeightRule;

/// Strictly increasing table with `f(1) > 1` followed by an affine or doubling tail.
pub fn table_rule<R: Rng>(rng: &mut R) -> ShiftRule {
    let len = rng.gen_range(0..=4usize);
    let mut table = Vec::with_capacity(len);
    let mut last = 1u64;
    for m in 1..=len as u64 {
        last = last.max(m) + rng.gen_range(1..=3);
        table.push(last);
    }
    let tail_scale = rng.gen_range(1..=2u64);
    let first = len as i64 + 1;
    // smallest offset keeping f(len+1) above the table
    let floor = last as i64 + 1 - tail_scale as i64 * first;
    let tail_offset = floor.max(1 - (tail_scale as i64 - 1) * first) + rng.gen_range(0..=2);
    ShiftRule::TablePlusRule {
        table,
        tail_scale,
        tail_offset,
    }
}

/// `affine(r ≤ 3)`, the two doubling maps, or a table-plus-rule map.
pub fn shift_map<R: Rng>(rng: &mut R) -> ShiftMap {
    let rule = match rng.gen_range(0..4) {
        0 => ShiftRule::Affine {
            offset: rng.gen_range(1..=3),
        },
        1 => ShiftRule::DoublingA,
        2 => ShiftRule::DoublingB,
        _ => table_rule(rng),
    };
    ShiftMap::new(rule).expect("sampled rules are valid")
}

/// A weight in `±[1/4, 4]`, quantized to sixteenths.
pub fn weight<R: Rng>(rng: &mut R) -> f64 {
    let v = rng.gen_range(4..=64) as f64 / 16.0;
    if rng.gen_bool(0.2) {
        -v
    } else {
        v
    }
}

/// Constant or table weights with values from [`weight`].
pub fn weight_rule<R: Rng>(rng: &mut R, support: u64) -> WeightRule<f64> {
    if rng.gen_bool(0.3) {
        return WeightRule::constant(weight(rng)).expect("nonzero");
    }
    let entries: BTreeMap<u64, f64> = (2..=support.max(2)).map(|m| (m, weight(rng))).collect();
    WeightRule::table(entries, weight(rng)).expect("nonzero")
}

pub fn operator<R: Rng>(rng: &mut R, support: u64) -> PseudoShift<f64> {
    PseudoShift::new(shift_map(rng), weight_rule(rng, support)).expect("valid parts")
}

/// Weighted backward shift with sampled weights.
pub fn weighted_shift<R: Rng>(rng: &mut R, support: u64) -> PseudoShift<f64> {
    PseudoShift::weighted_shift(weight_rule(rng, support)).expect("valid parts")
}

/// Nonzero rational `p/q`, `|p| ≤ 8`, `1 ≤ q ≤ 4`.
pub fn rational<R: Rng>(rng: &mut R) -> f64 {
    let p = *[-8, -5, -3, -2, -1, 1, 2, 3, 5, 7, 8].choose(rng).expect("nonempty") as f64;
    p / rng.gen_range(1..=4) as f64
}

/// Target with every coefficient on `[M]` a nonzero rational.
pub fn full_target<R: Rng>(rng: &mut R, m_count: u64) -> SparseVector<f64> {
    let coeffs: Vec<f64> = (0..m_count).map(|_| rational(rng)).collect();
    SparseVector::from_coefficients(&coeffs)
}

/// Sparse vector on `[d]` with roughly half the coordinates set.
pub fn sparse_vector<R: Rng>(rng: &mut R, d: u64) -> SparseVector<f64> {
    let coeffs: Vec<f64> = (0..d)
        .map(|_| if rng.gen_bool(0.5) { rng.gen_range(-4.0..4.0) } else { 0.0 })
        .collect();
    SparseVector::from_coefficients(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_maps_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            table_rule(&mut rng).validate().unwrap();
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = operator(&mut ChaCha8Rng::seed_from_u64(3), 8);
        let b = operator(&mut ChaCha8Rng::seed_from_u64(3), 8);
        assert_eq!(a, b);
    }
}
