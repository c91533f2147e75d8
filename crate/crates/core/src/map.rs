//! Strictly increasing index maps `f: ℕ → ℕ` with `f(1) > 1`.
//!
//! Indices are arbitrary-precision: the doubling maps reach `m·2^ν` after `ν`
//! steps, which leaves `u64` long before the iteration counts used by the
//! criterion searches.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinate index. Coordinates are 1-based; zero is never a valid index.
pub type Index = BigUint;

/// Upper limit on memoized `f^n(m)` values per map.
const CACHE_CAPACITY: usize = 1 << 16;

/// The closed set of supported rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ShiftRule {
    /// `m ↦ m + offset`, `offset ≥ 1`. `offset = 1` is the backward shift.
    Affine { offset: u64 },
    /// `1 ↦ 4`, `2 ↦ 5`, otherwise `m ↦ 2m`.
    DoublingA,
    /// `2^r ↦ 2^{r+1}`, otherwise `m ↦ 2m + 1`.
    DoublingB,
    /// `f(m) = table[m-1]` for `m ≤ table.len()`, else `tail_scale·m + tail_offset`.
    TablePlusRule {
        table: Vec<u64>,
        tail_scale: u64,
        tail_offset: i64,
    },
}

impl ShiftRule {
    pub fn validate(&self) -> Result<()> {
        match self {
            ShiftRule::Affine { offset } => {
                if *offset == 0 {
                    return Err(Error::InvalidMap("affine offset must be at least 1".into()));
                }
            }
            ShiftRule::DoublingA | ShiftRule::DoublingB => {}
            ShiftRule::TablePlusRule {
                table,
                tail_scale,
                tail_offset,
            } => {
                if *tail_scale == 0 {
                    return Err(Error::InvalidMap("tail_scale must be at least 1".into()));
                }
                if let Some(first) = table.first() {
                    if *first <= 1 {
                        return Err(Error::InvalidMap("f(1) must exceed 1".into()));
                    }
                }
                for (i, w) in table.windows(2).enumerate() {
                    if w[1] <= w[0] {
                        return Err(Error::InvalidMap(format!(
                            "table not strictly increasing at m = {}",
                            i + 2
                        )));
                    }
                }
                // The tail must start above the table (or above 1 when the table is empty).
                let first_tail_m = table.len() as i128 + 1;
                let first_tail = *tail_scale as i128 * first_tail_m + *tail_offset as i128;
                let floor = table.last().map(|&v| v as i128).unwrap_or(1);
                if first_tail <= floor {
                    return Err(Error::InvalidMap(format!(
                        "tail rule gives f({first_tail_m}) = {first_tail}, not above {floor}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn is_table(&self) -> bool {
        matches!(self, ShiftRule::TablePlusRule { .. })
    }

    /// Length of the explicit table, zero for closed-form rules.
    pub fn table_len(&self) -> usize {
        match self {
            ShiftRule::TablePlusRule { table, .. } => table.len(),
            _ => 0,
        }
    }
}

fn is_power_of_two(m: &BigUint) -> bool {
    !m.is_zero() && m.count_ones() == 1
}

/// A validated index map with a memo of computed iterates.
///
/// Clones share the memo; entries are pure functions of the rule so concurrent
/// readers and writers always agree on values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ShiftRule", into = "ShiftRule")]
pub struct ShiftMap {
    rule: ShiftRule,
    cache: Arc<RwLock<HashMap<(u64, BigUint), BigUint>>>,
}

impl PartialEq for ShiftMap {
    fn eq(&self, other: &Self) -> bool {
        self.rule == other.rule
    }
}

impl Eq for ShiftMap {}

impl TryFrom<ShiftRule> for ShiftMap {
    type Error = Error;

    fn try_from(rule: ShiftRule) -> Result<Self> {
        ShiftMap::new(rule)
    }
}

impl From<ShiftMap> for ShiftRule {
    fn from(map: ShiftMap) -> Self {
        map.rule
    }
}

impl ShiftMap {
    pub fn new(rule: ShiftRule) -> Result<Self> {
        rule.validate()?;
        Ok(Self {
            rule,
            cache: Arc::default(),
        })
    }

    pub fn affine(offset: u64) -> Result<Self> {
        Self::new(ShiftRule::Affine { offset })
    }

    /// The backward shift map `m ↦ m + 1`.
    pub fn successor() -> Self {
        Self::new(ShiftRule::Affine { offset: 1 }).expect("offset 1 is valid")
    }

    pub fn example_a() -> Self {
        Self::new(ShiftRule::DoublingA).expect("closed rule")
    }

    pub fn example_b() -> Self {
        Self::new(ShiftRule::DoublingB).expect("closed rule")
    }

    pub fn rule(&self) -> &ShiftRule {
        &self.rule
    }

    pub fn is_successor(&self) -> bool {
        self.rule == ShiftRule::Affine { offset: 1 }
    }

    /// One application of the map.
    pub fn apply(&self, m: &BigUint) -> BigUint {
        debug_assert!(!m.is_zero(), "indices are 1-based");
        match &self.rule {
            ShiftRule::Affine { offset } => m + *offset,
            ShiftRule::DoublingA => match m.to_u64() {
                Some(1) => BigUint::from(4u32),
                Some(2) => BigUint::from(5u32),
                _ => m << 1,
            },
            ShiftRule::DoublingB => {
                if is_power_of_two(m) {
                    m << 1
                } else {
                    (m << 1) + 1u32
                }
            }
            ShiftRule::TablePlusRule {
                table,
                tail_scale,
                tail_offset,
            } => {
                if let Some(v) = m.to_usize().and_then(|i| table.get(i - 1)) {
                    return BigUint::from(*v);
                }
                let scaled = m * *tail_scale;
                if *tail_offset >= 0 {
                    scaled + tail_offset.unsigned_abs()
                } else {
                    // Validation guarantees the tail stays above the table, hence positive.
                    scaled - tail_offset.unsigned_abs()
                }
            }
        }
    }

    /// `f^n(m)`; `f^0` is the identity.
    pub fn iterate(&self, n: u64, m: &BigUint) -> BigUint {
        if n == 0 {
            return m.clone();
        }
        if n == 1 {
            return self.apply(m);
        }
        let key = (n, m.clone());
        if let Some(v) = self.cache.read().ok().and_then(|c| c.get(&key).cloned()) {
            return v;
        }
        let mut cur = m.clone();
        for _ in 0..n {
            cur = self.apply(&cur);
        }
        if let Ok(mut c) = self.cache.write() {
            if c.len() >= CACHE_CAPACITY {
                c.clear();
            }
            c.insert(key, cur.clone());
        }
        cur
    }

    /// `f^{-1}(j)` when `j ∈ f(ℕ)`.
    pub fn preimage(&self, j: &BigUint) -> Option<BigUint> {
        if j.is_zero() {
            return None;
        }
        match &self.rule {
            ShiftRule::Affine { offset } => (j > &BigUint::from(*offset)).then(|| j - *offset),
            ShiftRule::DoublingA => match j.to_u64() {
                Some(4) => Some(BigUint::one()),
                Some(5) => Some(BigUint::from(2u32)),
                _ => {
                    let (half, rem) = j.div_rem(&BigUint::from(2u32));
                    (rem.is_zero() && half >= BigUint::from(3u32)).then_some(half)
                }
            },
            ShiftRule::DoublingB => {
                let (half, rem) = j.div_rem(&BigUint::from(2u32));
                if half.is_zero() {
                    return None;
                }
                let pow = is_power_of_two(&half);
                if rem.is_zero() {
                    pow.then_some(half)
                } else {
                    (!pow).then_some(half)
                }
            }
            ShiftRule::TablePlusRule { .. } => self.preimage_by_bisection(j),
        }
    }

    /// Single-step inverse by monotone bisection over `[1, j]`.
    ///
    /// Valid for every rule since `f(m) ≥ m + 1`; closed-form rules use it
    /// only as a cross-check.
    pub fn preimage_by_bisection(&self, j: &BigUint) -> Option<BigUint> {
        if j <= &BigUint::one() {
            return None;
        }
        let mut lo = BigUint::one();
        let mut hi = j - 1u32;
        while lo <= hi {
            let mid: BigUint = (&lo + &hi) >> 1;
            let v = self.apply(&mid);
            match v.cmp(j) {
                std::cmp::Ordering::Equal => return Some(mid),
                std::cmp::Ordering::Less => lo = mid + 1u32,
                std::cmp::Ordering::Greater => {
                    if mid.is_one() {
                        return None;
                    }
                    hi = mid - 1u32;
                }
            }
        }
        None
    }

    /// `f^{-n}(j)`: `n` successive single-step inversions.
    pub fn inverse_iterate(&self, n: u64, j: &BigUint) -> Option<BigUint> {
        let mut cur = j.clone();
        for _ in 0..n {
            cur = self.preimage(&cur)?;
        }
        Some(cur)
    }

    /// `f^n([M])`, sorted ascending.
    pub fn image_prefix(&self, n: u64, m_count: u64) -> Vec<BigUint> {
        (1..=m_count)
            .map(|m| self.iterate(n, &BigUint::from(m)))
            .collect()
    }

    /// Whether `j ∈ f^n(ℕ \ [M])`.
    pub fn tail_membership(&self, n: u64, m_count: u64, j: &BigUint) -> bool {
        self.inverse_iterate(n, j)
            .is_some_and(|p| p > BigUint::from(m_count))
    }

    /// Whether the two maps are the same function.
    ///
    /// Closed-form rules are compared structurally. When a table rule is
    /// involved the maps are probed on `[1..depth]` with `depth` at least 64
    /// past the longest table.
    pub fn same_map(&self, other: &ShiftMap, probe_depth: u64) -> bool {
        if self.rule == other.rule {
            return true;
        }
        if !self.rule.is_table() && !other.rule.is_table() {
            return false;
        }
        let longest = self.rule.table_len().max(other.rule.table_len()) as u64;
        let depth = probe_depth.max(longest + 64);
        (1..=depth).all(|m| {
            let m = BigUint::from(m);
            self.apply(&m) == other.apply(&m)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn successor_iterate_and_inverse() {
        let f = ShiftMap::successor();
        assert_eq!(f.iterate(5, &b(3)), b(8));
        assert_eq!(f.inverse_iterate(4, &b(9)), Some(b(5)));
        assert_eq!(f.inverse_iterate(4, &b(4)), None);
        assert_eq!(f.iterate(0, &b(7)), b(7));
    }

    #[test]
    fn example_a_closed_forms() {
        let f = ShiftMap::example_a();
        for nu in 1..20u64 {
            assert_eq!(f.iterate(nu, &b(1)), b(1) << (nu + 1) as usize);
            assert_eq!(f.iterate(nu, &b(2)), b(5) << (nu - 1) as usize);
            for m in 3..40u64 {
                assert_eq!(f.iterate(nu, &b(m)), b(m) << nu as usize);
            }
        }
        assert_eq!(f.inverse_iterate(3, &b(16)), Some(b(1)));
        assert_eq!(f.iterate(3, &b(2)), b(20));
    }

    #[test]
    fn example_b_closed_forms() {
        let f = ShiftMap::example_b();
        for nu in 1..20u64 {
            for r in 0..10usize {
                assert_eq!(f.iterate(nu, &(b(1) << r)), b(1) << (nu as usize + r));
            }
            assert!(f.iterate(nu, &b(3)).is_odd());
        }
        assert_eq!(f.inverse_iterate(3, &b(16)), Some(b(2)));
        assert_eq!(f.preimage(&b(3)), None);
        assert_eq!(f.preimage(&b(5)), None);
        assert_eq!(f.preimage(&b(7)), Some(b(3)));
    }

    #[test]
    fn image_prefix_examples() {
        assert_eq!(
            ShiftMap::successor().image_prefix(3, 4),
            vec![b(4), b(5), b(6), b(7)]
        );
        assert_eq!(
            ShiftMap::example_a().image_prefix(2, 3),
            vec![b(8), b(10), b(12)]
        );
        assert_eq!(ShiftMap::example_b().image_prefix(0, 2), vec![b(1), b(2)]);
    }

    #[test]
    fn tail_membership_examples() {
        let f = ShiftMap::successor();
        assert!(f.tail_membership(3, 4, &b(9)));
        assert!(!f.tail_membership(3, 4, &b(5)));
        assert!(ShiftMap::example_b().tail_membership(2, 2, &b(16)));
    }

    #[test]
    fn table_rule_validation() {
        let bad = ShiftRule::TablePlusRule {
            table: vec![1, 3],
            tail_scale: 1,
            tail_offset: 2,
        };
        assert!(ShiftMap::new(bad).is_err());
        let bad_tail = ShiftRule::TablePlusRule {
            table: vec![3, 9],
            tail_scale: 1,
            tail_offset: 2,
        };
        assert!(ShiftMap::new(bad_tail).is_err());
        let ok = ShiftRule::TablePlusRule {
            table: vec![3, 9],
            tail_scale: 2,
            tail_offset: 5,
        };
        let f = ShiftMap::new(ok).unwrap();
        assert_eq!(f.apply(&b(3)), b(11));
        assert_eq!(f.preimage(&b(9)), Some(b(2)));
        assert_eq!(f.preimage(&b(10)), None);
        assert!(ShiftMap::affine(0).is_err());
    }

    #[test]
    fn closed_inverses_match_bisection() {
        for f in [
            ShiftMap::successor(),
            ShiftMap::affine(3).unwrap(),
            ShiftMap::example_a(),
            ShiftMap::example_b(),
        ] {
            for j in 1..300u64 {
                assert_eq!(f.preimage(&b(j)), f.preimage_by_bisection(&b(j)), "{:?} j={j}", f.rule());
            }
        }
    }

    #[test]
    fn same_map_detects_table_aliases() {
        let table_succ = ShiftMap::new(ShiftRule::TablePlusRule {
            table: vec![2, 3, 4],
            tail_scale: 1,
            tail_offset: 1,
        })
        .unwrap();
        assert!(table_succ.same_map(&ShiftMap::successor(), 1));
        assert!(!ShiftMap::example_a().same_map(&ShiftMap::example_b(), 1));
        assert!(!ShiftMap::successor().same_map(&ShiftMap::example_b(), 1));
    }

    #[test]
    fn serde_uses_rule_form() {
        let f = ShiftMap::affine(2).unwrap();
        let s = toml::to_string(&f).unwrap();
        assert!(s.contains("kind = \"affine\""));
        let back: ShiftMap = toml::from_str(&s).unwrap();
        assert_eq!(back, f);
        let err = toml::from_str::<ShiftMap>("kind = \"affine\"\noffset = 0\n");
        assert!(err.is_err());
    }
}
