//! Bounded nonzero weight sequences `m ↦ w_m`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Float, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Rule-based weight sequence. Every variant is validated to be nonzero.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule<S: Scalar> {
    /// `w_m = value` for every `m`.
    Constant(S),
    /// `w_m = underlying_r` when `m = 2^r` (`r ≥ 0`), else `beta`.
    PowersOfTwo {
        underlying: Box<WeightRule<S>>,
        beta: S,
    },
    /// Explicit entries with a default for every other index.
    Table { entries: BTreeMap<u64, S>, default: S },
    /// `w_m = base_{m-span+1} ··· base_m`: the weights of `B^span` viewed as a
    /// pseudo-shift over `m ↦ m + span`.
    BlockProduct {
        base: Box<WeightRule<S>>,
        span: u64,
    },
}

impl<S: Scalar> WeightRule<S> {
    pub fn constant(value: S) -> Result<Self> {
        let rule = WeightRule::Constant(value);
        rule.validate()?;
        Ok(rule)
    }

    pub fn table(entries: BTreeMap<u64, S>, default: S) -> Result<Self> {
        let rule = WeightRule::Table { entries, default };
        rule.validate()?;
        Ok(rule)
    }

    pub fn powers_of_two(underlying: WeightRule<S>, beta: S) -> Result<Self> {
        let rule = WeightRule::PowersOfTwo {
            underlying: Box::new(underlying),
            beta,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |v: S, what: &str| {
            if v.is_zero_scalar() {
                Err(Error::InvalidWeights(format!("{what} must be nonzero")))
            } else if !v.is_finite_scalar() {
                Err(Error::InvalidWeights(format!("{what} must be finite")))
            } else {
                Ok(())
            }
        };
        match self {
            WeightRule::Constant(v) => check(*v, "constant weight"),
            WeightRule::PowersOfTwo { underlying, beta } => {
                check(*beta, "beta")?;
                underlying.validate()
            }
            WeightRule::Table { entries, default } => {
                check(*default, "default weight")?;
                for (m, v) in entries {
                    check(*v, &format!("weight w_{m}"))?;
                }
                Ok(())
            }
            WeightRule::BlockProduct { base, span } => {
                if *span == 0 {
                    return Err(Error::InvalidWeights("block span must be at least 1".into()));
                }
                base.validate()
            }
        }
    }

    /// `w_m`. Index 0 is accepted so that `PowersOfTwo` can read `underlying_0`.
    pub fn weight(&self, m: &BigUint) -> S {
        match self {
            WeightRule::Constant(v) => *v,
            WeightRule::PowersOfTwo { underlying, beta } => {
                if !m.is_zero() && m.count_ones() == 1 {
                    underlying.weight(&BigUint::from(m.bits() - 1))
                } else {
                    *beta
                }
            }
            WeightRule::Table { entries, default } => m
                .to_u64()
                .and_then(|k| entries.get(&k).copied())
                .unwrap_or(*default),
            WeightRule::BlockProduct { base, span } => {
                let mut acc = S::one();
                let mut idx = m.clone();
                for _ in 0..*span {
                    if idx.is_zero() {
                        break;
                    }
                    acc = acc * base.weight(&idx);
                    idx -= 1u32;
                }
                acc
            }
        }
    }

    pub fn weight_at(&self, m: u64) -> S {
        self.weight(&BigUint::from(m))
    }

    /// `sup_m |w_m|` over the rule.
    pub fn bound(&self) -> S::Real {
        match self {
            WeightRule::Constant(v) => v.modulus(),
            WeightRule::PowersOfTwo { underlying, beta } => beta.modulus().max(underlying.bound()),
            WeightRule::Table { entries, default } => entries
                .values()
                .map(|v| v.modulus())
                .fold(default.modulus(), Float::max),
            WeightRule::BlockProduct { base, span } => {
                base.bound().powi(i32::try_from(*span).unwrap_or(i32::MAX))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_rejected() {
        assert!(WeightRule::constant(0.0f64).is_err());
        let mut e = BTreeMap::new();
        e.insert(3, 0.0f64);
        let err = WeightRule::table(e, 1.0).unwrap_err();
        assert!(err.to_string().contains("w_3"));
    }

    #[test]
    fn powers_of_two_override() {
        let mut e = BTreeMap::new();
        e.insert(2, 1.5f64);
        let under = WeightRule::table(e, 2.0).unwrap();
        let w = WeightRule::powers_of_two(under, 2.0).unwrap();
        assert_eq!(w.weight_at(4), 1.5); // 4 = 2^2
        assert_eq!(w.weight_at(8), 2.0);
        assert_eq!(w.weight_at(12), 2.0);
        assert_eq!(w.bound(), 2.0);
    }

    #[test]
    fn block_product() {
        let mut e = BTreeMap::new();
        e.insert(5, 3.0f64);
        e.insert(6, 7.0);
        let base = WeightRule::table(e, 1.0).unwrap();
        let w = WeightRule::BlockProduct {
            base: Box::new(base),
            span: 2,
        };
        assert_eq!(w.weight_at(6), 21.0);
        assert_eq!(w.weight_at(7), 7.0);
    }
}
