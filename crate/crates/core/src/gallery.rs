//! Reproducible instances: the doubling-map pair that is s-hypercyclic without
//! satisfying the s-Hypercyclicity Criterion, the weighted-shift pair whose
//! direct sum is hypercyclic while the pair is not s-hypercyclic, and the
//! Rolewicz shifts `λB`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Float, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::config::TupleSpec;
use crate::criteria::{check_divergence, salas_direct_sum, ConditionId, CriterionCertificate, SalasReport};
use crate::error::{Error, Result};
use crate::log_scalar::LogScalar;
use crate::map::{Index, ShiftMap};
use crate::operator::PseudoShift;
use crate::scalar::{Real, Scalar};
use crate::weights::WeightRule;

/// `f_1` (`1 ↦ 4`, `2 ↦ 5`, else `m ↦ 2m`) and `f_2` (`2^r ↦ 2^{r+1}`, else `m ↦ 2m + 1`).
pub fn example_maps() -> (ShiftMap, ShiftMap) {
    (ShiftMap::example_a(), ShiftMap::example_b())
}

/// `w_m = w̃_r` when `m = 2^r`, else `β`, for each underlying sequence `w̃`.
///
/// A constant underlying sequence equal to `β` yields the constant rule `β`.
pub fn example_weights<S: Scalar>(
    underlying: (&WeightRule<S>, &WeightRule<S>),
    beta: S,
) -> Result<(WeightRule<S>, WeightRule<S>)> {
    let b = beta.modulus();
    if !(b > S::Real::one()) {
        return Err(Error::InvalidArgument("beta must exceed 1 in modulus".into()));
    }
    let build = |u: &WeightRule<S>, which: usize| -> Result<WeightRule<S>> {
        u.validate()?;
        if u.bound() > b {
            return Err(Error::InvalidWeights(format!(
                "underlying sequence {which} exceeds beta: sup |w| = {}",
                u.bound()
            )));
        }
        if *u == WeightRule::Constant(beta) {
            return Ok(WeightRule::Constant(beta));
        }
        WeightRule::powers_of_two(u.clone(), beta)
    };
    Ok((build(underlying.0, 1)?, build(underlying.1, 2)?))
}

/// The example operators `T_1 = T_{f_1, w^{(1)}}`, `T_2 = T_{f_2, w^{(2)}}`.
pub fn example_operators<S: Scalar>(
    underlying: (&WeightRule<S>, &WeightRule<S>),
    beta: S,
) -> Result<Vec<PseudoShift<S>>> {
    let (w1, w2) = example_weights(underlying, beta)?;
    let (f1, f2) = example_maps();
    Ok(vec![PseudoShift::new(f1, w1)?, PseudoShift::new(f2, w2)?])
}

fn power_of_two_exponent(m: &BigUint) -> Option<u64> {
    (!m.is_zero() && m.count_ones() == 1).then(|| m.bits() - 1)
}

/// `W^{(which)}_{m,n}` of the example operators from the closed forms:
/// `Π w̃_{ν+r}` along powers of two, `β^n` otherwise.
pub fn closed_form_w<S: Scalar>(
    which: usize,
    m: &Index,
    n: u64,
    underlying: &WeightRule<S>,
    beta: S,
) -> Result<LogScalar<S>> {
    let offset = match (which, power_of_two_exponent(m)) {
        (1, Some(0)) => Some(1),
        (1, Some(1)) => None,
        (1, r) | (2, r) => r,
        _ => return Err(Error::InvalidArgument(format!("operator must be 1 or 2, got {which}"))),
    };
    let log = |v: S| LogScalar::from_scalar(v).expect("weights are nonzero");
    Ok(match offset {
        Some(r) => (1..=n).fold(LogScalar::one(), |acc, nu| acc * log(underlying.weight_at(nu + r))),
        None => log(beta).powi(n),
    })
}

/// `j = 2^{n+1}` lies in both image prefixes but `f_1^{-n}(j) = 1 ≠ 2 = f_2^{-n}(j)`.
pub fn shc_failure_witness(n: u64, m_count: u64) -> Result<(Index, (Index, Index))> {
    if n < 2 || m_count < 2 {
        return Err(Error::InvalidArgument("need n ≥ 2 and M ≥ 2".into()));
    }
    let (f1, f2) = example_maps();
    let j = BigUint::one() << (n + 1);
    let p1 = f1.inverse_iterate(n, &j).expect("2^{n+1} = f_1^n(1)");
    let p2 = f2.inverse_iterate(n, &j).expect("2^{n+1} = f_2^n(2)");
    let bound = BigUint::from(m_count);
    assert!(p1 <= bound && p2 <= bound);
    Ok((j, (p1, p2)))
}

/// `f_1^n([M]) ∩ f_2^n([M])`, by enumeration.
pub fn example_overlap(n: u64, m_count: u64) -> Vec<Index> {
    let (f1, f2) = example_maps();
    let a: std::collections::BTreeSet<Index> = f1.image_prefix(n, m_count).into_iter().collect();
    f2.image_prefix(n, m_count)
        .into_iter()
        .filter(|j| a.contains(j))
        .collect()
}

/// `{2^{n+1}, …, 2^{n+r_M}}` with `2^{r_M} ≤ M < 2^{r_M+1}`.
pub fn example_overlap_closed_form(n: u64, m_count: u64) -> Vec<Index> {
    let r_m = 63 - m_count.leading_zeros() as u64;
    (1..=r_m).map(|r| BigUint::one() << (n + r)).collect()
}

/// A fixed enumeration of nonzero rationals (Gaussian rationals for complex fields).
pub fn default_targets<S: Scalar>(count: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(count);
    let mut h: i64 = 2;
    while out.len() < count {
        for q in 1..h {
            let s = h - q;
            if S::IS_COMPLEX {
                for a in -s..=s {
                    let rest = s - a.abs();
                    for b in if rest == 0 { vec![0] } else { vec![rest, -rest] } {
                        if let Some(v) = S::from_parts(a as f64 / q as f64, b as f64 / q as f64) {
                            if !v.is_zero_scalar() {
                                out.push(v);
                            }
                        }
                    }
                }
            } else if num_integer::gcd(s, q) == 1 {
                let v = s as f64 / q as f64;
                out.extend(S::from_parts(v, 0.0));
                out.extend(S::from_parts(-v, 0.0));
            }
        }
        h += 1;
    }
    out.truncate(count);
    out
}

/// Row of the post-hoc verification of a constructed pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCheckRow {
    pub k: u64,
    pub n_k: u64,
    /// `n_k ln β − ln k`
    pub beta_margin_log: f64,
    /// `min_{i, r ≤ k} ln|Π_{ν=1}^{n_k} w̃^{(i)}_{ν+r}| − ln k`
    pub growth_margin_log: f64,
    /// `|Π w̃^{(1)}_{ν+1}/w̃^{(2)}_{ν+1} − γ_k|`
    pub ratio_gap: f64,
    /// `|Π w̃^{(2)}_{ν+1}/w̃^{(1)}_{ν+1} − 1/γ_k|`
    pub reciprocal_gap: f64,
    /// `max_{2 ≤ r ≤ k}` of both `|ratio − 1|`
    pub unit_gap: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DhcPair<S: Scalar> {
    pub underlying: (WeightRule<S>, WeightRule<S>),
    pub beta: S,
    pub nks: Vec<u64>,
    pub targets: Vec<S>,
    /// Length of the equal-weight stretch that opens each block.
    pub stretch: u64,
    pub checks: Vec<PairCheckRow>,
}

impl<S: Scalar> DhcPair<S> {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// The example operators assembled over this pair.
    pub fn operators(&self) -> Result<Vec<PseudoShift<S>>> {
        example_operators((&self.underlying.0, &self.underlying.1), self.beta)
    }
}

/// Builds underlying weight sequences `w̃^{(1)}, w̃^{(2)}` bounded by `β` and
/// a sequence `(n_k)`, `k ≤ k_max`, with
///
/// * `β^{n_k} > k` and `|Π_{ν=1}^{n_k} w̃^{(i)}_{ν+r}| > k` for `r ≤ k`;
/// * `Π_{ν=1}^{n_k} w̃^{(1)}_{ν+1}/w̃^{(2)}_{ν+1}` within `1/k` of `γ_k`, the reverse within `1/k` of `1/γ_k`;
/// * the same ratios at `2 ≤ r ≤ k` within `1/k` of `1`.
///
/// Each block is an equal-weight stretch followed by `L` positions whose
/// quotients multiply to `γ_k`; `n_k + 1` is the last of them, and position
/// `n_k + 2` carries the quotient `1/γ_k`. Targets are cycled when fewer than
/// `k_max` are supplied; an empty list uses [`default_targets`].
pub fn construct_dhc_weighted_pair<S: Scalar>(
    beta: S::Real,
    targets: &[S],
    k_max: u64,
) -> Result<DhcPair<S>> {
    if !(beta > S::Real::one()) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("beta must exceed 1, got {beta}")));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if let Some(i) = targets.iter().position(|g| g.is_zero_scalar() || !g.is_finite_scalar()) {
        return Err(Error::InvalidArgument(format!("target γ_{} must be nonzero", i + 1)));
    }
    let gammas: Vec<S> = if targets.is_empty() {
        default_targets(k_max as usize)
    } else {
        (0..k_max as usize).map(|k| targets[k % targets.len()]).collect()
    };

    let mut stretch = k_max.max(8);
    loop {
        let pair = lay_out(beta, &gammas, k_max, stretch)?;
        if pair.verified() {
            return Ok(pair);
        }
        let failing = pair.checks.iter().find(|c| !c.pass).expect("some row fails");
        let divergence_only = failing.ratio_gap < 1.0 / failing.k as f64
            && failing.reciprocal_gap < 1.0 / failing.k as f64
            && failing.unit_gap < 1.0 / failing.k as f64;
        if !divergence_only || stretch > 1 << 20 {
            return Err(Error::Construction(describe_failure(failing)));
        }
        stretch *= 2;
    }
}

fn describe_failure(row: &PairCheckRow) -> String {
    let bound = 1.0 / row.k as f64;
    if row.beta_margin_log <= 0.0 {
        format!("k = {}: β^(n_k) > k fails at n_k = {}", row.k, row.n_k)
    } else if row.growth_margin_log <= 0.0 {
        format!("k = {}: |Π w̃_(ν+r)| > k fails at n_k = {}", row.k, row.n_k)
    } else if row.ratio_gap >= bound {
        format!("k = {}: ratio gap {} ≥ 1/k", row.k, row.ratio_gap)
    } else if row.reciprocal_gap >= bound {
        format!("k = {}: reciprocal gap {} ≥ 1/k", row.k, row.reciprocal_gap)
    } else {
        format!("k = {}: unit gap {} ≥ 1/k", row.k, row.unit_gap)
    }
}

fn lay_out<S: Scalar>(beta: S::Real, gammas: &[S], k_max: u64, stretch: u64) -> Result<DhcPair<S>> {
    let b = S::from_real(beta);
    let half_log = beta.ln() / S::Real::from_f64_lossy(2.0);
    let mut w1: BTreeMap<u64, S> = BTreeMap::new();
    let mut w2: BTreeMap<u64, S> = BTreeMap::new();
    // Writes quotient `q = w1/w2` at `m` keeping both weights at most β in modulus.
    let mut put = |m: u64, q: S| {
        let mag = q.modulus();
        let phase = q.unit();
        if mag <= S::Real::one() {
            w1.insert(m, b.scale(mag) * phase);
            w2.insert(m, b);
        } else {
            w1.insert(m, b * phase);
            w2.insert(m, b.scale(mag.recip()));
        }
    };

    let mut cursor = k_max + 2;
    let mut nks = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let log_mag = gamma.modulus().ln();
        let steps = (log_mag.abs() / half_log).ceil().to_u64().unwrap_or(1).max(1);
        let step_mag = (log_mag / S::Real::from_f64_lossy(steps as f64)).exp();
        let start = cursor + stretch;
        for s in 0..steps {
            let q = if s == 0 {
                gamma.unit().scale(step_mag)
            } else {
                S::from_real(step_mag)
            };
            put(start + s, q);
        }
        let last = start + steps - 1;
        let n_k = last - 1;
        put(last + 1, S::one() / gamma);
        nks.push(n_k);
        cursor = last + 2;
    }

    let u1 = WeightRule::table(w1, b)?;
    let u2 = WeightRule::table(w2, b)?;
    let checks = verify_pair(&u1, &u2, beta, gammas, &nks);
    Ok(DhcPair {
        underlying: (u1, u2),
        beta: b,
        nks,
        targets: gammas.to_vec(),
        stretch,
        checks,
    })
}

fn verify_pair<S: Scalar>(
    u1: &WeightRule<S>,
    u2: &WeightRule<S>,
    beta: S::Real,
    gammas: &[S],
    nks: &[u64],
) -> Vec<PairCheckRow> {
    let s1 = PseudoShift::weighted_shift(u1.clone()).expect("validated");
    let s2 = PseudoShift::weighted_shift(u2.clone()).expect("validated");
    let gap = |v: LogScalar<S>, target: S| {
        v.distance_to(target).map_or(f64::INFINITY, |d| d.to_f64_lossy())
    };
    nks.iter()
        .zip(gammas)
        .enumerate()
        .map(|(idx, (&n, &gamma))| {
            let k = idx as u64 + 1;
            let ln_k = (k as f64).ln();
            let mut growth = f64::INFINITY;
            let mut unit_gap: f64 = 0.0;
            let (mut ratio_gap, mut reciprocal_gap) = (f64::INFINITY, f64::INFINITY);
            for r in 1..=k {
                let p1 = s1.weight_product_at(r, n);
                let p2 = s2.weight_product_at(r, n);
                growth = growth
                    .min(p1.log_magnitude().to_f64_lossy())
                    .min(p2.log_magnitude().to_f64_lossy());
                if r == 1 {
                    ratio_gap = gap(p1 / p2, gamma);
                    reciprocal_gap = gap(p2 / p1, S::one() / gamma);
                } else {
                    unit_gap = unit_gap.max(gap(p1 / p2, S::one())).max(gap(p2 / p1, S::one()));
                }
            }
            let bound = 1.0 / k as f64;
            let beta_margin_log = n as f64 * beta.to_f64_lossy().ln() - ln_k;
            let growth_margin_log = growth - ln_k;
            PairCheckRow {
                k,
                n_k: n,
                beta_margin_log,
                growth_margin_log,
                ratio_gap,
                reciprocal_gap,
                unit_gap,
                pass: beta_margin_log > 0.0
                    && growth_margin_log > 0.0
                    && ratio_gap < bound
                    && reciprocal_gap < bound
                    && unit_gap < bound,
            }
        })
        .collect()
}

/// `w^{(1)} ≡ α`; `w^{(2)}_2 = β`, `w^{(2)}_m = α` otherwise.
pub fn counterexample_shifts<S: Scalar>(alpha: S, beta: S) -> Result<Vec<PseudoShift<S>>> {
    let mut e = BTreeMap::new();
    e.insert(2, beta);
    Ok(vec![
        PseudoShift::rolewicz(alpha)?,
        PseudoShift::weighted_shift(WeightRule::table(e, alpha)?)?,
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub alpha: f64,
    pub beta: f64,
    pub n_max: u64,
    /// `|α/β − 1|`
    pub gap: f64,
    /// `|β/α − 1|`, the same quantity with the operators swapped.
    pub reverse_gap: f64,
    /// `max_{n ≤ n_max} | |W^{(1)}_{1,n}/W^{(2)}_{1,n} − 1| − |α/β − 1| |`
    pub max_gap_deviation: f64,
    pub salas: SalasReport,
}

/// The two-shift pair whose direct sum is hypercyclic but which is not s-hypercyclic.
pub fn counterexample_direct_sum(alpha: f64, beta: f64, n_max: u64) -> Result<CounterexampleReport> {
    if !(alpha > 1.0 && beta > 1.0) {
        return Err(Error::InvalidArgument("alpha and beta must exceed 1".into()));
    }
    if alpha == beta {
        return Err(Error::InvalidArgument("alpha and beta must differ".into()));
    }
    let ts = counterexample_shifts(alpha, beta)?;
    let gap = (alpha / beta - 1.0).abs();
    let mut max_dev: f64 = 0.0;
    for n in 1..=n_max {
        let r = ts[0].weight_product_at(1, n) / ts[1].weight_product_at(1, n);
        let v = r.distance_to(1.0).unwrap_or(f64::INFINITY);
        max_dev = max_dev.max((v - gap).abs());
    }
    Ok(CounterexampleReport {
        alpha,
        beta,
        n_max,
        gap,
        reverse_gap: (beta / alpha - 1.0).abs(),
        max_gap_deviation: max_dev,
        salas: salas_direct_sum(&ts, n_max)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RolewiczReport {
    pub lambda_modulus: f64,
    pub n_max: u64,
    pub diverging: bool,
    pub certificate: CriterionCertificate,
}

/// Condition (a) for `λB` at `m = 1` over `n ≤ n_max`.
pub fn rolewicz<S: Scalar>(lambda: S, n_max: u64, threshold: f64) -> Result<RolewiczReport> {
    let t = PseudoShift::rolewicz(lambda)?;
    let nks: Vec<u64> = (1..=n_max).collect();
    let certificate = check_divergence(&t, &BigUint::one(), &nks, threshold, 1e-12);
    Ok(RolewiczReport {
        lambda_modulus: lambda.modulus().to_f64_lossy(),
        n_max,
        diverging: certificate.verdict.is_verified(),
        certificate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    Verified,
    Refuted,
}

/// A named operator tuple with the verdicts the criteria module should reproduce.
#[derive(Debug, Clone, PartialEq)]
pub struct GalleryInstance<S: Scalar> {
    pub name: String,
    pub operators: Vec<PseudoShift<S>>,
    pub expected: BTreeMap<ConditionId, Expected>,
    pub nks: Option<Vec<u64>>,
}

impl<S: Scalar> GalleryInstance<S> {
    /// The doubling-map pair over a constructed underlying pair.
    pub fn doubling_pair(pair: &DhcPair<S>) -> Result<Self> {
        let mut expected = BTreeMap::new();
        expected.insert(ConditionId::ShcB, Expected::Verified);
        expected.insert(ConditionId::ScritB, Expected::Refuted);
        expected.insert(ConditionId::DcritB, Expected::Refuted);
        Ok(Self {
            name: "doubling-pair".into(),
            operators: pair.operators()?,
            expected,
            nks: Some(pair.nks.clone()),
        })
    }

    pub fn counterexample(alpha: S, beta: S) -> Result<Self> {
        let mut expected = BTreeMap::new();
        expected.insert(ConditionId::SRatio, Expected::Refuted);
        expected.insert(ConditionId::Salas, Expected::Verified);
        expected.insert(ConditionId::DcritB, Expected::Refuted);
        Ok(Self {
            name: "direct-sum-counterexample".into(),
            operators: counterexample_shifts(alpha, beta)?,
            expected,
            nks: None,
        })
    }

    pub fn to_config(&self, p: f64) -> TupleSpec {
        TupleSpec::from_operators(&self.operators, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn map_closed_forms() {
        let (f1, f2) = example_maps();
        assert_eq!(f1.iterate(3, &2u32.into()), BigUint::from(20u32));
        for nu in 1..10 {
            assert!(f2.iterate(nu, &3u32.into()).bit(0));
        }
        for m in 1..=32u32 {
            for nu in 2..=8 {
                assert!(!f1.iterate(nu, &m.into()).bit(0));
            }
        }
    }

    #[test]
    fn weights_and_bounds() {
        let beta = 2.0f64;
        let c = WeightRule::constant(beta).unwrap();
        let (a, b) = example_weights((&c, &c), beta).unwrap();
        assert_eq!(a, WeightRule::Constant(2.0));
        assert_eq!(b, WeightRule::Constant(2.0));
        let mixed = WeightRule::table([(3u64, 1.5)].into_iter().collect(), 2.0).unwrap();
        let (a, _) = example_weights((&mixed, &c), beta).unwrap();
        assert_eq!(a.weight_at(12), 2.0);
        assert_eq!(a.weight_at(8), 1.5);
        assert_eq!(a.bound(), beta);
        let big = WeightRule::constant(2.5).unwrap();
        assert!(example_weights((&big, &c), beta).is_err());
    }

    #[test]
    fn closed_form_spot_checks() {
        let u = WeightRule::table((1..20u64).map(|m| (m, 1.0 + m as f64 / 20.0)).collect(), 2.0).unwrap();
        let w = closed_form_w(2, &4u32.into(), 3, &u, 2.0).unwrap();
        let direct: f64 = (1..=3).map(|nu| u.weight_at(nu + 2)).product();
        assert!((w.to_scalar() - direct).abs() < 1e-12);
        let w = closed_form_w(1, &3u32.into(), 5, &u, 2.0).unwrap();
        assert!((w.log_magnitude() - 5.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn failure_witness_and_overlap() {
        let (j, (a, b)) = shc_failure_witness(2, 2).unwrap();
        assert_eq!(j, BigUint::from(8u32));
        assert_eq!((a, b), (BigUint::from(1u32), BigUint::from(2u32)));
        let (j, _) = shc_failure_witness(5, 3).unwrap();
        assert_eq!(j, BigUint::from(64u32));
        for m in 2..40 {
            assert_eq!(example_overlap(4, m), example_overlap_closed_form(4, m), "M = {m}");
        }
        assert!(shc_failure_witness(1, 2).is_err());
    }

    #[test]
    fn construction_single_unit_target() {
        let pair = construct_dhc_weighted_pair::<f64>(2.0, &[1.0], 1).unwrap();
        assert!(pair.verified());
        assert_eq!(pair.nks.len(), 1);
    }

    #[test]
    fn construction_mixed_targets() {
        let pair = construct_dhc_weighted_pair::<f64>(2.0, &[2.0, 0.5, 1.0], 3).unwrap();
        assert!(pair.verified());
        assert!(pair.nks.windows(2).all(|w| w[0] < w[1]));
        assert!(pair.underlying.0.bound() <= 2.0 && pair.underlying.1.bound() <= 2.0);
        let neg = construct_dhc_weighted_pair::<f64>(1.5, &[-40.0, 1e-3], 4).unwrap();
        assert!(neg.verified());
    }

    #[test]
    fn construction_complex_default_targets() {
        let pair = construct_dhc_weighted_pair::<Complex64>(3.0, &[], 6).unwrap();
        assert!(pair.verified());
        assert!(pair.targets.iter().any(|g| g.im != 0.0));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(construct_dhc_weighted_pair::<f64>(1.0, &[1.0], 2).is_err());
        assert!(construct_dhc_weighted_pair::<f64>(2.0, &[0.0], 2).is_err());
    }

    #[test]
    fn counterexample_gaps() {
        let r = counterexample_direct_sum(2.0, 3.0, 100).unwrap();
        assert!((r.gap - 1.0 / 3.0).abs() < 1e-15);
        assert!(r.max_gap_deviation < 1e-12);
        assert!(r.salas.diverging);
        let r = counterexample_direct_sum(3.0, 2.0, 10).unwrap();
        assert!((r.gap - 0.5).abs() < 1e-15);
        assert!(counterexample_direct_sum(2.0, 2.0, 10).is_err());
    }

    #[test]
    fn rolewicz_verdicts() {
        assert!(rolewicz(2.0f64, 40, 1e3).unwrap().diverging);
        assert!(!rolewicz(1.0f64, 40, 1e3).unwrap().diverging);
        assert!(!rolewicz(0.5f64, 40, 1e3).unwrap().diverging);
        assert!(rolewicz(Complex64::new(0.0, 2.0), 40, 1e3).unwrap().diverging);
    }

    #[test]
    fn default_targets_are_nonzero_and_distinct_enough() {
        let real = default_targets::<f64>(20);
        assert_eq!(real.len(), 20);
        assert!(real.iter().all(|v| *v != 0.0));
        assert!(real.contains(&-0.5) && real.contains(&3.0));
        let cx = default_targets::<Complex64>(30);
        assert!(cx.iter().all(|v| v.norm() > 0.0));
    }

    #[test]
    fn instances_export_configs() {
        let inst = GalleryInstance::counterexample(2.0f64, 3.0).unwrap();
        let spec = inst.to_config(2.0);
        let back = spec.build::<f64>().unwrap();
        assert_eq!(back, inst.operators);
    }
}
