//! Specializations to weighted backward shifts, and map-level obstructions.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{
    search, CertParams, ConditionId, CriterionCertificate, HereditaryRow, KScan, PointKind,
    PointRecord, SearchParams, Summary, Verdict,
};
use crate::error::{Error, Result};
use crate::log_scalar::LogScalar;
use crate::operator::PseudoShift;
use crate::scalar::{Real, Scalar};
use crate::weights::WeightRule;

fn require_shifts<S: Scalar>(ts: &[PseudoShift<S>]) -> Result<()> {
    match ts.iter().position(|t| !t.is_weighted_shift()) {
        Some(idx) => Err(Error::NotWeightedShift { index: idx + 1 }),
        None => Ok(()),
    }
}

/// `Π_{ν=1..n} w^{(i)}_{m+ν} / w^{(ℓ)}_{m+ν}`, one quotient at a time.
fn product_ratio<S: Scalar>(wi: &WeightRule<S>, wl: &WeightRule<S>, m: u64, n: u64) -> LogScalar<S> {
    (1..=n)
        .map(|nu| {
            let idx = BigUint::from(m) + nu;
            LogScalar::from_scalar(wi.weight(&idx) / wl.weight(&idx)).expect("weights are nonzero")
        })
        .product()
}

/// `|Π_{ν=1..n_k} w^{(i)}_{m+ν}/w^{(ℓ)}_{m+ν} − 1| < ε` for all `i ≠ ℓ` and
/// `first_m ≤ m ≤ M`. With `first_m = 1` this is the full condition.
pub fn check_weighted_s_ratio<S: Scalar>(
    ts: &[PseudoShift<S>],
    params: &SearchParams,
    first_m: u64,
) -> Result<CriterionCertificate> {
    params.validate()?;
    require_shifts(ts)?;
    if ts.len() < 2 {
        return Err(Error::InvalidArgument("at least two operators are required".into()));
    }
    if first_m == 0 {
        return Err(Error::InvalidArgument("first m must be at least 1".into()));
    }
    let verdict = search(params, |k, n| {
        let mut out = KScan::default();
        for i in 0..ts.len() {
            for l in (0..ts.len()).filter(|&l| l != i) {
                for m in first_m..=params.m_count {
                    let ratio = product_ratio(ts[i].weights(), ts[l].weights(), m, n);
                    let v = ratio
                        .distance_to(S::one())
                        .map_or(f64::INFINITY, |d| d.to_f64_lossy());
                    let pt = PointRecord {
                        k,
                        n_k: n,
                        j: (m + n).to_string(),
                        i: i + 1,
                        l: l + 1,
                        pre_i: m.to_string(),
                        pre_l: m.to_string(),
                        kind: PointKind::UnitGap,
                        log_ratio: ratio.log_magnitude().to_f64_lossy(),
                        value: v,
                    };
                    out.push(pt, params.below(v));
                }
            }
        }
        out
    });
    let mut cp = CertParams::from_search(params);
    cp.first_m = Some(first_m);
    Ok(CriterionCertificate {
        condition: ConditionId::SRatio,
        params: cp,
        verdict,
        summary: None,
    })
}

/// Hereditary d-hypercyclicity of `B_1^{r_1}, …, B_N^{r_N}` along `(n_k)`:
///
/// * growth: `|Π_{ν=1}^{r_i n_k} w^{(i)}_{ν+ℓ}| > 1/ε`;
/// * domination: `|Π_{ν=1}^{r_t n_k} w^{(t)}_{ν+ℓ}| > (1/ε)·|Π_{ν=0}^{r_s n_k−1} w^{(s)}_{ℓ−ν+r_t n_k}|`
///   for `s < t`, together with `n_k (r_t − r_s) ≥ M` (disjoint image prefixes);
///
/// for all `ℓ ≤ M`. Verified at the smallest `K` after which every `k` in the
/// window passes both.
pub fn check_hereditary_powers<S: Scalar>(
    weights: &[WeightRule<S>],
    rs: &[u64],
    params: &SearchParams,
) -> Result<CriterionCertificate> {
    params.validate()?;
    if weights.len() != rs.len() || weights.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two shifts and one power per shift".into(),
        ));
    }
    if rs.first() == Some(&0) || rs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "powers must be positive and strictly increasing".into(),
        ));
    }
    let shifts: Vec<PseudoShift<S>> = weights
        .iter()
        .map(|w| PseudoShift::weighted_shift(w.clone()))
        .collect::<Result<_>>()?;
    let bar = params.epsilon - params.tol;
    let log_bar = if bar > 0.0 { bar.ln() } else { f64::NEG_INFINITY };
    let m_count = params.m_count;

    let mut profile = Vec::new();
    let mut blockers = Vec::new();
    for (k, n) in params.window() {
        let mut first_fail: Option<PointRecord> = None;
        let mut fail = |pt: PointRecord| {
            first_fail.get_or_insert(pt);
        };
        let point = |i: usize, l: usize, ell: u64, kind: PointKind, log: f64| PointRecord {
            k,
            n_k: n,
            j: ell.to_string(),
            i,
            l,
            pre_i: ell.to_string(),
            pre_l: ell.to_string(),
            kind,
            log_ratio: log,
            value: log.exp(),
        };

        let mut growth = true;
        for (i, t) in shifts.iter().enumerate() {
            for ell in 1..=m_count {
                let log = t.weight_product_at(ell, rs[i] * n).log_magnitude().to_f64_lossy();
                // |Π| > 1/ε  ⇔  1/|Π| < ε
                if !(-log < log_bar) {
                    growth = false;
                    fail(point(i + 1, i + 1, ell, PointKind::HereditaryGrowth, log));
                }
            }
        }

        let mut domination = true;
        for s in 0..shifts.len() {
            for t in s + 1..shifts.len() {
                let shift = (rs[t] - rs[s]) * n;
                for ell in 1..=m_count {
                    let top = shifts[t].weight_product_at(ell, rs[t] * n).log_magnitude();
                    let low = shifts[s]
                        .weight_product_at(ell + shift, rs[s] * n)
                        .log_magnitude();
                    let log = (low - top).to_f64_lossy();
                    let overlap = shift < m_count;
                    if overlap || !(log < log_bar) {
                        domination = false;
                        fail(point(s + 1, t + 1, ell, PointKind::HereditaryDomination, log));
                    }
                }
            }
        }
        if let Some(b) = first_fail {
            blockers.push(b);
        }
        profile.push(HereditaryRow {
            k,
            n_k: n,
            growth,
            domination,
        });
    }

    let verdict = if profile.is_empty() {
        Verdict::Exhausted {
            k_from: params.k_from,
            k_bound: params.k_bound,
        }
    } else {
        let passing_tail = profile
            .iter()
            .rev()
            .take_while(|r| r.growth && r.domination)
            .count();
        if passing_tail == 0 {
            Verdict::Refuted { blockers }
        } else {
            let row = &profile[profile.len() - passing_tail];
            Verdict::Verified {
                k: row.k,
                n_k: row.n_k,
                witnesses: Vec::new(),
            }
        }
    };
    let mut cp = CertParams::from_search(params);
    cp.powers = Some(rs.to_vec());
    Ok(CriterionCertificate {
        condition: ConditionId::Hereditary,
        params: cp,
        verdict,
        summary: Some(Summary::Hereditary { profile }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalasReport {
    pub n_max: u64,
    /// `max_{n ≤ n_max} min_i ln|Π_{ν=1..n} w^{(i)}_{1+ν}|`
    pub statistic_log: f64,
    pub argmax_n: u64,
    /// The running max strictly increased inside the last quartile of `1..=n_max`.
    pub diverging: bool,
}

/// The direct-sum statistic `sup_n min_i |Π_{ν=1..n} w^{(i)}_{1+ν}|` up to `n_max`.
pub fn salas_direct_sum<S: Scalar>(ts: &[PseudoShift<S>], n_max: u64) -> Result<SalasReport> {
    require_shifts(ts)?;
    if ts.is_empty() || n_max == 0 {
        return Err(Error::InvalidArgument("need operators and n_max ≥ 1".into()));
    }
    let mut acc: Vec<f64> = vec![0.0; ts.len()];
    let mut best = f64::NEG_INFINITY;
    let mut argmax = 0;
    let mut last_increase = 0;
    let quartile = n_max - n_max / 4;
    for n in 1..=n_max {
        let idx = BigUint::from(1 + n);
        for (a, t) in acc.iter_mut().zip(ts) {
            *a += t.weight(&idx).modulus().to_f64_lossy().ln();
        }
        let min = acc.iter().copied().fold(f64::INFINITY, f64::min);
        if min > best {
            best = min;
            argmax = n;
            last_increase = n;
        }
    }
    Ok(SalasReport {
        n_max,
        statistic_log: best,
        argmax_n: argmax,
        diverging: last_increase > 1 && last_increase >= quartile.max(2),
    })
}

/// First pair `(i, ℓ)` (1-based, `i < ℓ`) of operators sharing the same map.
/// Such a tuple never has disjoint image prefixes, so the d-Hypercyclicity
/// Criterion fails.
pub fn structural_dcriterion_blocker<S: Scalar>(
    ts: &[PseudoShift<S>],
    probe_depth: u64,
) -> Option<(usize, usize)> {
    for i in 0..ts.len() {
        for l in i + 1..ts.len() {
            if ts[i].map().same_map(ts[l].map(), probe_depth) {
                return Some((i + 1, l + 1));
            }
        }
    }
    None
}

/// `α^{(i)}_{m,n} = Π_{ν=1..n} w^{(i)}_{ν+m} / w^{(1)}_{ν+m}` for a weighted-shift tuple.
/// `i` is 1-based and at least 2.
pub fn weighted_shift_alpha<S: Scalar>(
    ts: &[PseudoShift<S>],
    i: usize,
    m: u64,
    n: u64,
) -> Result<LogScalar<S>> {
    require_shifts(ts)?;
    if i < 2 || i > ts.len() {
        return Err(Error::InvalidArgument(format!(
            "operator index must lie in 2..={}, got {i}",
            ts.len()
        )));
    }
    Ok(product_ratio(ts[i - 1].weights(), ts[0].weights(), m, n))
}
