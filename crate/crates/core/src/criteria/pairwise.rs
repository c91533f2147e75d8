//! Condition (b) of the four characterizations over arbitrary pseudo-shift tuples.

use num_traits::ToPrimitive;

use super::{
    search, CertParams, ConditionId, CriterionCertificate, KScan, PointKind, PointRecord,
    ScalarFamily, SearchParams, Verdict,
};
use crate::error::{Error, Result};
use crate::operator::PseudoShift;
use crate::pairs::{pair_points, Membership, PairPoint};
use crate::scalar::{Real, Scalar};

#[derive(Clone, Copy)]
enum Mode<'a, S: Scalar> {
    /// Image overlaps compare the W-ratio with an a-ratio.
    Family(&'a ScalarFamily<S>),
    /// Image overlaps must be empty.
    Disjoint,
    /// Image overlaps need equal preimages and W-ratio near 1.
    Unit,
}

fn record<S: Scalar>(pt: &PairPoint<S>, k: u64, n: u64, kind: PointKind, value: f64) -> PointRecord {
    PointRecord {
        k,
        n_k: n,
        j: pt.j.to_string(),
        i: pt.i + 1,
        l: pt.l + 1,
        pre_i: pt.pre_i.to_string(),
        pre_l: pt.pre_l.to_string(),
        kind,
        log_ratio: pt.ratio.log_magnitude().to_f64_lossy(),
        value,
    }
}

fn gap<S: Scalar>(pt: &PairPoint<S>, target: S) -> f64 {
    pt.ratio
        .distance_to(target)
        .map_or(f64::INFINITY, |d| d.to_f64_lossy())
}

fn scan_k<S: Scalar>(
    ts: &[PseudoShift<S>],
    params: &SearchParams,
    mode: Mode<'_, S>,
    k: u64,
    n: u64,
) -> KScan {
    let mut out = KScan::default();
    for pt in pair_points(ts, n, params.m_count) {
        match pt.membership {
            Membership::Tail => {
                let log = pt.ratio.log_magnitude().to_f64_lossy();
                out.push(record(&pt, k, n, PointKind::TailRatio, log.exp()), params.log_below(log));
            }
            Membership::Overlap => match mode {
                Mode::Family(family) => {
                    let pre_i = pt.pre_i.to_u64().expect("overlap preimage lies in [M]");
                    let a = family.coeff(pt.i, pre_i) / family.coeff(pt.l, pt.pre_l);
                    let v = gap(&pt, a);
                    out.push(record(&pt, k, n, PointKind::ImageGap, v), params.below(v));
                }
                Mode::Disjoint => {
                    let v = pt.ratio.magnitude().to_f64_lossy();
                    out.push(record(&pt, k, n, PointKind::ImageOverlap, v), false);
                }
                Mode::Unit => {
                    if pt.pre_i != pt.pre_l.into() {
                        let v = f64::INFINITY;
                        out.push(record(&pt, k, n, PointKind::PreimageMismatch, v), false);
                    } else {
                        let v = gap(&pt, S::one());
                        out.push(record(&pt, k, n, PointKind::UnitGap, v), params.below(v));
                    }
                }
            },
        }
    }
    out
}

fn run<S: Scalar>(
    condition: ConditionId,
    ts: &[PseudoShift<S>],
    params: &SearchParams,
    mode: Mode<'_, S>,
) -> Result<CriterionCertificate> {
    params.validate()?;
    if ts.len() < 2 {
        return Err(Error::InvalidArgument("at least two operators are required".into()));
    }
    let verdict = search(params, |k, n| scan_k(ts, params, mode, k, n));
    let mut cp = CertParams::from_search(params);
    if let Mode::Family(f) = mode {
        f.validate(ts.len(), params.m_count)?;
        cp.family = Some(f.to_parts());
    }
    Ok(CriterionCertificate {
        condition,
        params: cp,
        verdict,
        summary: None,
    })
}

/// d-hypercyclicity condition (b): tail ratios below `ε` and
/// `|W-ratio − a^{(i)}/a^{(ℓ)}| < ε` on image overlaps.
pub fn check_dhc_condition_b<S: Scalar>(
    ts: &[PseudoShift<S>],
    family: &ScalarFamily<S>,
    params: &SearchParams,
) -> Result<CriterionCertificate> {
    if !matches!(family, ScalarFamily::Matrix(_)) {
        return Err(Error::InvalidArgument(
            "dhc-b needs one scalar row per operator".into(),
        ));
    }
    family.validate(ts.len(), params.m_count)?;
    run(ConditionId::DhcB, ts, params, Mode::Family(family))
}

/// s-hypercyclicity condition (b): as [`check_dhc_condition_b`] with one shared row.
pub fn check_shc_condition_b<S: Scalar>(
    ts: &[PseudoShift<S>],
    family: &ScalarFamily<S>,
    params: &SearchParams,
) -> Result<CriterionCertificate> {
    if !matches!(family, ScalarFamily::Row(_)) {
        return Err(Error::InvalidArgument("shc-b needs a single scalar row".into()));
    }
    family.validate(ts.len(), params.m_count)?;
    run(ConditionId::ShcB, ts, params, Mode::Family(family))
}

/// d-Hypercyclicity Criterion condition (b): disjoint image prefixes and
/// tail ratios below `ε`.
pub fn check_dcriterion_condition<S: Scalar>(
    ts: &[PseudoShift<S>],
    params: &SearchParams,
) -> Result<CriterionCertificate> {
    run(ConditionId::DcritB, ts, params, Mode::Disjoint)
}

/// s-Hypercyclicity Criterion condition (b): equal preimages and
/// `|W-ratio − 1| < ε` on image overlaps, tail ratios below `ε`.
pub fn check_scriterion_condition<S: Scalar>(
    ts: &[PseudoShift<S>],
    params: &SearchParams,
) -> Result<CriterionCertificate> {
    run(ConditionId::ScritB, ts, params, Mode::Unit)
}

/// Re-runs a verified certificate at its witness `k` from the recorded
/// parameters. `epsilon` overrides the recorded value when given.
///
/// Returns `Ok(false)` for certificates that are not verified.
pub fn replay<S: Scalar>(
    ts: &[PseudoShift<S>],
    family: Option<&ScalarFamily<S>>,
    cert: &CriterionCertificate,
    epsilon: Option<f64>,
) -> Result<bool> {
    let Verdict::Verified { n_k, .. } = cert.verdict else {
        return Ok(false);
    };
    let p = &cert.params;
    let params = SearchParams {
        epsilon: epsilon.unwrap_or(p.epsilon),
        k_from: 1,
        k_bound: 1,
        m_count: p.m_count,
        nks: super::NkSchedule::Explicit(vec![n_k]),
        tol: p.tol,
    };
    let need_family = || {
        family.ok_or_else(|| Error::InvalidArgument("replay needs the scalar family".into()))
    };
    let again = match cert.condition {
        ConditionId::DhcB => check_dhc_condition_b(ts, need_family()?, &params)?,
        ConditionId::ShcB => check_shc_condition_b(ts, need_family()?, &params)?,
        ConditionId::DcritB => check_dcriterion_condition(ts, &params)?,
        ConditionId::ScritB => check_scriterion_condition(ts, &params)?,
        ConditionId::SRatio => {
            super::check_weighted_s_ratio(ts, &params, p.first_m.unwrap_or(1))?
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "condition {other} has no replay"
            )))
        }
    };
    Ok(again.verdict.is_verified())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::NkSchedule;
    use crate::map::ShiftMap;
    use crate::weights::WeightRule;

    fn params(eps: f64, k_from: u64, k_bound: u64, m: u64) -> SearchParams {
        SearchParams::new(eps, k_from, k_bound, m, NkSchedule::Identity)
    }

    fn example_pair(beta: f64) -> Vec<PseudoShift<f64>> {
        let w = WeightRule::constant(beta).unwrap();
        vec![
            PseudoShift::new(ShiftMap::example_a(), w.clone()).unwrap(),
            PseudoShift::new(ShiftMap::example_b(), w).unwrap(),
        ]
    }

    #[test]
    fn weighted_shifts_never_meet_dcriterion() {
        let ts = vec![
            PseudoShift::rolewicz(2.0f64).unwrap(),
            PseudoShift::rolewicz(3.0f64).unwrap(),
        ];
        let cert = check_dcriterion_condition(&ts, &params(0.5, 1, 8, 1)).unwrap();
        let Verdict::Refuted { blockers } = cert.verdict else {
            panic!("expected refutation")
        };
        assert_eq!(blockers.len(), 8);
        for b in blockers {
            assert_eq!(b.kind, PointKind::ImageOverlap);
            assert_eq!(b.j, (b.n_k + 1).to_string());
        }
    }

    #[test]
    fn distinct_affine_maps_are_disjoint() {
        let ts = vec![
            PseudoShift::new(ShiftMap::affine(1).unwrap(), WeightRule::constant(2.0f64).unwrap()).unwrap(),
            PseudoShift::new(ShiftMap::affine(2).unwrap(), WeightRule::constant(4.0).unwrap()).unwrap(),
        ];
        // f_2^n(1) = 1 + 2n = f_1^n(1 + n): tail ratio 2^n / 4^n
        let cert = check_dcriterion_condition(&ts, &params(0.01, 1, 20, 1)).unwrap();
        let Verdict::Verified { k, .. } = cert.verdict else {
            panic!("expected verification")
        };
        assert_eq!(k, 7);
    }

    #[test]
    fn example_maps_fail_scriterion_at_power_of_two() {
        let ts = example_pair(2.0);
        for m in 2..6 {
            let cert = check_scriterion_condition(&ts, &params(10.0, 2, 6, m)).unwrap();
            let Verdict::Refuted { blockers } = cert.verdict else {
                panic!("expected refutation")
            };
            for b in blockers {
                assert_eq!(b.kind, PointKind::PreimageMismatch);
                assert_eq!(b.j, pow2(b.n_k + 1));
                assert_eq!((b.pre_i.as_str(), b.pre_l.as_str()), ("1", "2"));
            }
        }
    }

    fn pow2(e: u64) -> String {
        (num_bigint::BigUint::from(1u32) << e).to_string()
    }

    #[test]
    fn huge_epsilon_verifies_at_first_k() {
        let ts = example_pair(2.0);
        let fam = ScalarFamily::Matrix(vec![vec![1.0, 2.0, 3.0], vec![-1.0, 0.5, 4.0]]);
        let cert = check_dhc_condition_b(&ts, &fam, &params(1e9, 3, 9, 3)).unwrap();
        assert_eq!(cert.verdict.witness_k(), Some(3));
        assert!(replay(&ts, Some(&fam), &cert, None).unwrap());
    }

    #[test]
    fn identical_operators_meet_shc() {
        let t = PseudoShift::new(ShiftMap::example_a(), WeightRule::constant(1.5f64).unwrap()).unwrap();
        let ts = vec![t.clone(), t];
        let fam = ScalarFamily::Row(vec![2.0, -3.0, 0.25]);
        let cert = check_shc_condition_b(&ts, &fam, &params(1e-6, 4, 4, 3)).unwrap();
        assert_eq!(cert.verdict.witness_k(), Some(4));
    }

    #[test]
    fn family_shape_is_checked() {
        let ts = example_pair(2.0);
        let row = ScalarFamily::Row(vec![1.0, 1.0]);
        assert!(check_dhc_condition_b(&ts, &row, &params(1.0, 1, 2, 2)).is_err());
        let short = ScalarFamily::Matrix(vec![vec![1.0], vec![1.0]]);
        assert!(check_dhc_condition_b(&ts, &short, &params(1.0, 1, 2, 2)).is_err());
        let zero = ScalarFamily::Row(vec![1.0, 0.0]);
        assert!(check_shc_condition_b(&ts, &zero, &params(1.0, 1, 2, 2)).is_err());
    }

    #[test]
    fn empty_window_is_exhausted() {
        let ts = example_pair(2.0);
        let p = SearchParams::new(1.0, 3, 5, 2, NkSchedule::Explicit(vec![4, 5]));
        let cert = check_scriterion_condition(&ts, &p).unwrap();
        assert!(matches!(cert.verdict, Verdict::Exhausted { .. }));
    }
}
