//! Condition (a): `|W_{m,n_k}| → ∞` over a finite prefix of `(n_k)`.

use super::{CertParams, ConditionId, CriterionCertificate, PointKind, PointRecord, Summary, Verdict};
use crate::map::Index;
use crate::operator::PseudoShift;
use crate::scalar::{Real, Scalar};

/// Verified when `ln|W_{m,n_k}| > ln(threshold)` on the final quartile of
/// `nks` and the last value is the running maximum.
pub fn check_divergence<S: Scalar>(
    t: &PseudoShift<S>,
    m: &Index,
    nks: &[u64],
    threshold: f64,
    tol: f64,
) -> CriterionCertificate {
    let params = CertParams {
        epsilon: threshold.recip(),
        k_from: 1,
        k_bound: nks.len() as u64,
        m_count: 1,
        tol,
        nks_checked: nks.to_vec(),
        first_m: None,
        powers: None,
        family: None,
    };
    if nks.is_empty() {
        return CriterionCertificate {
            condition: ConditionId::DhcA,
            params,
            verdict: Verdict::Exhausted { k_from: 1, k_bound: 0 },
            summary: None,
        };
    }

    let logs: Vec<f64> = nks
        .iter()
        .map(|&n| t.weight_product(m, n).log_magnitude().to_f64_lossy())
        .collect();
    let bar = threshold.ln();
    let tail_start = 3 * logs.len() / 4;
    let running_max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = *logs.last().expect("nonempty");

    let point = |idx: usize, kind: PointKind| PointRecord {
        k: idx as u64 + 1,
        n_k: nks[idx],
        j: m.to_string(),
        i: 1,
        l: 1,
        pre_i: m.to_string(),
        pre_l: m.to_string(),
        kind,
        log_ratio: logs[idx],
        value: logs[idx],
    };

    let mut blockers: Vec<PointRecord> = (tail_start..logs.len())
        .filter(|&idx| !(logs[idx] > bar + tol))
        .map(|idx| point(idx, PointKind::BelowThreshold))
        .collect();
    if last < running_max - tol * running_max.abs().max(1.0) {
        blockers.push(point(logs.len() - 1, PointKind::NotRunningMax));
    }

    let tail_min_log = logs[tail_start..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let verdict = if blockers.is_empty() {
        Verdict::Verified {
            k: tail_start as u64 + 1,
            n_k: nks[tail_start],
            witnesses: vec![point(logs.len() - 1, PointKind::BelowThreshold)],
        }
    } else {
        Verdict::Refuted { blockers }
    };
    CriterionCertificate {
        condition: ConditionId::DhcA,
        params,
        verdict,
        summary: Some(Summary::Divergence {
            m: m.to_string(),
            threshold,
            prefix_len: logs.len(),
            tail_start: tail_start + 1,
            tail_min_log,
            last_log: last,
            running_max_log: running_max,
        }),
    }
}
