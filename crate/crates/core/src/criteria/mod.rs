//! Finite-witness checkers for the weight conditions characterizing
//! disjoint and simultaneous hypercyclicity of pseudo-shift tuples.
//!
//! Every checker scans `k ∈ [K, k_bound]` along a supplied sequence `(n_k)`
//! and returns a [`CriterionCertificate`]: the first `k` at which the
//! condition holds, or the first blocking point for every `k` that fails.

mod divergence;
mod pairwise;
mod shifts;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use divergence::check_divergence;
pub use pairwise::{
    check_dcriterion_condition, check_dhc_condition_b, check_scriterion_condition,
    check_shc_condition_b, replay,
};
pub use shifts::{
    check_hereditary_powers, check_weighted_s_ratio, salas_direct_sum,
    structural_dcriterion_blocker, weighted_shift_alpha, SalasReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionId {
    DhcA,
    DhcB,
    DcritB,
    ShcB,
    ScritB,
    Hereditary,
    Salas,
    SRatio,
}

impl ConditionId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionId::DhcA => "dhc-a",
            ConditionId::DhcB => "dhc-b",
            ConditionId::DcritB => "dcrit-b",
            ConditionId::ShcB => "shc-b",
            ConditionId::ScritB => "scrit-b",
            ConditionId::Hereditary => "hereditary",
            ConditionId::Salas => "salas",
            ConditionId::SRatio => "s-ratio",
        }
    }
}

impl std::fmt::Display for ConditionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ConditionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use ConditionId::*;
        [DhcA, DhcB, DcritB, ShcB, ScritB, Hereditary, Salas, SRatio]
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown condition id `{s}`")))
    }
}

/// The scalars `a^{(i)}_m` of condition (b): one row per operator, or a single
/// shared row for the simultaneous conditions.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFamily<S: Scalar> {
    Matrix(Vec<Vec<S>>),
    Row(Vec<S>),
}

impl<S: Scalar> ScalarFamily<S> {
    /// `a^{(op)}_m`, both 0-based operator and 1-based `m`.
    pub fn coeff(&self, op: usize, m: u64) -> S {
        let row = match self {
            ScalarFamily::Matrix(rows) => &rows[op],
            ScalarFamily::Row(row) => row,
        };
        row[(m - 1) as usize]
    }

    pub fn validate(&self, operators: usize, m_count: u64) -> Result<()> {
        let rows: Vec<&Vec<S>> = match self {
            ScalarFamily::Matrix(rows) => {
                if rows.len() != operators {
                    return Err(Error::InvalidArgument(format!(
                        "scalar family has {} rows, expected {operators}",
                        rows.len()
                    )));
                }
                rows.iter().collect()
            }
            ScalarFamily::Row(row) => vec![row],
        };
        for (r, row) in rows.iter().enumerate() {
            if (row.len() as u64) < m_count {
                return Err(Error::InvalidArgument(format!(
                    "scalar family row {} has {} entries, M = {m_count}",
                    r + 1,
                    row.len()
                )));
            }
            if let Some(m) = row[..m_count as usize].iter().position(|a| a.is_zero_scalar()) {
                return Err(Error::InvalidArgument(format!(
                    "scalar family row {}: a_{} is zero",
                    r + 1,
                    m + 1
                )));
            }
        }
        Ok(())
    }

    pub fn to_parts(&self) -> Vec<Vec<(f64, f64)>> {
        let conv = |row: &Vec<S>| row.iter().map(|a| a.to_parts()).collect();
        match self {
            ScalarFamily::Matrix(rows) => rows.iter().map(conv).collect(),
            ScalarFamily::Row(row) => vec![conv(row)],
        }
    }
}

/// Candidate sequence `(n_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NkSchedule {
    /// `n_k = nks[k − 1]`
    Explicit(Vec<u64>),
    /// `n_k = k`
    Identity,
}

impl NkSchedule {
    pub fn nk(&self, k: u64) -> Option<u64> {
        match self {
            NkSchedule::Explicit(v) => k.checked_sub(1).and_then(|i| v.get(i as usize)).copied(),
            NkSchedule::Identity => (k >= 1).then_some(k),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let NkSchedule::Explicit(v) = self {
            if v.first() == Some(&0) || v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(
                    "n_k must be positive and strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub epsilon: f64,
    /// `K`
    pub k_from: u64,
    pub k_bound: u64,
    /// `M`
    pub m_count: u64,
    pub nks: NkSchedule,
    pub tol: f64,
}

impl SearchParams {
    pub fn new(epsilon: f64, k_from: u64, k_bound: u64, m_count: u64, nks: NkSchedule) -> Self {
        Self {
            epsilon,
            k_from,
            k_bound,
            m_count,
            nks,
            tol: 1e-12,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
        }
        if self.m_count == 0 {
            return Err(Error::InvalidArgument("M must be at least 1".into()));
        }
        self.nks.validate()
    }

    /// `(k, n_k)` over the search window, stopping where the schedule ends.
    pub fn window(&self) -> Vec<(u64, u64)> {
        (self.k_from.max(1)..=self.k_bound)
            .map_while(|k| self.nks.nk(k).map(|n| (k, n)))
            .collect()
    }

    /// `value < ε − tol`
    pub(crate) fn below(&self, value: f64) -> bool {
        value < self.epsilon - self.tol
    }

    /// `exp(log_value) < ε − tol` without exponentiating.
    pub(crate) fn log_below(&self, log_value: f64) -> bool {
        let bar = self.epsilon - self.tol;
        bar > 0.0 && log_value < bar.ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    /// `|W-ratio|` on a tail overlap.
    TailRatio,
    /// `|W-ratio − a-ratio|` on an image overlap.
    ImageGap,
    /// Image overlap that must be empty.
    ImageOverlap,
    /// Image overlap with distinct preimages.
    PreimageMismatch,
    /// `|W-ratio − 1|` on an image overlap.
    UnitGap,
    BelowThreshold,
    NotRunningMax,
    HereditaryGrowth,
    HereditaryDomination,
}

/// A point examined by a checker. Operators are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub k: u64,
    pub n_k: u64,
    pub j: String,
    pub i: usize,
    pub l: usize,
    pub pre_i: String,
    pub pre_l: String,
    pub kind: PointKind,
    /// `ln |W-ratio|` (or `ln |W|` for single-operator kinds).
    pub log_ratio: f64,
    /// The compared quantity.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Verified {
        k: u64,
        n_k: u64,
        /// Largest compared value per kind at the witness `k`.
        witnesses: Vec<PointRecord>,
    },
    Refuted {
        blockers: Vec<PointRecord>,
    },
    Exhausted {
        k_from: u64,
        k_bound: u64,
    },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn witness_k(&self) -> Option<u64> {
        match self {
            Verdict::Verified { k, .. } => Some(*k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertParams {
    pub epsilon: f64,
    pub k_from: u64,
    pub k_bound: u64,
    pub m_count: u64,
    pub tol: f64,
    /// `n_k` for every `k` actually examined.
    pub nks_checked: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub powers: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<Vec<(f64, f64)>>>,
}

impl CertParams {
    pub(crate) fn from_search(p: &SearchParams) -> Self {
        Self {
            epsilon: p.epsilon,
            k_from: p.k_from,
            k_bound: p.k_bound,
            m_count: p.m_count,
            tol: p.tol,
            nks_checked: p.window().into_iter().map(|(_, n)| n).collect(),
            first_m: None,
            powers: None,
            family: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Summary {
    Divergence {
        m: String,
        threshold: f64,
        prefix_len: usize,
        /// 1-based position in the prefix where the tail starts.
        tail_start: usize,
        tail_min_log: f64,
        last_log: f64,
        running_max_log: f64,
    },
    Hereditary {
        profile: Vec<HereditaryRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HereditaryRow {
    pub k: u64,
    pub n_k: u64,
    pub growth: bool,
    pub domination: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionCertificate {
    pub condition: ConditionId,
    pub params: CertParams,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
}

/// Outcome of examining one `k`.
#[derive(Debug, Default)]
pub(crate) struct KScan {
    pub blocker: Option<PointRecord>,
    pub worst: Vec<PointRecord>,
}

impl KScan {
    /// Records `pt`, keeping the first failure and the largest value per kind.
    pub fn push(&mut self, pt: PointRecord, pass: bool) {
        if !pass && self.blocker.is_none() {
            self.blocker = Some(pt.clone());
        }
        match self.worst.iter_mut().find(|w| w.kind == pt.kind) {
            Some(w) if !(pt.value > w.value) => {}
            Some(w) => *w = pt,
            None => self.worst.push(pt),
        }
    }
}

/// Scans the window and returns the first passing `k`.
pub(crate) fn search<F>(params: &SearchParams, mut scan: F) -> Verdict
where
    F: FnMut(u64, u64) -> KScan,
{
    let window = params.window();
    if window.is_empty() {
        return Verdict::Exhausted {
            k_from: params.k_from,
            k_bound: params.k_bound,
        };
    }
    let mut blockers = Vec::new();
    for (k, n) in window {
        let out = scan(k, n);
        match out.blocker {
            None => {
                return Verdict::Verified {
                    k,
                    n_k: n,
                    witnesses: out.worst,
                }
            }
            Some(b) => blockers.push(b),
        }
    }
    Verdict::Refuted { blockers }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_ids_round_trip() {
        for s in ["dhc-a", "dhc-b", "dcrit-b", "shc-b", "scrit-b", "hereditary", "salas", "s-ratio"] {
            let c: ConditionId = s.parse().unwrap();
            assert_eq!(c.as_str(), s);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{s}\""));
        }
        assert!("dhc-c".parse::<ConditionId>().is_err());
    }

    #[test]
    fn schedule_lookup() {
        let s = NkSchedule::Explicit(vec![2, 5, 9]);
        assert_eq!(s.nk(1), Some(2));
        assert_eq!(s.nk(3), Some(9));
        assert_eq!(s.nk(4), None);
        assert_eq!(s.nk(0), None);
        assert_eq!(NkSchedule::Identity.nk(7), Some(7));
        assert!(NkSchedule::Explicit(vec![3, 3]).validate().is_err());
    }

    #[test]
    fn window_stops_at_schedule_end() {
        let p = SearchParams::new(0.1, 2, 10, 1, NkSchedule::Explicit(vec![1, 2, 3]));
        assert_eq!(p.window(), vec![(2, 2), (3, 3)]);
        let empty = SearchParams::new(0.1, 5, 4, 1, NkSchedule::Identity);
        assert!(empty.window().is_empty());
    }

    #[test]
    fn zero_epsilon_rejected() {
        let p = SearchParams::new(0.0, 1, 1, 1, NkSchedule::Identity);
        assert!(p.validate().is_err());
    }

    #[test]
    fn strictness_with_tolerance() {
        let p = SearchParams::new(0.5, 1, 1, 1, NkSchedule::Identity);
        assert!(!p.below(0.5));
        assert!(p.below(0.4999));
        assert!(!p.log_below(0.5f64.ln()));
    }
}
