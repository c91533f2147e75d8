//! Finite orbits, blow-up/collapse assembly and coverage diagnostics.
//!
//! The assembled vector is a finite sum of correctors, so it only exhibits the
//! mechanism of the blow-up/collapse argument over the supplied targets; it is
//! not a hypercyclic vector.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corrector::{build_corrector, perturb_nonzero};
use crate::error::{Error, Result};
use crate::operator::PseudoShift;
use crate::scalar::{Real, Scalar};
use crate::sparse::{dense_p_norm, SparseVector};

/// First-`d`-coordinate projections of `T^n x` for `0 ≤ n ≤ n_max`.
pub fn orbit<S: Scalar>(t: &PseudoShift<S>, x: &SparseVector<S>, n_max: u64, d: u64) -> Vec<Vec<S>> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut cur = x.clone();
    out.push(cur.project(d));
    for _ in 0..n_max {
        cur = t.apply(&cur);
        out.push(cur.project(d));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisitStep {
    pub stage: usize,
    pub n: u64,
    pub m_count: u64,
    pub epsilon: f64,
    /// Certified `‖T_i^n z − y‖` from the corrector bounds plus the perturbation.
    pub certified: f64,
    /// `ln ‖z‖` bound of this stage's corrector.
    pub z_norm_log: f64,
    /// `‖T_i^n x − y‖` on the assembled `x`, per operator.
    pub distances: Vec<f64>,
    /// The same distances on the first `d` coordinates.
    pub projected: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisitLog {
    pub steps: Vec<VisitStep>,
    /// Stage targets as `(index, re, im)` triples.
    pub targets: Vec<Vec<(u64, f64, f64)>>,
    pub d: u64,
    pub p: f64,
}

impl VisitLog {
    pub fn all_within_schedule(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.distances.iter().all(|&v| v < s.epsilon))
    }

    /// `n,distance_1,…,distance_N` per stage.
    pub fn to_csv(&self) -> String {
        let width = self.steps.first().map_or(0, |s| s.distances.len());
        let mut out = String::from("n");
        for i in 1..=width {
            let _ = write!(out, ",distance_{i}");
        }
        out.push('\n');
        for s in &self.steps {
            let _ = write!(out, "{}", s.n);
            for v in &s.distances {
                let _ = write!(out, ",{v:e}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssemblyParams<R> {
    pub schedule: Vec<R>,
    pub n_search_bound: u64,
    pub p: R,
}

fn ln_f64(v: f64) -> f64 {
    if v > 0.0 {
        v.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Greedy blow-up/collapse assembly of `x = Σ z_t`.
///
/// At stage `t` every operator is steered towards the same target `y_t`:
/// `z_t` is the corrector for a perturbation of `y_t` with full support on
/// `[M_t]` at the smallest admissible `n_t`. Admissible means
///
/// * `n_t` exceeds `n_{t-1}` and the support of the partial sum, so `T_i^{n_t}` kills it;
/// * the certified error is at most `ε_t/4` and `‖z_t‖ ≤ ε_t`;
/// * for every earlier stage `s`, `‖T_i‖^{n_s} ‖z_t‖` fits in half of what is
///   left of that stage's interference budget `ε_s/2`.
pub fn blowup_collapse_assemble<S: Scalar>(
    ts: &[PseudoShift<S>],
    targets: &[SparseVector<S>],
    params: &AssemblyParams<S::Real>,
) -> Result<(SparseVector<S>, VisitLog)> {
    if ts.is_empty() {
        return Err(Error::InvalidArgument("at least one operator is required".into()));
    }
    if params.schedule.len() < targets.len() {
        return Err(Error::InvalidArgument(format!(
            "schedule has {} entries for {} targets",
            params.schedule.len(),
            targets.len()
        )));
    }
    let eps: Vec<f64> = params.schedule.iter().map(|e| e.to_f64_lossy()).collect();
    if eps.iter().any(|e| !(*e > 0.0)) || eps.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument("schedule must be positive and nonincreasing".into()));
    }
    let p = params.p;
    let pf = p.to_f64_lossy();
    let log_norm = ts
        .iter()
        .map(|t| t.norm_bound().to_f64_lossy().ln())
        .fold(f64::NEG_INFINITY, f64::max);

    let mut x = SparseVector::zero();
    let mut stages: Vec<(u64, u64, f64, f64)> = Vec::new();
    let mut budget: Vec<f64> = Vec::new();
    let mut prev_n = 0u64;

    for (t, target) in targets.iter().enumerate() {
        let e = eps[t];
        let m_count = target.degree().max(1);
        let delta = e / 4.0;
        let y = perturb_nonzero(target, m_count, S::Real::from_f64_lossy(delta), p)?;
        let ys = vec![y; ts.len()];
        let n_min = prev_n.max(x.degree()) + 1;
        let mut placed = None;
        for n in n_min..=params.n_search_bound {
            let (z, cert) = build_corrector(ts, n, m_count, &ys, p)?;
            let err = cert.error_bounds.iter().map(|b| b.bound).fold(0.0, f64::max);
            let z_log = ln_f64(cert.z_norm_bound);
            if err > e / 4.0 || z_log > e.ln() {
                continue;
            }
            let costs: Vec<f64> = stages
                .iter()
                .map(|&(n_s, ..)| (n_s as f64 * log_norm + z_log).exp())
                .collect();
            if costs.iter().zip(&budget).any(|(c, b)| *c > b / 2.0) {
                continue;
            }
            placed = Some((n, z, err, z_log, costs));
            break;
        }
        let Some((n, z, err, z_log, costs)) = placed else {
            return Err(Error::Construction(format!(
                "stage {}: no n in [{n_min}, {}] certifies error ≤ ε/4, ‖z‖ ≤ ε and the interference budget",
                t + 1,
                params.n_search_bound
            )));
        };
        for (b, c) in budget.iter_mut().zip(costs) {
            *b -= c;
        }
        budget.push(e / 2.0);
        x = x.add(&z);
        stages.push((n, m_count, delta + err, z_log));
        prev_n = n;
    }

    let d = targets.iter().map(|y| y.degree()).max().unwrap_or(0).max(1);
    let steps = stages
        .iter()
        .zip(targets)
        .enumerate()
        .map(|(t, (&(n, m_count, certified, z_norm_log), y))| {
            let diffs: Vec<SparseVector<S>> = ts.iter().map(|op| op.apply_power(n, &x).sub(y)).collect();
            VisitStep {
                stage: t + 1,
                n,
                m_count,
                epsilon: eps[t],
                certified,
                z_norm_log,
                distances: diffs.iter().map(|v| v.p_norm(p).to_f64_lossy()).collect(),
                projected: diffs
                    .iter()
                    .map(|v| dense_p_norm(&v.project(d), p).to_f64_lossy())
                    .collect(),
            }
        })
        .collect();
    let log = VisitLog {
        steps,
        targets: targets.iter().map(|y| triples(y)).collect(),
        d,
        p: pf,
    };
    Ok((x, log))
}

fn triples<S: Scalar>(y: &SparseVector<S>) -> Vec<(u64, f64, f64)> {
    y.iter()
        .map(|(j, v)| {
            let (re, im) = v.to_parts();
            (u64::try_from(j).unwrap_or(u64::MAX), re, im)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetVisit {
    pub best_distance: f64,
    pub best_n: Option<usize>,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub epsilon: f64,
    pub d: u64,
    pub coverage: f64,
    pub targets: Vec<TargetVisit>,
}

/// Fraction of `targets` with some point within `ε` in the projected p-norm.
pub fn density_report<S: Scalar>(
    points: &[Vec<S>],
    targets: &[SparseVector<S>],
    epsilon: f64,
    d: u64,
    p: S::Real,
) -> DensityReport {
    let visits: Vec<TargetVisit> = targets
        .iter()
        .map(|y| {
            let y = y.project(d);
            let mut best = (f64::INFINITY, None);
            for (n, pt) in points.iter().enumerate() {
                let diff: Vec<S> = (0..d as usize)
                    .map(|c| pt.get(c).copied().unwrap_or_else(S::zero) - y[c])
                    .collect();
                let dist = dense_p_norm(&diff, p).to_f64_lossy();
                if dist < best.0 {
                    best = (dist, Some(n));
                }
            }
            TargetVisit {
                best_distance: best.0,
                best_n: best.1,
                covered: best.0 < epsilon,
            }
        })
        .collect();
    let covered = visits.iter().filter(|v| v.covered).count();
    DensityReport {
        epsilon,
        d,
        coverage: if visits.is_empty() {
            0.0
        } else {
            covered as f64 / visits.len() as f64
        },
        targets: visits,
    }
}

/// Orbit points of every operator, each `T_i^n x` projected.
pub fn joint_orbit<S: Scalar>(
    ts: &[PseudoShift<S>],
    x: &SparseVector<S>,
    n_max: u64,
    d: u64,
) -> Vec<Vec<Vec<S>>> {
    ts.iter().map(|t| orbit(t, x, n_max, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rolewicz_targets() -> Vec<SparseVector<f64>> {
        vec![
            SparseVector::basis(1),
            SparseVector::from_coefficients(&[1.0, 1.0]),
            SparseVector::basis(1).scale(2.0),
        ]
    }

    fn params(schedule: Vec<f64>) -> AssemblyParams<f64> {
        AssemblyParams {
            schedule,
            n_search_bound: 400,
            p: 2.0,
        }
    }

    #[test]
    fn basis_orbit_dies() {
        let t = PseudoShift::new(crate::map::ShiftMap::example_b(), crate::weights::WeightRule::constant(3.0).unwrap()).unwrap();
        let o = orbit(&t, &SparseVector::basis(1), 4, 3);
        assert_eq!(o[0], vec![1.0, 0.0, 0.0]);
        assert!(o[1..].iter().all(|v| v.iter().all(|c| *c == 0.0)));
    }

    #[test]
    fn rolewicz_shifts_down() {
        let t = PseudoShift::rolewicz(2.0f64).unwrap();
        let o = orbit(&t, &SparseVector::basis(5), 1, 4);
        assert_eq!(o[1], vec![0.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn rolewicz_two_assembles() {
        let ts = vec![PseudoShift::rolewicz(2.0f64).unwrap()];
        let (x, log) = blowup_collapse_assemble(&ts, &rolewicz_targets(), &params(vec![0.1, 0.05, 0.01])).unwrap();
        assert_eq!(log.steps.len(), 3);
        assert!(log.all_within_schedule(), "{log:?}");
        assert!(log.steps.windows(2).all(|w| w[0].n < w[1].n));
        let pts = orbit(&ts[0], &x, log.steps[2].n, log.d);
        let rep = density_report(&pts, &rolewicz_targets(), 0.1, log.d, 2.0);
        assert_eq!(rep.coverage, 1.0);
    }

    #[test]
    fn unit_weights_fail() {
        let ts = vec![PseudoShift::rolewicz(1.0f64).unwrap()];
        let err = blowup_collapse_assemble(&ts, &rolewicz_targets(), &params(vec![0.1, 0.05, 0.01])).unwrap_err();
        assert!(err.to_string().contains("stage 1"), "{err}");
    }

    #[test]
    fn empty_targets() {
        let ts = vec![PseudoShift::rolewicz(2.0f64).unwrap()];
        let (x, log) = blowup_collapse_assemble(&ts, &[], &params(vec![])).unwrap();
        assert!(x.is_empty());
        assert!(log.steps.is_empty());
    }

    #[test]
    fn density_extremes() {
        let targets = vec![SparseVector::from_coefficients(&[1.0, 2.0])];
        let rep = density_report(&[vec![0.0, 0.0], vec![1.0, 2.0]], &targets, 1e-9, 2, 2.0);
        assert_eq!(rep.coverage, 1.0);
        assert_eq!(rep.targets[0].best_n, Some(1));
        let rep = density_report::<f64>(&[], &targets, 1.0, 2, 2.0);
        assert_eq!(rep.coverage, 0.0);
    }

    #[test]
    fn csv_columns() {
        use crate::{map::ShiftMap, weights::WeightRule};
        let ts = vec![
            PseudoShift::new(ShiftMap::affine(1).unwrap(), WeightRule::constant(2.0f64).unwrap()).unwrap(),
            PseudoShift::new(ShiftMap::affine(2).unwrap(), WeightRule::constant(3.0).unwrap()).unwrap(),
        ];
        let (_, log) = blowup_collapse_assemble(&ts, &[SparseVector::basis(1)], &params(vec![0.1])).unwrap();
        let csv = log.to_csv();
        assert!(csv.starts_with("n,distance_1,distance_2\n"));
        assert_eq!(csv.lines().count(), 2);
    }
}
