//! The corrector vector `z` and its certified bounds.
//!
//! Given targets `x_i = Σ_{m≤M} a^{(i)}_m e_m` with every `a^{(i)}_m ≠ 0`, the
//! vector
//!
//! ```text
//! z = Σ_ℓ Σ_{j ∈ A_ℓ} a^{(ℓ)}_{f_ℓ^{-n}(j)} / W^{(ℓ)}_{f_ℓ^{-n}(j),n} · e_j
//! ```
//!
//! over the disjoint blocks `A_1 = f_1^n([M])`,
//! `A_ℓ = f_ℓ^n([M]) \ ∪_{i<ℓ} f_i^n([M])` satisfies `T_ℓ^n z = x_ℓ` on the
//! coordinates pulled back from `A_ℓ`, and the remaining error is controlled
//! by weight ratios on the overlap sets. [`build_corrector`] returns `z`
//! together with a [`BoundCertificate`] holding those bounds;
//! [`verify_bounds`] measures the actual norms against it.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{Float, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::log_scalar::LogScalar;
use crate::map::{Index, ShiftMap};
use crate::operator::PseudoShift;
use crate::pairs::{pair_points, Membership};
use crate::scalar::{Real, Scalar};
use crate::sparse::SparseVector;

/// Blocks `A_1, …, A_N`, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub n: u64,
    pub m_count: u64,
    /// `(j, f_ℓ^{-n}(j))` per block.
    pub blocks: Vec<Vec<(Index, u64)>>,
}

impl BlockDecomposition {
    pub fn block_indices(&self, l: usize) -> Vec<Index> {
        self.blocks[l].iter().map(|(j, _)| j.clone()).collect()
    }

    pub fn union(&self) -> BTreeSet<Index> {
        self.blocks
            .iter()
            .flat_map(|b| b.iter().map(|(j, _)| j.clone()))
            .collect()
    }
}

pub fn disjoint_blocks(maps: &[&ShiftMap], n: u64, m_count: u64) -> BlockDecomposition {
    let mut seen: BTreeSet<Index> = BTreeSet::new();
    let mut blocks = Vec::with_capacity(maps.len());
    for f in maps {
        let image = f.image_prefix(n, m_count);
        let block: Vec<(Index, u64)> = image
            .iter()
            .enumerate()
            .filter(|(_, j)| !seen.contains(*j))
            .map(|(m, j)| (j.clone(), m as u64 + 1))
            .collect();
        seen.extend(image);
        blocks.push(block);
    }
    BlockDecomposition {
        n,
        m_count,
        blocks,
    }
}

/// The term that realized a maximum inside a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundWitness {
    /// Coordinate `j` (decimal), absent for the `‖z‖` bound which is indexed by `m`.
    pub j: Option<String>,
    /// 1-based operator indices `(i, ℓ)`; `i == ℓ` for the `‖z‖` bound.
    pub i: usize,
    pub l: usize,
    pub m: Option<u64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBound {
    /// 1-based operator index.
    pub operator: usize,
    pub bound: f64,
    /// Max of `|W-ratio − a-ratio|` over image overlaps with `ℓ < i`.
    pub overlap_term: Option<BoundWitness>,
    /// Max of `|W-ratio|` over tail overlaps with `ℓ ≠ i`.
    pub tail_term: Option<BoundWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub n: u64,
    pub m_count: u64,
    pub operators: usize,
    pub p: f64,
    /// `Γ = max_i ‖x_i‖`
    pub gamma: f64,
    /// `MNΓ · max |W^{(ℓ)}_{m,n}|^{-1}`
    pub z_norm_bound: f64,
    pub z_norm_witness: Option<BoundWitness>,
    pub error_bounds: Vec<ErrorBound>,
}

fn check_targets<S: Scalar>(targets: &[SparseVector<S>], m_count: u64) -> Result<()> {
    let bound = BigUint::from(m_count);
    for (op, x) in targets.iter().enumerate() {
        if let Some(top) = x.max_index() {
            if top > &bound {
                return Err(Error::TargetBeyondDegree {
                    operator: op + 1,
                    index: top.to_string(),
                    degree: m_count,
                });
            }
        }
        for m in 1..=m_count {
            if x.get_at(m).is_zero_scalar() {
                return Err(Error::ZeroTargetCoefficient {
                    operator: op + 1,
                    index: m,
                });
            }
        }
    }
    Ok(())
}

fn to_f64<R: Real>(v: R) -> f64 {
    v.to_f64_lossy()
}

/// `exp(log)` as `f64`, saturating to infinity.
fn exp_f64<R: Real>(log: R) -> f64 {
    to_f64(log).exp()
}

/// Builds `z` and its bound certificate.
///
/// `N = 1` is accepted and degenerates to `z = Σ a_m / W_{m,n} e_{f^n(m)}`
/// with a zero error bound.
pub fn build_corrector<S: Scalar>(
    ts: &[PseudoShift<S>],
    n: u64,
    m_count: u64,
    targets: &[SparseVector<S>],
    p: S::Real,
) -> Result<(SparseVector<S>, BoundCertificate)> {
    if ts.is_empty() {
        return Err(Error::InvalidArgument("at least one operator is required".into()));
    }
    if targets.len() != ts.len() {
        return Err(Error::TargetCount {
            expected: ts.len(),
            got: targets.len(),
        });
    }
    if n == 0 || m_count == 0 {
        return Err(Error::InvalidArgument("n and M must be at least 1".into()));
    }
    check_targets(targets, m_count)?;

    let maps: Vec<&ShiftMap> = ts.iter().map(|t| t.map()).collect();
    let blocks = disjoint_blocks(&maps, n, m_count);

    let log_coeff = |op: usize, m: u64| -> LogScalar<S> {
        LogScalar::from_scalar(targets[op].get_at(m)).expect("checked nonzero")
    };

    let mut z = SparseVector::zero();
    for (l, block) in blocks.blocks.iter().enumerate() {
        for (j, m) in block {
            let w = ts[l].weight_product_at(*m, n);
            z.set(j.clone(), (log_coeff(l, *m) / w).to_scalar());
        }
    }

    let gamma = targets
        .iter()
        .map(|x| x.p_norm(p))
        .fold(S::Real::zero(), Float::max);
    let scale = to_f64(gamma) * (m_count as f64) * (ts.len() as f64);

    // ‖z‖ ≤ MNΓ max |W^{(ℓ)}_{m,n}|^{-1}
    let mut z_witness: Option<BoundWitness> = None;
    for (l, t) in ts.iter().enumerate() {
        for m in 1..=m_count {
            let inv = exp_f64(-t.weight_product_at(m, n).log_magnitude());
            if z_witness.as_ref().is_none_or(|w| inv > w.value) {
                z_witness = Some(BoundWitness {
                    j: None,
                    i: l + 1,
                    l: l + 1,
                    m: Some(m),
                    value: inv,
                });
            }
        }
    }
    let z_norm_bound = scale * z_witness.as_ref().map_or(0.0, |w| w.value);

    let points = pair_points(ts, n, m_count);
    let mut error_bounds = Vec::with_capacity(ts.len());
    for i in 0..ts.len() {
        let mut overlap: Option<BoundWitness> = None;
        let mut tail: Option<BoundWitness> = None;
        for pt in points.iter().filter(|pt| pt.i == i) {
            let (slot, value) = match pt.membership {
                Membership::Overlap if pt.l < i => {
                    let pre_i = pt.pre_i.to_u64().expect("overlap preimage lies in [M]");
                    let a_ratio = targets[i].get_at(pre_i) / targets[pt.l].get_at(pt.pre_l);
                    let gap = pt
                        .ratio
                        .distance_to(a_ratio)
                        .map_or(f64::INFINITY, to_f64);
                    (&mut overlap, gap)
                }
                Membership::Overlap => continue,
                Membership::Tail => (&mut tail, exp_f64(pt.ratio.log_magnitude())),
            };
            if slot.as_ref().is_none_or(|w| value > w.value) {
                *slot = Some(BoundWitness {
                    j: Some(pt.j.to_string()),
                    i: i + 1,
                    l: pt.l + 1,
                    m: None,
                    value,
                });
            }
        }
        let terms = overlap.as_ref().map_or(0.0, |w| w.value) + tail.as_ref().map_or(0.0, |w| w.value);
        error_bounds.push(ErrorBound {
            operator: i + 1,
            bound: scale * terms,
            overlap_term: overlap,
            tail_term: tail,
        });
    }

    let cert = BoundCertificate {
        n,
        m_count,
        operators: ts.len(),
        p: to_f64(p),
        gamma: to_f64(gamma),
        z_norm_bound,
        z_norm_witness: z_witness,
        error_bounds,
    };
    Ok((z, cert))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub actual: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
    pub all_pass: bool,
}

/// Measures `‖z‖` and `‖T_i^n z − x_i‖` and compares them with `cert`.
///
/// A check passes when `actual ≤ bound + tol·max(1, bound)`.
pub fn verify_bounds<S: Scalar>(
    ts: &[PseudoShift<S>],
    n: u64,
    z: &SparseVector<S>,
    targets: &[SparseVector<S>],
    cert: &BoundCertificate,
    tol: f64,
) -> BoundReport {
    let p = S::Real::from_f64_lossy(cert.p);
    let check = |name: String, actual: f64, bound: f64| BoundCheck {
        pass: actual <= bound + tol * bound.max(1.0),
        name,
        actual,
        bound,
    };
    let mut checks = vec![check("z-norm".into(), to_f64(z.p_norm(p)), cert.z_norm_bound)];
    for (i, (t, x)) in ts.iter().zip(targets).enumerate() {
        let err = t.apply_power(n, z).sub(x).p_norm(p);
        let bound = cert
            .error_bounds
            .get(i)
            .map_or(f64::NAN, |b| b.bound);
        checks.push(check(format!("error-{}", i + 1), to_f64(err), bound));
    }
    let all_pass = checks.iter().all(|c| c.pass);
    BoundReport { checks, all_pass }
}

/// Fills the zero coefficients among the first `M` with `δ / (2 M^{1/p})`,
/// keeping `‖x̃ − x‖_p < δ`. Nonzero coefficients are left untouched.
pub fn perturb_nonzero<S: Scalar>(
    x: &SparseVector<S>,
    m_count: u64,
    delta: S::Real,
    p: S::Real,
) -> Result<SparseVector<S>> {
    if !(delta > S::Real::zero()) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    if x.degree() > m_count {
        return Err(Error::TargetBeyondDegree {
            operator: 1,
            index: x.degree().to_string(),
            degree: m_count,
        });
    }
    let m = S::Real::from_f64_lossy(m_count as f64);
    let two = S::Real::from_f64_lossy(2.0);
    let fill = S::from_real(delta / (two * m.powf(p.recip())));
    let mut out = x.clone();
    for idx in 1..=m_count {
        if x.get_at(idx).is_zero_scalar() {
            out.set(BigUint::from(idx), fill);
        }
    }
    Ok(out)
}
