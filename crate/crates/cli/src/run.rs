//! Command dispatch.

use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde_json::{json, Value};

use pseudoshift::config::{scalars_from_reprs, ScalarField, ScalarRepr};
use pseudoshift::criteria::{
    check_dcriterion_condition, check_dhc_condition_b, check_divergence, check_hereditary_powers,
    check_scriterion_condition, check_shc_condition_b, check_weighted_s_ratio, salas_direct_sum,
    structural_dcriterion_blocker, ConditionId, CriterionCertificate, NkSchedule, ScalarFamily,
    SearchParams, Verdict,
};
use pseudoshift::gallery::{
    construct_dhc_weighted_pair, counterexample_direct_sum, counterexample_shifts, rolewicz,
    shc_failure_witness, GalleryInstance,
};
use pseudoshift::orbit::{blowup_collapse_assemble, density_report, joint_orbit, AssemblyParams};
use pseudoshift::{build_corrector, verify_bounds, Error, PseudoShift, Real, Scalar, SparseVector, TupleSpec};

use crate::config::{CheckSection, Command, ConstructSection, GalleryName, GallerySection, OrbitSection, RunConfig};
use crate::error::{CliError, CliResult};
use crate::report::{Payload, Report, Status};

/// Probe depth used to decide whether two maps coincide.
const MAP_PROBE_DEPTH: u64 = 256;

/// Default `K` bound when neither the config nor `--k-bound` gives one.
const DEFAULT_K_BOUND: u64 = 32;

fn verdict_status(v: &Verdict) -> CliResult<Status> {
    match v {
        Verdict::Verified { .. } => Ok(Status::Verified),
        Verdict::Refuted { .. } => Ok(Status::Refuted),
        Verdict::Exhausted { k_from, k_bound } => Err(CliError::Input(format!(
            "check.k_bound: search window [{k_from}, {k_bound}] contains no n_k"
        ))),
    }
}

fn input(e: Error, field: &str) -> CliError {
    match e {
        Error::Config(msg) => CliError::Input(format!("{field}.{msg}")),
        other => CliError::Input(format!("{field}: {other}")),
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    let start = Instant::now();
    cfg.validate()?;
    let (status, result) = match cfg.command {
        Command::Gallery => gallery(cfg, cfg.gallery.as_ref().expect("validated"))?,
        _ => {
            let tuple = cfg.tuple.as_ref().expect("validated");
            match tuple.scalar {
                ScalarField::Real => run_tuple::<f64>(cfg, tuple)?,
                ScalarField::Complex => run_tuple::<Complex64>(cfg, tuple)?,
            }
        }
    };
    Ok(Report {
        payload: Payload::new(cfg.command.as_str(), status, Some(cfg.clone()), result),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn run_tuple<S: Scalar>(cfg: &RunConfig, tuple: &TupleSpec) -> CliResult<(Status, Value)> {
    let ts: Vec<PseudoShift<S>> = tuple.build().map_err(|e| input(e, "tuple"))?;
    let p = S::Real::from_f64_lossy(tuple.p);
    match cfg.command {
        Command::Check => check(cfg, cfg.check.as_ref().expect("validated"), &ts),
        Command::Construct => construct(cfg, cfg.construct.as_ref().expect("validated"), &ts, p),
        Command::Orbit => orbit(cfg.orbit.as_ref().expect("validated"), &ts, p),
        Command::Gallery => unreachable!("gallery runs without a tuple"),
    }
}

fn search_params(cfg: &RunConfig, c: &CheckSection) -> SearchParams {
    let nks = c
        .nks
        .clone()
        .map_or(NkSchedule::Identity, NkSchedule::Explicit);
    let k_bound = c.k_bound.unwrap_or(match &c.nks {
        Some(v) => v.len() as u64,
        None => DEFAULT_K_BOUND,
    });
    let params = SearchParams::new(c.epsilon.unwrap_or(1.0), c.k_from, k_bound, c.m, nks);
    match cfg.tol {
        Some(t) => params.with_tol(t),
        None => params,
    }
}

fn check<S: Scalar>(cfg: &RunConfig, c: &CheckSection, ts: &[PseudoShift<S>]) -> CliResult<(Status, Value)> {
    let params = search_params(cfg, c);
    let lib = |e: Error| input(e, "check");
    let single = |cert: CriterionCertificate| -> CliResult<(Status, Value)> {
        Ok((verdict_status(&cert.verdict)?, json!({ "certificate": cert })))
    };
    match c.condition {
        ConditionId::DhcA => {
            let m = BigUint::from(c.m);
            let nks: Vec<u64> = params.window().into_iter().map(|(_, n)| n).collect();
            let threshold = c.threshold.or(c.epsilon.map(f64::recip)).unwrap_or(1e3);
            let certs: Vec<CriterionCertificate> = ts
                .iter()
                .map(|t| check_divergence(t, &m, &nks, threshold, params.tol))
                .collect();
            let mut status = Status::Verified;
            for cert in &certs {
                if verdict_status(&cert.verdict)? == Status::Refuted {
                    status = Status::Refuted;
                }
            }
            Ok((status, json!({ "certificates": certs })))
        }
        ConditionId::DhcB => {
            let rows = c
                .family
                .as_ref()
                .ok_or_else(|| CliError::Input("check.family: required by `dhc-b`".into()))?;
            let rows = rows
                .iter()
                .enumerate()
                .map(|(i, r)| scalars_from_reprs::<S>(r, &format!("check.family[{i}]")))
                .collect::<pseudoshift::Result<Vec<_>>>()
                .map_err(lib)?;
            single(check_dhc_condition_b(ts, &ScalarFamily::Matrix(rows), &params).map_err(lib)?)
        }
        ConditionId::ShcB => {
            let row = c
                .row
                .as_ref()
                .ok_or_else(|| CliError::Input("check.row: required by `shc-b`".into()))?;
            let row = scalars_from_reprs::<S>(row, "check.row").map_err(lib)?;
            single(check_shc_condition_b(ts, &ScalarFamily::Row(row), &params).map_err(lib)?)
        }
        ConditionId::DcritB => {
            let cert = check_dcriterion_condition(ts, &params).map_err(lib)?;
            let status = verdict_status(&cert.verdict)?;
            let blocker = structural_dcriterion_blocker(ts, MAP_PROBE_DEPTH);
            Ok((status, json!({ "certificate": cert, "structural_blocker": blocker })))
        }
        ConditionId::ScritB => single(check_scriterion_condition(ts, &params).map_err(lib)?),
        ConditionId::SRatio => {
            single(check_weighted_s_ratio(ts, &params, c.first_m.unwrap_or(1)).map_err(lib)?)
        }
        ConditionId::Hereditary => {
            let powers = c
                .powers
                .as_ref()
                .ok_or_else(|| CliError::Input("check.powers: required by `hereditary`".into()))?;
            if let Some(i) = ts.iter().position(|t| !t.is_weighted_shift()) {
                return Err(input(Error::NotWeightedShift { index: i + 1 }, "tuple.operators"));
            }
            let weights: Vec<_> = ts.iter().map(|t| t.weights().clone()).collect();
            single(check_hereditary_powers(&weights, powers, &params).map_err(lib)?)
        }
        ConditionId::Salas => {
            let n_max = c.n_max.unwrap_or(params.k_bound);
            let rep = salas_direct_sum(ts, n_max).map_err(lib)?;
            let status = if rep.diverging { Status::Verified } else { Status::Refuted };
            Ok((status, json!({ "salas": rep })))
        }
    }
}

fn dense<S: Scalar>(coeffs: &[ScalarRepr], field: &str) -> CliResult<SparseVector<S>> {
    let v = scalars_from_reprs::<S>(coeffs, field).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(SparseVector::from_coefficients(&v))
}

fn triples<S: Scalar>(x: &SparseVector<S>) -> Vec<(String, f64, f64)> {
    x.iter()
        .map(|(j, v)| {
            let (re, im) = v.to_parts();
            (j.to_string(), re, im)
        })
        .collect()
}

fn construct<S: Scalar>(
    cfg: &RunConfig,
    c: &ConstructSection,
    ts: &[PseudoShift<S>],
    p: S::Real,
) -> CliResult<(Status, Value)> {
    let targets = c
        .targets
        .iter()
        .enumerate()
        .map(|(i, t)| dense::<S>(t, &format!("construct.targets[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    let (z, cert) = build_corrector(ts, c.n, c.m, &targets, p).map_err(|e| input(e, "construct"))?;
    let report = verify_bounds(ts, c.n, &z, &targets, &cert, cfg.tol.unwrap_or(1e-9));
    let status = if report.all_pass { Status::Success } else { Status::Failure };
    Ok((status, json!({ "z": triples(&z), "certificate": cert, "bounds": report })))
}

fn orbit<S: Scalar>(o: &OrbitSection, ts: &[PseudoShift<S>], p: S::Real) -> CliResult<(Status, Value)> {
    let targets = o
        .targets
        .iter()
        .enumerate()
        .map(|(i, t)| dense::<S>(t, &format!("orbit.targets[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    let params = AssemblyParams {
        schedule: o.schedule.iter().map(|e| S::Real::from_f64_lossy(*e)).collect(),
        n_search_bound: o.n_search_bound,
        p,
    };
    match blowup_collapse_assemble(ts, &targets, &params) {
        Ok((x, log)) => {
            let n_max = log.steps.last().map_or(0, |s| s.n);
            let eps = o.schedule.first().copied().unwrap_or(1.0);
            let density: Vec<_> = joint_orbit(ts, &x, n_max, log.d)
                .iter()
                .map(|pts| density_report(pts, &targets, eps, log.d, p))
                .collect();
            if let Some(path) = &o.csv {
                std::fs::write(path, log.to_csv()).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            let status = if log.all_within_schedule() { Status::Success } else { Status::Failure };
            Ok((status, json!({ "x": triples(&x), "visits": log, "density": density })))
        }
        Err(Error::Construction(msg)) => Ok((Status::Failure, json!({ "failure": msg }))),
        Err(e) => Err(input(e, "orbit")),
    }
}

fn gallery(cfg: &RunConfig, g: &GallerySection) -> CliResult<(Status, Value)> {
    let lib = |e: Error| input(e, "gallery");
    match g.name {
        GalleryName::DoublingPair => {
            let beta = g.beta.unwrap_or(2.0);
            let k_max = g.k_max.unwrap_or(3);
            let targets = g.targets.clone().unwrap_or_default();
            let pair = construct_dhc_weighted_pair::<f64>(beta, &targets, k_max).map_err(lib)?;
            let inst = GalleryInstance::doubling_pair(&pair).map_err(lib)?;
            let ts = &inst.operators;
            let tol = cfg.tol.unwrap_or(1e-12);

            let eps = g.epsilon.unwrap_or(0.5);
            let mut scrit = Vec::new();
            let mut scrit_ok = true;
            let mut witnesses = Vec::new();
            for (k, &n) in pair.nks.iter().enumerate() {
                let params = SearchParams::new(eps, 1, 1, 2, NkSchedule::Explicit(vec![n])).with_tol(tol);
                let cert = check_scriterion_condition(ts, &params).map_err(lib)?;
                scrit_ok &= cert.verdict.is_refuted();
                if n >= 2 {
                    let (j, (a, b)) = shc_failure_witness(n, 2).map_err(lib)?;
                    witnesses.push(json!({ "k": k + 1, "n_k": n, "j": j.to_string(), "preimages": [a.to_string(), b.to_string()] }));
                }
                scrit.push(cert);
            }

            let mut shc = Vec::new();
            let mut shc_ok = true;
            for (idx, gamma) in pair.targets.iter().enumerate() {
                let k = idx as u64 + 1;
                let m = 1u64 << k;
                let mut row = vec![1.0; m as usize];
                row[0] = *gamma;
                let params = SearchParams::new(2.0 / k as f64, k, k, m, NkSchedule::Explicit(pair.nks.clone()))
                    .with_tol(tol);
                let cert = check_shc_condition_b(ts, &ScalarFamily::Row(row), &params).map_err(lib)?;
                shc_ok &= cert.verdict.is_verified();
                shc.push(cert);
            }
            let ok = pair.verified() && scrit_ok && shc_ok;
            let config = inst.to_config(2.0).to_toml().map_err(lib)?;
            Ok((
                if ok { Status::Success } else { Status::Failure },
                json!({
                    "beta": beta,
                    "nks": pair.nks,
                    "targets": pair.targets,
                    "stretch": pair.stretch,
                    "construction_checks": pair.checks,
                    "s_criterion": scrit,
                    "s_criterion_witnesses": witnesses,
                    "shc": shc,
                    "config": config,
                }),
            ))
        }
        GalleryName::ShiftCounterexample => {
            let alpha = g.alpha.unwrap_or(2.0);
            let beta = g.beta.unwrap_or(3.0);
            let n_max = g.n_max.unwrap_or(100);
            let eps = g.epsilon.unwrap_or(0.25);
            let rep = counterexample_direct_sum(alpha, beta, n_max).map_err(lib)?;
            let ts = counterexample_shifts(alpha, beta).map_err(lib)?;
            let params = SearchParams::new(eps, 1, g.k_max.unwrap_or(DEFAULT_K_BOUND), 1, NkSchedule::Identity)
                .with_tol(cfg.tol.unwrap_or(1e-12));
            let cert = check_weighted_s_ratio(&ts, &params, 1).map_err(lib)?;
            let expected_refuted = eps <= rep.gap.max(rep.reverse_gap);
            let ok = rep.salas.diverging && cert.verdict.is_refuted() == expected_refuted;
            let config = TupleSpec::from_operators(&ts, 2.0).to_toml().map_err(lib)?;
            Ok((
                if ok { Status::Success } else { Status::Failure },
                json!({ "counterexample": rep, "s_ratio": cert, "config": config }),
            ))
        }
        GalleryName::Rolewicz => {
            let lambda = g.lambda.unwrap_or(ScalarRepr::Real(2.0));
            let n_max = g.n_max.unwrap_or(64);
            let threshold = g.epsilon.map_or(1e3, f64::recip);
            let rep = match lambda {
                ScalarRepr::Real(v) => rolewicz(v, n_max, threshold),
                ScalarRepr::Complex([re, im]) => rolewicz(Complex64::new(re, im), n_max, threshold),
            }
            .map_err(lib)?;
            let ok = rep.diverging == (rep.lambda_modulus > 1.0);
            Ok((if ok { Status::Success } else { Status::Failure }, json!({ "rolewicz": rep })))
        }
    }
}
