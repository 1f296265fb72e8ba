//! The built-in oracle suite: closed-form distance checks, simplex-vs-chord
//! agreement, metric axioms, benchmark sweeps for the drift chain and the
//! displacement/translation equality, the Birkhoff bound, the Poincaré
//! horofunction oracle, and the planar verdict suites.
//!
//! Every suite prints one line with its measured quantity, so a captured
//! run is a complete record. Output is a pure function of the seed.

use std::fmt::Write as _;

use anyhow::Result;

use hilbert_dyn::benchmarks::{full_suite, BenchmarkCase};
use hilbert_dyn::conjecture::{conjecture_report, ConjectureReport, ReportConfig, Verdict};
use hilbert_dyn::dynamics::iterate;
use hilbert_dyn::geometry::{ConvexBody, Face, Point};
use hilbert_dyn::horo::{poincare_horofunction, poincare_phi_approx};
use hilbert_dyn::maps::{birkhoff_contraction_bound, certify_nonexpansive, SemicontractionSpec};
use hilbert_dyn::metric::{
    gromov_product, hilbert_distance, simplex_distance, MetricConvention, PoincarePoint,
};
use hilbert_dyn::{sample, Error};

/// arctanh(1/2): the disk oracle distance at scale 1/2.
const DISK_ORACLE: f64 = 0.5493061443340548;

/// Perron eigenvector of [[1,1],[1,2]] (golden-ratio oracle).
const PERRON: [f64; 2] = [0.3819660112501051, 0.6180339887498949];

struct Suite {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn suite(name: &'static str, passed: bool, detail: String) -> Suite {
    Suite { name, passed, detail }
}

fn pt(coords: &[f64]) -> Point {
    Point::new(coords.to_vec()).expect("validate points are valid")
}

struct BenchRun {
    case: BenchmarkCase,
    report: ConjectureReport,
}

fn run_benchmarks(seed: u64) -> Result<Vec<BenchRun>> {
    let mut runs = Vec::new();
    for case in full_suite().map_err(|e| anyhow::anyhow!("{e}"))? {
        let config = ReportConfig {
            max_iter: case.max_iter,
            conv: case.conv,
            seed,
            probes: 1500,
            beardon: false,
            ..ReportConfig::default()
        };
        let report = conjecture_report(&case.map, &case.body, &case.start, &config)
            .map_err(|e| anyhow::anyhow!("{}: {e}", case.name))?;
        runs.push(BenchRun { case, report });
    }
    Ok(runs)
}

fn disk_oracle_suite() -> Result<Suite> {
    let disk = ConvexBody::unit_ball(2).map_err(|e| anyhow::anyhow!("{e}"))?;
    let d = hilbert_distance(
        &disk,
        &pt(&[0.0, 0.0]),
        &pt(&[0.5, 0.0]),
        MetricConvention::half(),
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let err = (d - DISK_ORACLE).abs();
    Ok(suite(
        "disk metric oracle",
        err <= 1e-9,
        format!("err={err:.3e} (tol 1e-9)"),
    ))
}

fn simplex_vs_chord_suite(seed: u64, inject_scale_mismatch: bool) -> Result<Suite> {
    let conv = if inject_scale_mismatch {
        MetricConvention::half()
    } else {
        MetricConvention::one()
    };
    let mut max_diff = 0.0f64;
    for n in 2..=4usize {
        let body = ConvexBody::standard_simplex(n).map_err(|e| anyhow::anyhow!("{e}"))?;
        let mut rng = sample::rng(seed.wrapping_add(n as u64));
        for _ in 0..1000 {
            let x = sample::interior_point(&body, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;
            let y = sample::interior_point(&body, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;
            let closed = simplex_distance(&x, &y).map_err(|e| anyhow::anyhow!("{e}"))?;
            let chord =
                hilbert_distance(&body, &x, &y, conv).map_err(|e| anyhow::anyhow!("{e}"))?;
            max_diff = max_diff.max((closed - chord).abs());
        }
    }
    Ok(suite(
        "simplex closed form vs chord",
        max_diff <= 1e-8,
        format!("max_diff={max_diff:.3e} (tol 1e-8, 3000 pairs)"),
    ))
}

fn metric_axioms_suite(seed: u64) -> Result<Suite> {
    let bodies = vec![
        ConvexBody::unit_ball(2).map_err(|e| anyhow::anyhow!("{e}"))?,
        ConvexBody::cube(2, 1.0).map_err(|e| anyhow::anyhow!("{e}"))?,
        ConvexBody::standard_simplex(3).map_err(|e| anyhow::anyhow!("{e}"))?,
        ConvexBody::intersection(vec![
            ConvexBody::unit_ball(2).map_err(|e| anyhow::anyhow!("{e}"))?,
            ConvexBody::cube(2, 0.8).map_err(|e| anyhow::anyhow!("{e}"))?,
        ])
        .map_err(|e| anyhow::anyhow!("{e}"))?,
    ];
    let conv = MetricConvention::one();
    let mut max_asym = 0.0f64;
    let mut max_tri = 0.0f64;
    let mut min_d = f64::INFINITY;
    for (bi, body) in bodies.iter().enumerate() {
        let mut rng = sample::rng(seed.wrapping_add(100 + bi as u64));
        for _ in 0..2500 {
            let x = sample::interior_point(body, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;
            let y = sample::interior_point(body, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;
            let z = sample::interior_point(body, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;
            let dxy = hilbert_distance(body, &x, &y, conv).map_err(|e| anyhow::anyhow!("{e}"))?;
            let dyx = hilbert_distance(body, &y, &x, conv).map_err(|e| anyhow::anyhow!("{e}"))?;
            let dxz = hilbert_distance(body, &x, &z, conv).map_err(|e| anyhow::anyhow!("{e}"))?;
            let dzy = hilbert_distance(body, &z, &y, conv).map_err(|e| anyhow::anyhow!("{e}"))?;
            max_asym = max_asym.max((dxy - dyx).abs());
            max_tri = max_tri.max(dxy - dxz - dzy);
            min_d = min_d.min(dxy);
        }
    }
    let passed = max_asym <= 1e-12 && max_tri <= 1e-9 && min_d >= 0.0;
    Ok(suite(
        "metric axioms",
        passed,
        format!("asym={max_asym:.3e} tri_violation={max_tri:.3e} (tol 1e-9, 10000 triples)"),
    ))
}

fn find_run<'a>(runs: &'a [BenchRun], name: &str) -> Result<&'a BenchRun> {
    runs.iter()
        .find(|r| r.case.name == name)
        .ok_or_else(|| anyhow::anyhow!("missing benchmark {name}"))
}

fn perron_suite(runs: &[BenchRun]) -> Result<Suite> {
    let run = find_run(runs, "simplex_perron")?;
    let orbit = iterate(
        &run.case.map,
        &run.case.start,
        &run.case.body,
        60,
        run.case.conv,
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let last = orbit.last();
    let err = (last[0] - PERRON[0]).abs().max((last[1] - PERRON[1]).abs());
    let passed = err <= 1e-6 && run.report.limit.verdict == Verdict::FixedPoint;
    Ok(suite(
        "perron fixed point",
        passed,
        format!(
            "err={err:.3e} (tol 1e-6) verdict={}",
            run.report.limit.verdict.as_str()
        ),
    ))
}

fn diag_escape_suite(runs: &[BenchRun]) -> Result<Suite> {
    let run = find_run(runs, "simplex_diag21")?;
    let ln2 = std::f64::consts::LN_2;
    let est = run
        .report
        .estimates
        .ok_or_else(|| anyhow::anyhow!("diag21 lacks estimates"))?;
    let cert = run
        .report
        .certificate
        .ok_or_else(|| anyhow::anyhow!("diag21 lacks a certificate"))?;
    let tau_err = (est.tau_hat - ln2).abs();
    let d_err = (est.d_upper - ln2).abs();
    let face_ok = matches!(
        &run.report.limit.face,
        Some(Face::Polytope { active, vertices })
            if active == &vec![1]
                && vertices.len() == 1
                && (vertices[0][0] - 1.0).abs() < 1e-9
    );
    // h should be the vertex horofunction log(x2/x1): probe at (1/4, 3/4)
    let body = &run.case.body;
    let orbit = iterate(&run.case.map, &run.case.start, body, 40, run.case.conv)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let certificate = hilbert_dyn::horo::karlsson_certificate(
        &orbit,
        body,
        run.case.conv,
        est.tau_hat,
        &hilbert_dyn::horo::default_epsilons(),
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let probe = pt(&[0.25, 0.75]);
    let h_err = (certificate
        .approximant
        .evaluate(&probe)
        .map_err(|e| anyhow::anyhow!("{e}"))?
        - 3.0f64.ln())
    .abs();
    let passed = tau_err <= 1e-6
        && d_err <= 1e-6
        && run.report.limit.verdict == Verdict::SingleFace
        && face_ok
        && cert.slack <= 1e-6
        && h_err <= 1e-6;
    Ok(suite(
        "diag(2,1) escape",
        passed,
        format!(
            "tau_err={tau_err:.3e} d_err={d_err:.3e} slack={:.3e} h_err={h_err:.3e} verdict={}",
            cert.slack,
            run.report.limit.verdict.as_str()
        ),
    ))
}

fn chain_suite(runs: &[BenchRun]) -> Result<Suite> {
    let mut worst = f64::NEG_INFINITY;
    let mut all_ok = true;
    for run in runs {
        let Some(est) = run.report.estimates else {
            all_ok = false;
            continue;
        };
        let v1 = -est.tau_hat; // tau >= 0
        let v2 = est.tau_hat - est.d_upper - 1e-6;
        let v3 = est.d_upper - est.delta_hat - 1e-6;
        worst = worst.max(v1).max(v2).max(v3);
        if v1 > 0.0 || v2 > 0.0 || v3 > 0.0 {
            all_ok = false;
        }
    }
    Ok(suite(
        "drift chain 0 <= tau <= D <= delta",
        all_ok,
        format!("worst_violation={worst:.3e} over {} maps", runs.len()),
    ))
}

fn gv_suite(runs: &[BenchRun]) -> Result<Suite> {
    let mut max_gap = 0.0f64;
    let mut min_payoff_margin = f64::INFINITY;
    let mut all_ok = true;
    for run in runs {
        let Some(est) = run.report.estimates else { continue };
        if let Some(gv) = run.report.gv {
            max_gap = max_gap.max(gv.d_tau_gap);
            min_payoff_margin = min_payoff_margin.min(gv.horo_payoff - (est.tau_hat - 1e-2));
            if gv.d_tau_gap > 1e-2 || !gv.certificate_witnesses_max {
                all_ok = false;
            }
        } else {
            // no certificate: the equality is still testable through the
            // estimates alone
            let gap = (est.d_upper - est.tau_hat).abs();
            max_gap = max_gap.max(gap);
            if gap > 1e-2 {
                all_ok = false;
            }
        }
    }
    Ok(suite(
        "displacement equals drift",
        all_ok,
        format!("max_gap={max_gap:.3e} (tol 1e-2) min_payoff_margin={min_payoff_margin:.3e}"),
    ))
}

fn birkhoff_suite(seed: u64) -> Result<Suite> {
    let matrix = vec![vec![1.0, 1.0], vec![1.0, 2.0]];
    let map = SemicontractionSpec::projective_linear(matrix.clone())
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let simplex = ConvexBody::standard_simplex(2).map_err(|e| anyhow::anyhow!("{e}"))?;
    let bound = birkhoff_contraction_bound(&matrix).map_err(|e| anyhow::anyhow!("{e}"))?;
    let cert = certify_nonexpansive(&map, &simplex, 10_000, seed, MetricConvention::one())
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let passed = cert.max_ratio >= 0.16 && cert.max_ratio <= bound + 1e-9;
    Ok(suite(
        "birkhoff contraction bound",
        passed,
        format!(
            "max_ratio={:.6} in [0.16, {:.6}+1e-9] (10000 pairs)",
            cert.max_ratio, bound
        ),
    ))
}

fn poincare_suite() -> Result<Suite> {
    let zeta = (1.0, 0.0);
    let mut sup = 0.0f64;
    for i in 0..21 {
        for j in 0..21 {
            let x = -0.5 + i as f64 / 20.0;
            let y = -0.5 + j as f64 / 20.0;
            let z = PoincarePoint::new(x, y).map_err(|e| anyhow::anyhow!("{e}"))?;
            let closed = poincare_horofunction(zeta, z);
            let approx =
                poincare_phi_approx(zeta, 0.9999, z).map_err(|e| anyhow::anyhow!("{e}"))?;
            sup = sup.max((closed - approx).abs());
        }
    }
    let origin = PoincarePoint::new(0.0, 0.0).map_err(|e| anyhow::anyhow!("{e}"))?;
    let at_origin = poincare_horofunction(zeta, origin);
    let passed = sup <= 1e-3 && at_origin == 0.0;
    Ok(suite(
        "poincare horofunction oracle",
        passed,
        format!("sup_grid_err={sup:.3e} (tol 1e-3) h(0)={at_origin:e}"),
    ))
}

fn planar_suite(runs: &[BenchRun]) -> Result<Suite> {
    let mut verdicts = String::new();
    let mut all_ok = true;
    for run in runs.iter().filter(|r| r.case.planar) {
        let v = run.report.limit.verdict;
        if !matches!(v, Verdict::FixedPoint | Verdict::SingleFace) {
            all_ok = false;
        }
        let _ = write!(verdicts, "{}={} ", run.case.name, v.as_str());
    }
    Ok(suite(
        "dimension-2 verdicts",
        all_ok,
        verdicts.trim_end().to_string(),
    ))
}

fn drift_monotone_suite(runs: &[BenchRun]) -> Result<Suite> {
    let mut all_ok = true;
    let mut positive_drift = 0usize;
    let mut monotone = 0usize;
    for run in runs {
        if let Some(est) = run.report.estimates {
            if est.tau_hat > 0.01 {
                positive_drift += 1;
                if run.report.limit.verdict != Verdict::SingleFace {
                    all_ok = false;
                }
            }
        }
        if run.report.monotone_escape {
            monotone += 1;
            if run.report.limit.verdict != Verdict::SingleFace {
                all_ok = false;
            }
        }
    }
    Ok(suite(
        "linear-drift and monotone escapes",
        all_ok,
        format!("positive_drift={positive_drift} monotone={monotone} all SingleFace={all_ok}"),
    ))
}

fn independence_suite(runs: &[BenchRun]) -> Result<Suite> {
    let all_match = runs.iter().all(|r| r.report.perturbed.faces_match);
    let disk = ConvexBody::unit_ball(2).map_err(|e| anyhow::anyhow!("{e}"))?;
    let g = gromov_product(
        &disk,
        &pt(&[0.9, 0.0]),
        &pt(&[-0.9, 0.0]),
        &pt(&[0.0, 0.0]),
        MetricConvention::half(),
    )
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let passed = all_match && g.abs() <= 1e-9;
    Ok(suite(
        "orbit independence",
        passed,
        format!("faces_match_all={all_match} diameter_gromov={g:.3e} (tol 1e-9)"),
    ))
}

fn projective_stability_suite(runs: &[BenchRun], seed: u64) -> Result<Suite> {
    let mut all_ok = true;
    let mut detail = String::new();
    for run in runs {
        if !matches!(run.case.map, SemicontractionSpec::ProjectiveLinear { .. }) {
            continue;
        }
        if !matches!(run.report.limit.verdict, Verdict::SingleFace) {
            continue;
        }
        let counts: Vec<usize> = [200usize, 400]
            .iter()
            .map(|&iters| {
                let config = ReportConfig {
                    max_iter: iters,
                    conv: run.case.conv,
                    seed,
                    probes: 400,
                    beardon: false,
                    ..ReportConfig::default()
                };
                conjecture_report(&run.case.map, &run.case.body, &run.case.start, &config)
                    .map(|r| r.limit.clusters.len())
            })
            .collect::<Result<_, Error>>()
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        if counts[0] != counts[1] {
            all_ok = false;
        }
        let _ = write!(detail, "{}:{}=>{} ", run.case.name, counts[0], counts[1]);
    }
    Ok(suite(
        "projective cluster stability",
        all_ok,
        detail.trim_end().to_string(),
    ))
}

/// Runs every suite, printing one pass/fail line each. Returns true when
/// all suites pass.
pub fn run_validate(
    seed: u64,
    inject_scale_mismatch: bool,
    out: &mut impl std::io::Write,
) -> Result<bool> {
    let runs = run_benchmarks(seed)?;
    let suites = vec![
        disk_oracle_suite()?,
        simplex_vs_chord_suite(seed, inject_scale_mismatch)?,
        metric_axioms_suite(seed)?,
        perron_suite(&runs)?,
        diag_escape_suite(&runs)?,
        chain_suite(&runs)?,
        gv_suite(&runs)?,
        birkhoff_suite(seed)?,
        poincare_suite()?,
        planar_suite(&runs)?,
        drift_monotone_suite(&runs)?,
        independence_suite(&runs)?,
        projective_stability_suite(&runs, seed)?,
    ];
    let total = suites.len();
    let mut passed = 0usize;
    for (i, s) in suites.iter().enumerate() {
        writeln!(
            out,
            "[{:2}/{total}] {:32} {}  {}",
            i + 1,
            s.name,
            if s.passed { "PASS" } else { "FAIL" },
            s.detail
        )?;
        if s.passed {
            passed += 1;
        }
    }
    writeln!(out, "validate: {passed}/{total} suites passed (seed {seed})")?;
    Ok(passed == total)
}
