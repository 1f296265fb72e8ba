//! Limit sets, attractor faces, star witnesses, and per-run verdicts.
//!
//! For a fixed-point-free semicontraction the orbit accumulates on the
//! boundary; the open question is whether the accumulation set always lies
//! in a single closed face. What is provable in general is a star: some
//! boundary point whose segments to every orbit limit point stay in the
//! boundary. This module computes both objects numerically and reports one
//! of four verdicts per run:
//!
//! - `FixedPoint`: the orbit converged inside the domain;
//! - `SingleFace`: one closed face contains every accumulation cluster;
//! - `StarOnly`: no single face was found, but a star witness was;
//! - `Inconclusive`: neither signal (or an undetermined orbit).
//!
//! `StarOnly` is a legitimate outcome in general. The validation suites
//! treat it as a failure only where stronger statements hold: dimension
//! two, positive drift, monotone escape, strictly convex or projective
//! linear benchmarks.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::{
    classify_orbit, drift_estimates, gv_gap, is_monotone_escape, iterate, perturbed_start,
    DriftEstimates, GvGap, Orbit, OrbitClassification, StopReason,
};
use crate::geometry::{Classification, ConvexBody, Face, Point};
use crate::horo::{default_epsilons, karlsson_certificate};
use crate::linalg;
use crate::maps::{banach_fixed_point, beardon_approximant, certify_nonexpansive, SemicontractionSpec};
use crate::metric::{gromov_product, MetricConvention};
use crate::{Error, Result};

/// Verdict of one conjecture run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    FixedPoint,
    SingleFace,
    StarOnly,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::FixedPoint => "FixedPoint",
            Verdict::SingleFace => "SingleFace",
            Verdict::StarOnly => "StarOnly",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// Clustered accumulation points with face and star analysis.
#[derive(Clone, Debug)]
pub struct LimitSetReport {
    /// Boundary representatives of the orbit tail's Euclidean clusters.
    pub clusters: Vec<Point>,
    /// Minimal closed face containing all clusters, when one exists.
    pub face: Option<Face>,
    pub single_face: bool,
    /// A boundary point whose segments to every cluster stay in the
    /// boundary.
    pub star_witness: Option<Point>,
    /// Limit of the averaging-approximant fixed points, when it converged.
    pub beardon_point: Option<Point>,
    pub verdict: Verdict,
    /// Largest Gromov product between paired tail points of the primary and
    /// the perturbed orbit (diverges when both escape to one face).
    pub gromov_sup: f64,
}

/// Tunables for a conjecture run.
#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub max_iter: usize,
    pub conv: MetricConvention,
    pub seed: u64,
    /// Fraction of the orbit used as the clustering tail.
    pub tail_fraction: f64,
    /// Euclidean single-linkage threshold for tail clustering.
    pub cluster_tol: f64,
    /// Boundary tolerance for face identification.
    pub face_tol: f64,
    /// Sample count for boundary-segment tests on smooth bodies.
    pub boundary_samples: usize,
    /// Budget of displacement evaluations for the minimal-displacement
    /// search.
    pub probes: usize,
    /// Start perturbation magnitude for the orbit-independence check.
    pub perturbation: f64,
    /// Whether to compute the Beardon approximant fixed-point trail
    /// (k = 9, 99, 999).
    pub beardon: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            max_iter: 200,
            conv: MetricConvention::one(),
            seed: 7,
            tail_fraction: 0.25,
            cluster_tol: 1e-4,
            face_tol: 1e-7,
            boundary_samples: 33,
            probes: 2000,
            perturbation: 1e-2,
            beardon: true,
        }
    }
}

/// Everything one run produces, for reporting and validation.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub map_id: String,
    pub classification: OrbitClassification,
    pub stop_reason: StopReason,
    /// Number of steps actually taken.
    pub iterations: usize,
    pub limit: LimitSetReport,
    pub estimates: Option<DriftEstimates>,
    pub certificate: Option<CertificateSummary>,
    pub gv: Option<GvGap>,
    pub monotone_escape: bool,
    /// Orbit-independence check from a perturbed start.
    pub perturbed: PerturbationCheck,
}

#[derive(Clone, Copy, Debug)]
pub struct CertificateSummary {
    pub anchor_index: usize,
    pub epsilon: f64,
    pub slack: f64,
    pub checked: usize,
}

#[derive(Clone, Debug)]
pub struct PerturbationCheck {
    pub verdict: Verdict,
    pub face: Option<Face>,
    /// Whether the perturbed run's limit face agrees with the primary one
    /// (vacuously true when neither run escapes).
    pub faces_match: bool,
}

/// Euclidean accumulation clusters of an escaping orbit's tail, projected
/// to the boundary along rays from the interior witness.
///
/// Single-linkage at threshold `cluster_tol`: tail points closer than the
/// threshold (transitively) share a cluster. Representatives are cluster
/// means pushed to the boundary, ordered by first tail appearance.
pub fn limit_set(
    orbit: &Orbit,
    body: &ConvexBody,
    tail_fraction: f64,
    cluster_tol: f64,
) -> Result<Vec<Point>> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidSpec("tail fraction must lie in (0, 1]"));
    }
    if !matches!(
        classify_orbit(orbit, body)?,
        OrbitClassification::Escaping { .. }
    ) {
        return Err(Error::NotEscaping);
    }
    let n = orbit.len();
    let take = (crate::num::ceil(n as f64 * tail_fraction) as usize).clamp(2, n);
    let tail = &orbit.points[n - take..];

    // single-linkage by repeated merging
    let mut assignment: Vec<usize> = (0..tail.len()).collect();
    loop {
        let mut merged = false;
        for i in 0..tail.len() {
            for j in i + 1..tail.len() {
                if assignment[i] != assignment[j]
                    && linalg::dist(tail[i].coords(), tail[j].coords()) <= cluster_tol
                {
                    let (from, to) = (assignment[j].max(assignment[i]), assignment[j].min(assignment[i]));
                    for a in assignment.iter_mut() {
                        if *a == from {
                            *a = to;
                        }
                    }
                    merged = true;
                }
            }
        }
        if !merged {
            break;
        }
    }

    let mut reps: Vec<Point> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (_idx, label) in assignment.iter().enumerate() {
        if seen.contains(label) {
            continue;
        }
        seen.push(*label);
        let members: Vec<&Point> = assignment
            .iter()
            .zip(tail)
            .filter(|(l, _)| *l == label)
            .map(|(_, p)| p)
            .collect();
        let dim = body.dim();
        let mut mean = alloc::vec![0.0; dim];
        for m in &members {
            for (c, v) in mean.iter_mut().zip(m.coords()) {
                *c += v / members.len() as f64;
            }
        }
        let mean_pt = Point::new(mean)?;
        let rep = match body.project_from_witness(&mean_pt) {
            Ok(b) => b,
            // mean collapsed onto the witness: push a member point instead
            Err(Error::DegenerateChord) => {
                body.project_from_witness(members[members.len() - 1])?
            }
            Err(e) => return Err(e),
        };
        reps.push(rep);
    }
    Ok(reps)
}

/// The minimal closed face containing all clusters, when one exists.
///
/// Polytopal bodies intersect the clusters' active constraint sets: a
/// nonempty intersection names the face (every cluster is tight on it by
/// construction). Strictly convex and intersection bodies admit a single
/// face only for a single cluster, reported as an exposed point.
pub fn attractor_face(
    clusters: &[Point],
    body: &ConvexBody,
    face_tol: f64,
) -> Result<(Option<Face>, bool)> {
    if clusters.is_empty() {
        return Err(Error::NotOnBoundary);
    }
    for c in clusters {
        if body.contains(c, face_tol)? != Classification::Boundary {
            return Err(Error::NotOnBoundary);
        }
    }
    if body.is_polytopal() {
        let mut common: Option<Vec<usize>> = None;
        for c in clusters {
            let Face::Polytope { active, .. } = body.minimal_face(c, face_tol)? else {
                unreachable!("polytopal bodies report polytope faces");
            };
            common = Some(match common {
                None => active,
                Some(prev) => prev.into_iter().filter(|i| active.contains(i)).collect(),
            });
        }
        let common = common.unwrap();
        if common.is_empty() {
            return Ok((None, false));
        }
        Ok((Some(body.face_from_active(common)?), true))
    } else {
        if clusters.len() == 1 {
            Ok((Some(Face::Exposed(clusters[0].clone())), true))
        } else {
            Ok((None, false))
        }
    }
}

/// Searches for a boundary point whose segment to every cluster lies in the
/// boundary. Candidates: the clusters themselves, then vertices of faces
/// active at any cluster (polytopal bodies). Returns the first hit; absence
/// is a report state, not an error.
pub fn star_witness(
    clusters: &[Point],
    body: &ConvexBody,
    face_tol: f64,
    samples: usize,
) -> Result<Option<Point>> {
    let mut candidates: Vec<Point> = clusters.to_vec();
    if body.is_polytopal() {
        for c in clusters {
            if let Face::Polytope { vertices, .. } = body.minimal_face(c, face_tol)? {
                for v in vertices {
                    if !candidates
                        .iter()
                        .any(|p| linalg::dist(p.coords(), v.coords()) <= 1e-9)
                    {
                        candidates.push(v);
                    }
                }
            }
        }
    }
    'candidates: for z in &candidates {
        for w in clusters {
            if linalg::dist(z.coords(), w.coords()) <= 1e-12 {
                continue; // degenerate segment
            }
            if !body.segment_in_boundary(z, w, face_tol, samples)? {
                continue 'candidates;
            }
        }
        return Ok(Some(z.clone()));
    }
    Ok(None)
}

fn escape_analysis(
    orbit: &Orbit,
    body: &ConvexBody,
    config: &ReportConfig,
) -> Result<(Vec<Point>, Option<Face>, bool, Option<Point>, Verdict)> {
    let clusters = limit_set(orbit, body, config.tail_fraction, config.cluster_tol)?;
    let (face, single_face) = attractor_face(&clusters, body, config.face_tol)?;
    let star = star_witness(&clusters, body, config.face_tol, config.boundary_samples)?;
    let verdict = if single_face {
        Verdict::SingleFace
    } else if star.is_some() {
        Verdict::StarOnly
    } else {
        Verdict::Inconclusive
    };
    Ok((clusters, face, single_face, star, verdict))
}

fn beardon_trail(
    map: &SemicontractionSpec,
    body: &ConvexBody,
    x0: &Point,
    config: &ReportConfig,
) -> Result<Option<Point>> {
    let mut fixed_points: Vec<Point> = Vec::new();
    for (i, k) in [9usize, 99, 999].into_iter().enumerate() {
        let approx = beardon_approximant(map, x0, k)?;
        let cert = certify_nonexpansive(
            &approx,
            body,
            300,
            config.seed.wrapping_add(1000 + i as u64),
            config.conv,
        )?;
        if cert.max_ratio >= 1.0 {
            return Ok(None);
        }
        let run = banach_fixed_point(&approx, x0, body, 1e-12, 100_000)?;
        if !run.converged {
            return Ok(None);
        }
        fixed_points.push(run.point);
    }
    // y_k drifts like y* + C/(k+1), so the tail beyond y_999 is bounded by
    // the last gap over (1/100 - 1/1000) / (1/1000) = 9
    let gap = linalg::dist(fixed_points[1].coords(), fixed_points[2].coords());
    if gap / 9.0 <= 1e-3 {
        Ok(Some(fixed_points[2].clone()))
    } else {
        Ok(None)
    }
}

/// Runs the full per-map analysis: orbit, classification, drift estimates,
/// limit set, face, star, escape certificate, drift-displacement gap,
/// Beardon trail, and the perturbed-start independence check.
///
/// Component failures that only affect optional diagnostics degrade to
/// absent fields; the verdict itself never panics on inconclusive data.
pub fn conjecture_report(
    map: &SemicontractionSpec,
    body: &ConvexBody,
    x0: &Point,
    config: &ReportConfig,
) -> Result<ConjectureReport> {
    let orbit = iterate(map, x0, body, config.max_iter, config.conv)?;
    let classification = classify_orbit(&orbit, body)?;
    let estimates = match drift_estimates(
        &orbit,
        map,
        body,
        config.probes,
        config.seed,
        config.conv,
    ) {
        Ok(e) => Some(e),
        Err(Error::OrbitTooShort) => None,
        Err(e) => return Err(e),
    };
    let monotone = is_monotone_escape(&orbit, body)?;

    let escaping = matches!(classification, OrbitClassification::Escaping { .. });
    let (clusters, face, single_face, star, mut verdict) = if escaping {
        escape_analysis(&orbit, body, config)?
    } else {
        (Vec::new(), None, false, None, Verdict::Inconclusive)
    };
    if let OrbitClassification::Bounded { .. } = classification {
        if orbit.stop_reason == StopReason::Converged {
            verdict = Verdict::FixedPoint;
        }
    }

    let (certificate, gv) = if escaping {
        match estimates {
            Some(est) => match karlsson_certificate(
                &orbit,
                body,
                config.conv,
                est.tau_hat,
                &default_epsilons(),
            ) {
                Ok(cert) => {
                    let summary = CertificateSummary {
                        anchor_index: cert.anchor_index,
                        epsilon: cert.epsilon,
                        slack: cert.slack,
                        checked: cert.checked,
                    };
                    let gap = gv_gap(&est, Some(&cert), &orbit, 1e-2)?;
                    (Some(summary), Some(gap))
                }
                Err(Error::BoundedOrbitSuspected) | Err(Error::InsufficientLength) => (None, None),
                Err(e) => return Err(e),
            },
            None => (None, None),
        }
    } else {
        (None, None)
    };

    let beardon_point = if config.beardon {
        beardon_trail(map, body, x0, config)?
    } else {
        None
    };

    // orbit independence: re-run from a perturbed start
    let y0 = perturbed_start(body, x0, config.perturbation)?;
    let perturbed_orbit = iterate(map, &y0, body, config.max_iter, config.conv)?;
    let perturbed_class = classify_orbit(&perturbed_orbit, body)?;
    let perturbed_escaping = matches!(perturbed_class, OrbitClassification::Escaping { .. });
    let (p_face, p_verdict) = if perturbed_escaping {
        let (_, f, sf, st, v) = escape_analysis(&perturbed_orbit, body, config)?;
        let _ = (st, sf);
        (f, v)
    } else if perturbed_orbit.stop_reason == StopReason::Converged {
        (None, Verdict::FixedPoint)
    } else {
        (None, Verdict::Inconclusive)
    };
    // exposed-point faces of finite orbits agree only to the convergence
    // depth, so point coincidence is judged at 1e-3; polytope faces
    // compare by exact active sets
    let faces_match = match (&face, &p_face) {
        (Some(a), Some(b)) => a.same(b, 1e-3),
        (None, None) => !(escaping ^ perturbed_escaping),
        _ => false,
    };

    // Gromov products between paired tail points, basepoint x0
    let mut gromov_sup = 0.0f64;
    let n = orbit.len().min(perturbed_orbit.len());
    for k in n / 2..n {
        match gromov_product(
            body,
            &orbit.points[k],
            &perturbed_orbit.points[k],
            x0,
            config.conv,
        ) {
            Ok(g) => gromov_sup = gromov_sup.max(g),
            Err(Error::DistanceOverflow) => break,
            Err(e) => return Err(e),
        }
    }

    Ok(ConjectureReport {
        map_id: orbit.map_id.clone(),
        classification,
        stop_reason: orbit.stop_reason,
        iterations: orbit.len() - 1,
        limit: LimitSetReport {
            clusters,
            face,
            single_face,
            star_witness: star,
            beardon_point,
            verdict,
            gromov_sup,
        },
        estimates,
        certificate,
        gv,
        monotone_escape: monotone,
        perturbed: PerturbationCheck { verdict: p_verdict, face: p_face, faces_match },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    fn diag(entries: &[f64]) -> SemicontractionSpec {
        let n = entries.len();
        let mut m = vec![vec![0.0; n]; n];
        for (i, e) in entries.iter().enumerate() {
            m[i][i] = *e;
        }
        SemicontractionSpec::projective_linear(m).unwrap()
    }

    fn quick_config() -> ReportConfig {
        ReportConfig { max_iter: 40, probes: 600, beardon: false, ..ReportConfig::default() }
    }

    #[test]
    fn diag_limit_set_is_the_vertex() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let conv = MetricConvention::one();
        let orbit = iterate(&diag(&[2.0, 1.0]), &pt(&[0.5, 0.5]), &simplex, 40, conv).unwrap();
        let clusters = limit_set(&orbit, &simplex, 0.25, 1e-4).unwrap();
        assert_eq!(clusters.len(), 1);
        assert!(linalg::dist(clusters[0].coords(), &[1.0, 0.0]) < 1e-9);
    }

    #[test]
    fn diag3_limit_set_is_the_edge_midpoint() {
        let simplex = ConvexBody::standard_simplex(3).unwrap();
        let conv = MetricConvention::one();
        let third = 1.0 / 3.0;
        let orbit = iterate(
            &diag(&[2.0, 2.0, 1.0]),
            &pt(&[third, third, third]),
            &simplex,
            40,
            conv,
        )
        .unwrap();
        let clusters = limit_set(&orbit, &simplex, 0.25, 1e-4).unwrap();
        assert_eq!(clusters.len(), 1);
        assert!(linalg::dist(clusters[0].coords(), &[0.5, 0.5, 0.0]) < 1e-9);
        let (face, single) = attractor_face(&clusters, &simplex, 1e-7).unwrap();
        assert!(single);
        match face.unwrap() {
            Face::Polytope { active, vertices } => {
                assert_eq!(active, vec![2]);
                assert_eq!(vertices.len(), 2);
            }
            _ => panic!("expected a polytope face"),
        }
    }

    #[test]
    fn limit_set_rejects_bounded_orbits() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let conv = MetricConvention::one();
        let orbit = iterate(
            &SemicontractionSpec::Identity,
            &pt(&[0.5, 0.5]),
            &simplex,
            10,
            conv,
        )
        .unwrap();
        assert_eq!(
            limit_set(&orbit, &simplex, 0.25, 1e-4).unwrap_err(),
            Error::NotEscaping
        );
    }

    #[test]
    fn attractor_face_synthetic_cases() {
        let simplex = ConvexBody::standard_simplex(3).unwrap();
        // two vertices of a common edge: that closed edge contains both
        let two = [pt(&[1.0, 0.0, 0.0]), pt(&[0.0, 1.0, 0.0])];
        let (face, single) = attractor_face(&two, &simplex, 1e-7).unwrap();
        assert!(single);
        match face.unwrap() {
            Face::Polytope { active, .. } => assert_eq!(active, vec![2]),
            _ => panic!(),
        }
        // all three vertices span the whole boundary: no proper closed face
        let three = [
            pt(&[1.0, 0.0, 0.0]),
            pt(&[0.0, 0.0, 1.0]),
            pt(&[0.0, 1.0, 0.0]),
        ];
        let (face, single) = attractor_face(&three, &simplex, 1e-7).unwrap();
        assert!(!single);
        assert!(face.is_none());
        // a single disk cluster is an exposed point
        let disk = ConvexBody::unit_ball(2).unwrap();
        let one = [pt(&[1.0, 0.0])];
        let (face, single) = attractor_face(&one, &disk, 1e-7).unwrap();
        assert!(single);
        assert_eq!(face.unwrap(), Face::Exposed(pt(&[1.0, 0.0])));
    }

    #[test]
    fn star_witness_cases() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let single = [pt(&[1.0, 0.0])];
        let star = star_witness(&single, &disk, 1e-7, 33).unwrap();
        assert_eq!(star.unwrap(), pt(&[1.0, 0.0]));

        // two adjacent square edges meet at a corner: the corner is a star
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let clusters = [pt(&[1.0, 0.5]), pt(&[0.5, 1.0])];
        let star = star_witness(&clusters, &sq, 1e-7, 33).unwrap().unwrap();
        assert!(linalg::dist(star.coords(), &[1.0, 1.0]) < 1e-9);

        // opposite edges of the square share no boundary segment to one point
        let opposite = [pt(&[1.0, 0.0]), pt(&[-1.0, 0.0])];
        assert!(star_witness(&opposite, &sq, 1e-7, 33).unwrap().is_none());
    }

    #[test]
    fn report_diag_single_face() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let report = conjecture_report(
            &diag(&[2.0, 1.0]),
            &simplex,
            &pt(&[0.5, 0.5]),
            &quick_config(),
        )
        .unwrap();
        assert_eq!(report.limit.verdict, Verdict::SingleFace);
        assert!(report.monotone_escape);
        let est = report.estimates.unwrap();
        assert!((est.tau_hat - core::f64::consts::LN_2).abs() < 1e-6);
        let cert = report.certificate.unwrap();
        assert!(cert.slack.abs() < 1e-6);
        let gv = report.gv.unwrap();
        assert!(gv.d_tau_gap < 1e-6);
        assert!((gv.horo_payoff - core::f64::consts::LN_2).abs() < 1e-6);
        assert!(gv.certificate_witnesses_max);
        assert!(report.perturbed.faces_match);
        match report.limit.face.unwrap() {
            Face::Polytope { active, vertices } => {
                assert_eq!(active, vec![1]);
                assert_eq!(vertices, vec![pt(&[1.0, 0.0])]);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn report_perron_fixed_point() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let map =
            SemicontractionSpec::projective_linear(vec![vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let config = ReportConfig { max_iter: 60, probes: 600, ..ReportConfig::default() };
        let report = conjecture_report(&map, &simplex, &pt(&[0.5, 0.5]), &config).unwrap();
        assert_eq!(report.limit.verdict, Verdict::FixedPoint);
        assert!(report.limit.clusters.is_empty());
        assert!(report.certificate.is_none());
        assert!(report.perturbed.faces_match);
        // Beardon trail exists for a genuinely contracting map and lands
        // near the Perron point
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let perron = [1.0 / (1.0 + phi), phi / (1.0 + phi)];
        let bp = report.limit.beardon_point.expect("trail should converge");
        assert!(linalg::dist(bp.coords(), &perron) < 1e-2);
    }

    #[test]
    fn report_elliptic_rotation_fixed_point() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let theta = core::f64::consts::SQRT_2;
        let rot = SemicontractionSpec::klein_projective(
            vec![
                vec![theta.cos(), -theta.sin(), 0.0],
                vec![theta.sin(), theta.cos(), 0.0],
                vec![0.0, 0.0, 1.0],
            ],
            &disk,
            3,
            300,
        )
        .unwrap();
        let config = ReportConfig {
            conv: MetricConvention::half(),
            beardon: false,
            probes: 400,
            ..ReportConfig::default()
        };
        let report = conjecture_report(&rot, &disk, &pt(&[0.0, 0.0]), &config).unwrap();
        assert_eq!(report.limit.verdict, Verdict::FixedPoint);
    }
}
