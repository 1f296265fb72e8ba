//! The built-in benchmark catalog used by the validation suites.
//!
//! Ten planar maps on {square, triangle, pentagon, disk} plus seven cone
//! maps on standard simplices. Every case is a certified semicontraction
//! (affine and projective self-maps inherit nonexpansiveness from
//! cross-ratio invariance plus domain inclusion; cone maps are
//! order-preserving and homogeneous), and every case is engineered to end
//! in a definite verdict: strict contractions converge, the others escape.
//!
//! Escape depths on smooth and polytopal bodies are capped so that final
//! slacks stay above ~2e-7: beyond that, boundary slacks lose so much
//! relative precision in double arithmetic that cached distances drift
//! more than the 1e-9 the orbit invariants allow. Simplex orbits are exempt
//! (their slacks are coordinates, exact at any depth), so they run to the
//! 1e-12 proximity stop.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::conjecture::Verdict;
use crate::geometry::{ConvexBody, Point};
use crate::linalg;
use crate::maps::{SemicontractionSpec, TopicalOp, TopicalRow};
use crate::metric::MetricConvention;
use crate::num;
use crate::Result;

/// Seed for the construction-time certification of projective matrices.
const CERT_SEED: u64 = 1009;
const CERT_SAMPLES: usize = 1000;

/// One catalog entry.
#[derive(Clone, Debug)]
pub struct BenchmarkCase {
    pub name: &'static str,
    pub body_label: &'static str,
    pub body: ConvexBody,
    pub map: SemicontractionSpec,
    pub start: Point,
    pub conv: MetricConvention,
    pub max_iter: usize,
    /// The verdict this case is engineered to reach.
    pub expected: Verdict,
    /// Member of the dimension-2 suite (planar bodies).
    pub planar: bool,
}

fn pt(coords: &[f64]) -> Point {
    Point::new(coords.to_vec()).expect("catalog points are valid")
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = (0..n).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat_inv(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let rows: Vec<&[f64]> = a.iter().map(|r| r.as_slice()).collect();
    let mut out = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = linalg::solve(&rows, &e).expect("catalog matrices are invertible");
        for i in 0..n {
            out[i][j] = col[i];
        }
    }
    out
}

/// Homogeneous 3x3 matrix of the planar affine map `x -> m x + b`.
fn affine2(m: [[f64; 2]; 2], b: [f64; 2]) -> Vec<Vec<f64>> {
    vec![
        vec![m[0][0], m[0][1], b[0]],
        vec![m[1][0], m[1][1], b[1]],
        vec![0.0, 0.0, 1.0],
    ]
}

fn rotation2(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (num::sin(theta), num::cos(theta));
    [[c, -s], [s, c]]
}

/// Klein-chart boost along the x axis with rapidity `t`.
fn boost_x(t: f64) -> Vec<Vec<f64>> {
    let (ch, sh) = (num::cosh(t), num::sinh(t));
    vec![
        vec![ch, 0.0, sh],
        vec![0.0, 1.0, 0.0],
        vec![sh, 0.0, ch],
    ]
}

fn triangle_vertices() -> [[f64; 2]; 3] {
    [[1.0, 0.0], [-0.6, 0.9], [-0.7, -0.8]]
}

fn klein(matrix: Vec<Vec<f64>>, body: &ConvexBody) -> SemicontractionSpec {
    SemicontractionSpec::klein_projective(matrix, body, CERT_SEED, CERT_SAMPLES)
        .expect("catalog projective maps map their bodies into themselves")
}

fn diag_matrix(entries: &[f64]) -> Vec<Vec<f64>> {
    let n = entries.len();
    let mut m = vec![vec![0.0; n]; n];
    for (i, e) in entries.iter().enumerate() {
        m[i][i] = *e;
    }
    m
}

/// The ten-map planar suite on {disk, square, triangle, pentagon}.
pub fn two_dimensional_suite() -> Result<Vec<BenchmarkCase>> {
    let disk = ConvexBody::unit_ball(2)?;
    let square = ConvexBody::cube(2, 1.0)?;
    let triangle = ConvexBody::polygon(&triangle_vertices())?;
    let pentagon = ConvexBody::regular_polygon(5, 1.0)?;
    let half = MetricConvention::half();

    let mut cases = Vec::new();

    // elliptic isometry, started at its fixed point
    cases.push(BenchmarkCase {
        name: "disk_rotation",
        body_label: "disk",
        map: klein(affine2(rotation2(core::f64::consts::SQRT_2), [0.0, 0.0]), &disk),
        body: disk.clone(),
        start: pt(&[0.0, 0.0]),
        conv: half,
        max_iter: 50,
        expected: Verdict::FixedPoint,
        planar: true,
    });

    // hyperbolic translation toward (1, 0)
    cases.push(BenchmarkCase {
        name: "disk_boost",
        body_label: "disk",
        map: klein(boost_x(0.5), &disk),
        body: disk.clone(),
        start: pt(&[0.0, 0.0]),
        conv: half,
        max_iter: 15,
        expected: Verdict::SingleFace,
        planar: true,
    });

    // averaging toward the boundary point (1, 0): escapes radially, so the
    // tail clusters tightly while the slack stays in the trustable band
    cases.push(BenchmarkCase {
        name: "disk_edge_avg",
        body_label: "disk",
        map: klein(affine2([[0.7, 0.0], [0.0, 0.7]], [0.3, 0.0]), &disk),
        body: disk.clone(),
        start: pt(&[0.1, -0.2]),
        conv: half,
        max_iter: 40,
        expected: Verdict::SingleFace,
        planar: true,
    });

    // affine contraction of the square toward (0.3, 0.3)
    cases.push(BenchmarkCase {
        name: "square_contraction",
        body_label: "square",
        map: klein(affine2([[0.5, 0.0], [0.0, 0.5]], [0.15, 0.15]), &square),
        body: square.clone(),
        start: pt(&[-0.5, 0.4]),
        conv: half,
        max_iter: 60,
        expected: Verdict::FixedPoint,
        planar: true,
    });

    // x boost with the matching y shrink: a projective self-map of the
    // square escaping to the edge x = 1
    cases.push(BenchmarkCase {
        name: "square_boost_shear",
        body_label: "square",
        map: {
            let t: f64 = 0.5;
            klein(
                vec![
                    vec![num::cosh(t), 0.0, num::sinh(t)],
                    vec![0.0, num::exp(-t), 0.0],
                    vec![num::sinh(t), 0.0, num::cosh(t)],
                ],
                &square,
            )
        },
        body: square.clone(),
        start: pt(&[0.0, 0.3]),
        conv: half,
        max_iter: 15,
        expected: Verdict::SingleFace,
        planar: true,
    });

    // averaging toward the corner (1, 1): escapes to the vertex
    cases.push(BenchmarkCase {
        name: "square_corner_avg",
        body_label: "square",
        map: klein(affine2([[0.7, 0.0], [0.0, 0.7]], [0.3, 0.3]), &square),
        body: square.clone(),
        start: pt(&[-0.3, 0.2]),
        conv: half,
        max_iter: 40,
        expected: Verdict::SingleFace,
        planar: true,
    });

    // affine contraction of a scalene triangle
    cases.push(BenchmarkCase {
        name: "triangle_contraction",
        body_label: "triangle",
        map: klein(affine2([[0.5, 0.0], [0.0, 0.5]], [0.05, 0.025]), &triangle),
        body: triangle.clone(),
        start: pt(&[0.2, 0.0]),
        conv: half,
        max_iter: 60,
        expected: Verdict::FixedPoint,
        planar: true,
    });

    // the simplex map diag(3, 1, 1) conjugated into the triangle's
    // barycentric chart: projective, escapes to the vertex (1, 0)
    cases.push(BenchmarkCase {
        name: "triangle_projective",
        body_label: "triangle",
        map: {
            let vs = triangle_vertices();
            let v = vec![
                vec![vs[0][0], vs[1][0], vs[2][0]],
                vec![vs[0][1], vs[1][1], vs[2][1]],
                vec![1.0, 1.0, 1.0],
            ];
            let m = mat_mul(&mat_mul(&v, &diag_matrix(&[3.0, 1.0, 1.0])), &mat_inv(&v));
            klein(m, &triangle)
        },
        body: triangle.clone(),
        start: pt(&[-0.1, 0.03]),
        conv: half,
        max_iter: 13,
        expected: Verdict::SingleFace,
        planar: true,
    });

    // rotating contraction of the pentagon, composed from two isometry-
    // grade pieces (72 degrees preserves the pentagon)
    cases.push(BenchmarkCase {
        name: "pentagon_spiral",
        body_label: "pentagon",
        map: SemicontractionSpec::composition(vec![
            klein(
                affine2(rotation2(2.0 * core::f64::consts::PI / 5.0), [0.0, 0.0]),
                &pentagon,
            ),
            klein(affine2([[0.75, 0.0], [0.0, 0.75]], [0.0, 0.0]), &pentagon),
        ])?,
        body: pentagon.clone(),
        start: pt(&[0.3, 0.1]),
        conv: half,
        max_iter: 130,
        expected: Verdict::FixedPoint,
        planar: true,
    });

    // averaging toward the top vertex of the pentagon
    cases.push(BenchmarkCase {
        name: "pentagon_vertex_avg",
        body_label: "pentagon",
        map: klein(affine2([[0.7, 0.0], [0.0, 0.7]], [0.0, 0.3]), &pentagon),
        body: pentagon.clone(),
        start: pt(&[0.1, -0.2]),
        conv: half,
        max_iter: 40,
        expected: Verdict::SingleFace,
        planar: true,
    });

    Ok(cases)
}

/// The cone-map suite on standard simplices.
pub fn simplex_suite() -> Result<Vec<BenchmarkCase>> {
    let s2 = ConvexBody::standard_simplex(2)?;
    let s3 = ConvexBody::standard_simplex(3)?;
    let one = MetricConvention::one();
    let third = 1.0 / 3.0;

    Ok(vec![
        BenchmarkCase {
            name: "simplex_diag21",
            body_label: "simplex2",
            map: SemicontractionSpec::projective_linear(diag_matrix(&[2.0, 1.0]))?,
            body: s2.clone(),
            start: pt(&[0.5, 0.5]),
            conv: one,
            max_iter: 40,
            expected: Verdict::SingleFace,
            planar: false,
        },
        BenchmarkCase {
            name: "simplex_perron",
            body_label: "simplex2",
            map: SemicontractionSpec::projective_linear(vec![
                vec![1.0, 1.0],
                vec![1.0, 2.0],
            ])?,
            body: s2.clone(),
            start: pt(&[0.5, 0.5]),
            conv: one,
            max_iter: 60,
            expected: Verdict::FixedPoint,
            planar: false,
        },
        BenchmarkCase {
            name: "simplex_diag221",
            body_label: "simplex3",
            map: SemicontractionSpec::projective_linear(diag_matrix(&[2.0, 2.0, 1.0]))?,
            body: s3.clone(),
            start: pt(&[third, third, third]),
            conv: one,
            max_iter: 40,
            expected: Verdict::SingleFace,
            planar: false,
        },
        BenchmarkCase {
            name: "simplex_diag421",
            body_label: "simplex3",
            map: SemicontractionSpec::projective_linear(diag_matrix(&[4.0, 2.0, 1.0]))?,
            body: s3.clone(),
            start: pt(&[third, third, third]),
            conv: one,
            max_iter: 20,
            expected: Verdict::SingleFace,
            planar: false,
        },
        BenchmarkCase {
            name: "simplex_topical",
            body_label: "simplex2",
            map: SemicontractionSpec::topical(vec![
                TopicalRow { op: TopicalOp::Max, coeffs: vec![2.0, 1.0] },
                TopicalRow { op: TopicalOp::Min, coeffs: vec![1.0, 2.0] },
            ])?,
            body: s2.clone(),
            start: pt(&[0.4, 0.6]),
            conv: one,
            max_iter: 30,
            expected: Verdict::FixedPoint,
            planar: false,
        },
        BenchmarkCase {
            name: "simplex_sqrt",
            body_label: "simplex3",
            map: SemicontractionSpec::coordinate_power(0.5)?,
            body: s3.clone(),
            start: pt(&[0.6, 0.3, 0.1]),
            conv: one,
            max_iter: 80,
            expected: Verdict::FixedPoint,
            planar: false,
        },
        BenchmarkCase {
            name: "simplex_identity",
            body_label: "simplex2",
            map: SemicontractionSpec::Identity,
            body: s2.clone(),
            start: pt(&[0.3, 0.7]),
            conv: one,
            max_iter: 10,
            expected: Verdict::FixedPoint,
            planar: false,
        },
    ])
}

/// The full catalog: planar suite followed by the simplex suite.
pub fn full_suite() -> Result<Vec<BenchmarkCase>> {
    let mut cases = two_dimensional_suite()?;
    cases.extend(simplex_suite()?);
    Ok(cases)
}

/// Case names joined for quick listings.
pub fn case_names(cases: &[BenchmarkCase]) -> Vec<String> {
    cases.iter().map(|c| String::from(c.name)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjecture::{conjecture_report, ReportConfig};

    #[test]
    fn catalog_has_expected_shape() {
        let cases = full_suite().unwrap();
        assert_eq!(cases.len(), 17);
        assert_eq!(cases.iter().filter(|c| c.planar).count(), 10);
        let planar_bodies: alloc::collections::BTreeSet<&str> = cases
            .iter()
            .filter(|c| c.planar)
            .map(|c| c.body_label)
            .collect();
        assert_eq!(
            planar_bodies.into_iter().collect::<alloc::vec::Vec<_>>(),
            alloc::vec!["disk", "pentagon", "square", "triangle"]
        );
    }

    #[test]
    fn every_case_reaches_its_expected_verdict() {
        for case in full_suite().unwrap() {
            let config = ReportConfig {
                max_iter: case.max_iter,
                conv: case.conv,
                probes: 600,
                beardon: false,
                ..ReportConfig::default()
            };
            let report = conjecture_report(&case.map, &case.body, &case.start, &config)
                .unwrap_or_else(|e| panic!("{} failed: {e}", case.name));
            assert_eq!(
                report.limit.verdict, case.expected,
                "{}: got {:?} ({:?}, stop {:?})",
                case.name, report.limit.verdict, report.classification, report.stop_reason
            );
        }
    }
}
