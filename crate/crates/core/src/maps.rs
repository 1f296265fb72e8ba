//! Concrete semicontractions of Hilbert domains.
//!
//! Cone maps (projective linear, topical, coordinate powers) act on the
//! positive cone and are renormalized onto the standard simplex; they are
//! order-preserving and homogeneous, hence nonexpansive for the cone
//! convention. Projective matrices acting on a Klein-type chart are
//! nonexpansive whenever they map the body into itself (projective maps
//! preserve cross-ratios, and Hilbert metrics shrink under domain
//! inclusion); that inclusion is certified by sampling at construction.
//! Affine self-maps are the special case with last homogeneous row
//! `(0, ..., 0, 1)`.
//!
//! Nothing here is *assumed* contractive: [`certify_nonexpansive`] measures
//! the worst distance ratio over seeded random pairs, and the Beardon-style
//! averaging approximants are flagged experimental until certified.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;


use crate::geometry::{Classification, ConvexBody, Point};
use crate::linalg;
use crate::metric::{hilbert_distance, simplex_distance, MetricConvention};
use crate::num;
use crate::sample;
use crate::{Error, Result};

/// Row aggregation of a topical map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopicalOp {
    Max,
    Min,
}

/// One output coordinate of a topical map: `max` or `min` of `c_j * x_j`
/// over the row's support (entries with `c_j > 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct TopicalRow {
    pub op: TopicalOp,
    pub coeffs: Vec<f64>,
}

/// A semicontraction specification.
#[derive(Clone, Debug, PartialEq)]
pub enum SemicontractionSpec {
    Identity,
    /// `x -> A x / ||A x||_1` on the standard simplex; `A` nonnegative with
    /// a positive entry in every row (zero columns are allowed: they steer
    /// orbits onto faces).
    ProjectiveLinear { matrix: Vec<Vec<f64>> },
    /// Componentwise max/min of scaled coordinates, renormalized.
    Topical { rows: Vec<TopicalRow> },
    /// `x -> (x_i^p)_i / sum`, `p > 0`. Scales simplex log-ratios by exactly
    /// `p`: a strict contraction for `p < 1`, expansive for `p > 1` (useful
    /// as a certification stress case).
    CoordinatePower { exponent: f64 },
    /// Projective action of an `(N+1) x (N+1)` matrix on homogeneous
    /// coordinates `[x; 1]`; certified at construction to map sampled
    /// interior points of its body to interior points.
    KleinProjective { matrix: Vec<Vec<f64>> },
    /// Left-to-right composition: `parts[n-1](... parts[0](x))`.
    Composition(Vec<SemicontractionSpec>),
    /// Euclidean averaging toward an interior basepoint,
    /// `x -> (1 - w) f(x) + w p`. Produced by [`beardon_approximant`];
    /// experimental until certified nonexpansive.
    BlendToward {
        inner: Box<SemicontractionSpec>,
        point: Point,
        weight: f64,
    },
}

impl SemicontractionSpec {
    pub fn projective_linear(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpec("matrix must be square and nonempty"));
        }
        if matrix.iter().flatten().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidSpec("matrix entries must be finite and nonnegative"));
        }
        if matrix.iter().any(|r| r.iter().all(|c| *c == 0.0)) {
            return Err(Error::InvalidSpec("matrix rows must have a positive entry"));
        }
        Ok(SemicontractionSpec::ProjectiveLinear { matrix })
    }

    pub fn topical(rows: Vec<TopicalRow>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.coeffs.len() != n) {
            return Err(Error::InvalidSpec("topical rows must form a square system"));
        }
        if rows.iter().flat_map(|r| &r.coeffs).any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidSpec("topical coefficients must be finite and nonnegative"));
        }
        if rows.iter().any(|r| r.coeffs.iter().all(|c| *c == 0.0)) {
            return Err(Error::InvalidSpec("topical rows must have a positive entry"));
        }
        Ok(SemicontractionSpec::Topical { rows })
    }

    pub fn coordinate_power(exponent: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidSpec("exponent must be positive"));
        }
        Ok(SemicontractionSpec::CoordinatePower { exponent })
    }

    /// Projective matrix, certified on `samples` seeded interior points of
    /// `body` (image interior, homogeneous denominator positive).
    pub fn klein_projective(
        matrix: Vec<Vec<f64>>,
        body: &ConvexBody,
        seed: u64,
        samples: usize,
    ) -> Result<Self> {
        let n = body.dim();
        if matrix.len() != n + 1 || matrix.iter().any(|r| r.len() != n + 1) {
            return Err(Error::InvalidSpec("projective matrix must be (N+1) x (N+1)"));
        }
        if matrix.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpec("projective matrix entries must be finite"));
        }
        let spec = SemicontractionSpec::KleinProjective { matrix };
        let mut rng = sample::rng(seed);
        for _ in 0..samples {
            let p = sample::interior_point_with_margin(body, &mut rng, 0.98)?;
            let image = spec.apply(&p)?;
            if body.contains(&image, 0.0)? != Classification::Interior {
                return Err(Error::InvalidSpec(
                    "projective matrix does not map the body into itself",
                ));
            }
        }
        Ok(spec)
    }

    pub fn composition(parts: Vec<SemicontractionSpec>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpec("composition needs at least one part"));
        }
        let dims: Vec<usize> = parts.iter().filter_map(|p| p.domain_dim()).collect();
        if dims.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::InvalidSpec("composition parts disagree on dimension"));
        }
        Ok(SemicontractionSpec::Composition(parts))
    }

    /// Ambient dimension the map expects, when it has one.
    pub fn domain_dim(&self) -> Option<usize> {
        match self {
            SemicontractionSpec::Identity => None,
            SemicontractionSpec::ProjectiveLinear { matrix } => Some(matrix.len()),
            SemicontractionSpec::Topical { rows } => Some(rows.len()),
            SemicontractionSpec::CoordinatePower { .. } => None,
            SemicontractionSpec::KleinProjective { matrix } => Some(matrix.len() - 1),
            SemicontractionSpec::Composition(parts) => {
                parts.iter().find_map(|p| p.domain_dim())
            }
            SemicontractionSpec::BlendToward { inner, point, .. } => {
                inner.domain_dim().or(Some(point.dim()))
            }
        }
    }

    /// Averaging approximants are candidates, not certified contractions.
    pub fn is_experimental(&self) -> bool {
        match self {
            SemicontractionSpec::BlendToward { .. } => true,
            SemicontractionSpec::Composition(parts) => {
                parts.iter().any(|p| p.is_experimental())
            }
            _ => false,
        }
    }

    /// A short deterministic identifier for reports.
    pub fn id(&self) -> String {
        match self {
            SemicontractionSpec::Identity => String::from("identity"),
            SemicontractionSpec::ProjectiveLinear { matrix } => {
                format!("projective_linear{}", fmt_matrix(matrix))
            }
            SemicontractionSpec::Topical { rows } => {
                let mut s = String::from("topical[");
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        s.push(';');
                    }
                    s.push_str(match row.op {
                        TopicalOp::Max => "max",
                        TopicalOp::Min => "min",
                    });
                    s.push_str(&fmt_row(&row.coeffs));
                }
                s.push(']');
                s
            }
            SemicontractionSpec::CoordinatePower { exponent } => {
                format!("coordinate_power({exponent})")
            }
            SemicontractionSpec::KleinProjective { matrix } => {
                format!("klein_projective{}", fmt_matrix(matrix))
            }
            SemicontractionSpec::Composition(parts) => {
                let ids: Vec<String> = parts.iter().map(|p| p.id()).collect();
                format!("composition[{}]", ids.join(" -> "))
            }
            SemicontractionSpec::BlendToward { inner, weight, .. } => {
                format!("blend(w={weight})[{}]", inner.id())
            }
        }
    }

    /// Applies the map. Cone maps accept any strictly positive vector and
    /// renormalize onto the simplex; the projective chart divides by the
    /// last homogeneous coordinate.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            SemicontractionSpec::Identity => Ok(x.clone()),
            SemicontractionSpec::ProjectiveLinear { matrix } => {
                check_dim(matrix.len(), x)?;
                check_positive(x)?;
                normalize_onto_simplex(linalg::mat_vec(matrix, x.coords()))
            }
            SemicontractionSpec::Topical { rows } => {
                check_dim(rows.len(), x)?;
                check_positive(x)?;
                let image: Vec<f64> = rows
                    .iter()
                    .map(|row| {
                        let terms = row
                            .coeffs
                            .iter()
                            .zip(x.coords())
                            .filter(|(c, _)| **c > 0.0)
                            .map(|(c, v)| c * v);
                        match row.op {
                            TopicalOp::Max => terms.fold(f64::NEG_INFINITY, f64::max),
                            TopicalOp::Min => terms.fold(f64::INFINITY, f64::min),
                        }
                    })
                    .collect();
                normalize_onto_simplex(image)
            }
            SemicontractionSpec::CoordinatePower { exponent } => {
                check_positive(x)?;
                let image: Vec<f64> =
                    x.coords().iter().map(|c| num::powf(*c, *exponent)).collect();
                normalize_onto_simplex(image)
            }
            SemicontractionSpec::KleinProjective { matrix } => {
                check_dim(matrix.len() - 1, x)?;
                let mut homog: Vec<f64> = x.coords().to_vec();
                homog.push(1.0);
                let image = linalg::mat_vec(matrix, &homog);
                let w = image[image.len() - 1];
                if !(w.is_finite() && w > 1e-300) {
                    return Err(Error::MapLeftDomain);
                }
                Point::new(image[..image.len() - 1].iter().map(|c| c / w).collect())
            }
            SemicontractionSpec::Composition(parts) => {
                let mut cur = x.clone();
                for part in parts {
                    cur = part.apply(&cur)?;
                }
                Ok(cur)
            }
            SemicontractionSpec::BlendToward { inner, point, weight } => {
                let image = inner.apply(x)?;
                if image.dim() != point.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: point.dim(),
                        got: image.dim(),
                    });
                }
                Point::new(linalg::lerp(image.coords(), point.coords(), *weight))
            }
        }
    }
}

fn fmt_row(row: &[f64]) -> String {
    let cells: Vec<String> = row.iter().map(|c| format!("{c}")).collect();
    format!("({})", cells.join(","))
}

fn fmt_matrix(m: &[Vec<f64>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| fmt_row(r)).collect();
    format!("[{}]", rows.join(""))
}

fn check_dim(expected: usize, x: &Point) -> Result<()> {
    if x.dim() != expected {
        return Err(Error::DimensionMismatch { expected, got: x.dim() });
    }
    Ok(())
}

fn check_positive(x: &Point) -> Result<()> {
    if x.coords().iter().any(|c| *c <= 0.0) {
        return Err(Error::OutsideDomain);
    }
    Ok(())
}

fn normalize_onto_simplex(image: Vec<f64>) -> Result<Point> {
    let sum: f64 = image.iter().sum();
    if !(sum.is_finite() && sum > 0.0) {
        return Err(Error::ZeroImage);
    }
    Point::new(image.into_iter().map(|c| c / sum).collect())
}

/// Empirical nonexpansiveness certificate.
#[derive(Clone, Debug)]
pub struct NonexpansivenessCertificate {
    pub pairs_tested: usize,
    /// Maximum of `d(f x, f y) / d(x, y)` over the tested pairs.
    pub max_ratio: f64,
    /// The offending pair when `max_ratio > 1 + 1e-9`.
    pub witness: Option<(Point, Point)>,
}

/// Measures the worst distance ratio of `map` over `pairs` seeded random
/// interior pairs of `body`. Alternates independent draws with small
/// perturbation pairs (the latter estimate the local Lipschitz constant,
/// where contraction suprema are typically attained); pairs closer than
/// `1e-6` in Euclidean norm are rejected.
pub fn certify_nonexpansive(
    map: &SemicontractionSpec,
    body: &ConvexBody,
    pairs: usize,
    seed: u64,
    conv: MetricConvention,
) -> Result<NonexpansivenessCertificate> {
    let mut rng = sample::rng(seed);
    let mut max_ratio = 0.0f64;
    let mut argmax: Option<(Point, Point)> = None;
    let mut tested = 0usize;
    while tested < pairs.max(1) {
        let x = sample::interior_point(body, &mut rng)?;
        let y = if tested % 2 == 0 {
            sample::interior_point(body, &mut rng)?
        } else {
            sample::perturb_interior(body, &x, &mut rng, 1e-4, 3e-3)?
        };
        if linalg::dist(x.coords(), y.coords()) < 1e-6 {
            continue;
        }
        let before = hilbert_distance(body, &x, &y, conv)?;
        if before < 1e-12 {
            continue;
        }
        let fx = map.apply(&x)?;
        let fy = map.apply(&y)?;
        let after = hilbert_distance(body, &fx, &fy, conv)?;
        let ratio = after / before;
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = Some((x, y));
        }
        tested += 1;
    }
    let witness = if max_ratio > 1.0 + 1e-9 { argmax } else { None };
    Ok(NonexpansivenessCertificate { pairs_tested: tested, max_ratio, witness })
}

/// Birkhoff's projective diameter of the image of a strictly positive
/// matrix: the largest simplex distance between normalized columns. The
/// matrix then contracts the simplex metric by at least `tanh(diam / 4)`.
pub fn birkhoff_diameter(matrix: &[Vec<f64>]) -> Result<f64> {
    let n = matrix.len();
    if n == 0 || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidSpec("matrix must be square and nonempty"));
    }
    if matrix.iter().flatten().any(|c| !(c.is_finite() && *c > 0.0)) {
        return Err(Error::NonPositiveEntry);
    }
    let cols: Vec<Point> = (0..n)
        .map(|j| {
            let col: Vec<f64> = (0..n).map(|i| matrix[i][j]).collect();
            let sum: f64 = col.iter().sum();
            Point::new(col.into_iter().map(|c| c / sum).collect())
        })
        .collect::<Result<_>>()?;
    let mut diam = 0.0f64;
    for j in 0..n {
        for l in j + 1..n {
            diam = diam.max(simplex_distance(&cols[j], &cols[l])?);
        }
    }
    Ok(diam)
}

/// Birkhoff's contraction coefficient `tanh(diam / 4)`: a strictly positive
/// matrix shrinks simplex distances by at least this factor.
pub fn birkhoff_contraction_bound(matrix: &[Vec<f64>]) -> Result<f64> {
    Ok(num::tanh(birkhoff_diameter(matrix)? / 4.0))
}

/// Beardon-style uniform-contraction candidate: Euclidean averaging of the
/// map toward an interior basepoint with weight `1/(k+1)`. The result is
/// experimental and must pass [`certify_nonexpansive`] with
/// `max_ratio < 1` before use.
pub fn beardon_approximant(
    map: &SemicontractionSpec,
    basepoint: &Point,
    k: usize,
) -> Result<SemicontractionSpec> {
    if k == 0 {
        return Err(Error::InvalidSpec("approximant index must be at least 1"));
    }
    Ok(SemicontractionSpec::BlendToward {
        inner: Box::new(map.clone()),
        point: basepoint.clone(),
        weight: 1.0 / (k as f64 + 1.0),
    })
}

/// Outcome of a Banach fixed-point iteration.
#[derive(Clone, Debug)]
pub struct FixedPointRun {
    pub point: Point,
    pub converged: bool,
    pub steps: usize,
}

/// Iterates `map` from `start` until the Euclidean step falls under `tol`,
/// giving up (with `converged = false`) after `max_steps`.
pub fn banach_fixed_point(
    map: &SemicontractionSpec,
    start: &Point,
    body: &ConvexBody,
    tol: f64,
    max_steps: usize,
) -> Result<FixedPointRun> {
    let mut cur = start.clone();
    for step in 1..=max_steps {
        let next = map.apply(&cur)?;
        if body.contains(&next, 0.0)? == Classification::Outside {
            return Err(Error::MapLeftDomain);
        }
        let moved = linalg::dist(cur.coords(), next.coords());
        cur = next;
        if moved < tol {
            return Ok(FixedPointRun { point: cur, converged: true, steps: step });
        }
    }
    Ok(FixedPointRun { point: cur, converged: false, steps: max_steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn projective_linear_apply() {
        let map =
            SemicontractionSpec::projective_linear(vec![vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let image = map.apply(&pt(&[0.5, 0.5])).unwrap();
        assert!((image[0] - 0.4).abs() < 1e-15);
        assert!((image[1] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn identity_apply() {
        let x = pt(&[0.25, 0.75]);
        assert_eq!(SemicontractionSpec::Identity.apply(&x).unwrap(), x);
    }

    #[test]
    fn klein_boost_on_segment() {
        let seg = ConvexBody::cube(1, 1.0).unwrap();
        let t: f64 = 0.5;
        let boost = SemicontractionSpec::klein_projective(
            vec![vec![t.cosh(), t.sinh()], vec![t.sinh(), t.cosh()]],
            &seg,
            3,
            1000,
        )
        .unwrap();
        let image = boost.apply(&pt(&[0.0])).unwrap();
        assert!((image[0] - t.tanh()).abs() < 1e-15, "{}", image[0]);
    }

    #[test]
    fn cone_maps_are_homogeneous() {
        let map =
            SemicontractionSpec::projective_linear(vec![vec![2.0, 1.0], vec![0.5, 3.0]]).unwrap();
        let x = pt(&[0.3, 0.7]);
        let scaled = pt(&[3.0 * 0.3, 3.0 * 0.7]);
        let a = map.apply(&x).unwrap();
        let b = map.apply(&scaled).unwrap();
        for i in 0..2 {
            assert!((a[i] - b[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_row_rejected() {
        let err = SemicontractionSpec::projective_linear(vec![vec![0.0, 0.0], vec![1.0, 1.0]])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn topical_min_uses_support_only() {
        let map = SemicontractionSpec::topical(vec![
            TopicalRow { op: TopicalOp::Max, coeffs: vec![2.0, 1.0] },
            TopicalRow { op: TopicalOp::Min, coeffs: vec![1.0, 2.0] },
        ])
        .unwrap();
        let image = map.apply(&pt(&[0.5, 0.5])).unwrap();
        // raw image (max(1.0, 0.5), min(0.5, 1.0)) = (1.0, 0.5)
        assert!((image[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((image[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn identity_certificate_is_exactly_one() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let cert = certify_nonexpansive(
            &SemicontractionSpec::Identity,
            &simplex,
            500,
            5,
            MetricConvention::one(),
        )
        .unwrap();
        assert_eq!(cert.max_ratio, 1.0);
        assert!(cert.witness.is_none());
    }

    #[test]
    fn squaring_map_is_expansive_with_witness() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let sq = SemicontractionSpec::coordinate_power(2.0).unwrap();
        let cert =
            certify_nonexpansive(&sq, &simplex, 500, 5, MetricConvention::one()).unwrap();
        // squaring doubles simplex log-ratios
        assert!((cert.max_ratio - 2.0).abs() < 1e-9, "{}", cert.max_ratio);
        assert!(cert.witness.is_some());
    }

    #[test]
    fn sqrt_map_halves_distances() {
        let simplex = ConvexBody::standard_simplex(3).unwrap();
        let sqrt = SemicontractionSpec::coordinate_power(0.5).unwrap();
        let cert =
            certify_nonexpansive(&sqrt, &simplex, 500, 5, MetricConvention::one()).unwrap();
        assert!((cert.max_ratio - 0.5).abs() < 1e-9, "{}", cert.max_ratio);
    }

    #[test]
    fn birkhoff_diameter_examples() {
        let d = birkhoff_diameter(&[vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((d - 2.0f64.ln()).abs() < 1e-12);
        let d = birkhoff_diameter(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(d, 0.0);
        let d = birkhoff_diameter(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((d - 4.0f64.ln()).abs() < 1e-12);
        assert_eq!(
            birkhoff_diameter(&[vec![1.0, 0.0], vec![1.0, 2.0]]).unwrap_err(),
            Error::NonPositiveEntry
        );
    }

    #[test]
    fn positive_matrix_respects_birkhoff_bound() {
        let matrix = vec![vec![1.0, 1.0], vec![1.0, 2.0]];
        let map = SemicontractionSpec::projective_linear(matrix.clone()).unwrap();
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let bound = num::tanh(birkhoff_diameter(&matrix).unwrap() / 4.0);
        let cert =
            certify_nonexpansive(&map, &simplex, 4000, 9, MetricConvention::one()).unwrap();
        assert!(
            cert.max_ratio <= bound + 1e-9,
            "{} > {}",
            cert.max_ratio,
            bound
        );
        // perturbation pairs should come close to attaining the bound
        assert!(cert.max_ratio >= bound - 1e-2, "{} vs {}", cert.max_ratio, bound);
    }

    #[test]
    fn topical_maps_are_nonexpansive() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let map = SemicontractionSpec::topical(vec![
            TopicalRow { op: TopicalOp::Max, coeffs: vec![2.0, 1.0] },
            TopicalRow { op: TopicalOp::Min, coeffs: vec![1.0, 2.0] },
        ])
        .unwrap();
        let cert =
            certify_nonexpansive(&map, &simplex, 2000, 13, MetricConvention::one()).unwrap();
        assert!(cert.max_ratio <= 1.0 + 1e-9, "{}", cert.max_ratio);
    }

    #[test]
    fn beardon_of_identity_fixes_basepoint() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let base = pt(&[0.5, 0.5]);
        let approx =
            beardon_approximant(&SemicontractionSpec::Identity, &base, 9).unwrap();
        assert!(approx.is_experimental());
        let run = banach_fixed_point(&approx, &pt(&[0.9, 0.1]), &simplex, 1e-13, 10_000).unwrap();
        assert!(run.converged);
        assert!(linalg::dist(run.point.coords(), base.coords()) < 1e-10);
    }

    #[test]
    fn composition_ratio_bounded_by_product_on_shared_pairs() {
        // on a shared pair set the composition ratio telescopes through the
        // intermediate images, so max ratios multiply
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let a = SemicontractionSpec::coordinate_power(0.5).unwrap();
        let b = SemicontractionSpec::projective_linear(vec![vec![1.0, 1.0], vec![1.0, 2.0]])
            .unwrap();
        let comp = SemicontractionSpec::composition(vec![a.clone(), b.clone()]).unwrap();
        let conv = MetricConvention::one();
        let mut rng = sample::rng(17);
        let mut max_a = 0.0f64;
        let mut max_b = 0.0f64;
        let mut max_c = 0.0f64;
        for _ in 0..500 {
            let x = sample::interior_point(&simplex, &mut rng).unwrap();
            let y = sample::interior_point(&simplex, &mut rng).unwrap();
            let d = hilbert_distance(&simplex, &x, &y, conv).unwrap();
            if d < 1e-9 {
                continue;
            }
            let ax = a.apply(&x).unwrap();
            let ay = a.apply(&y).unwrap();
            let da = hilbert_distance(&simplex, &ax, &ay, conv).unwrap();
            let cx = comp.apply(&x).unwrap();
            let cy = comp.apply(&y).unwrap();
            let dc = hilbert_distance(&simplex, &cx, &cy, conv).unwrap();
            max_a = max_a.max(da / d);
            if da > 1e-12 {
                let bx = b.apply(&ax).unwrap();
                let by = b.apply(&ay).unwrap();
                let db = hilbert_distance(&simplex, &bx, &by, conv).unwrap();
                max_b = max_b.max(db / da);
            }
            max_c = max_c.max(dc / d);
        }
        assert!(
            max_c <= max_a * max_b + 1e-9,
            "{max_c} > {max_a} * {max_b}"
        );
    }

    #[test]
    fn klein_certification_rejects_escaping_matrix() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        // doubling chart coordinates leaves the disk
        let err = SemicontractionSpec::klein_projective(
            vec![
                vec![2.0, 0.0, 0.0],
                vec![0.0, 2.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
            &disk,
            3,
            1000,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }
}
