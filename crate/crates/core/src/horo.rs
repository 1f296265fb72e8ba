//! Horofunction approximants and escape certificates.
//!
//! A horofunction is reached by embedding the space into its continuous
//! functions via `z -> d(z, .) - d(z, x0)` and letting the anchor `z` run
//! to the boundary. The artifact never represents ideal limits directly:
//! everything is an interior-anchored approximant `h_z`, reported together
//! with convergence gaps. Every `h_z` is 1-Lipschitz with `h_z(x0) = 0` and
//! `|h_z(x)| <= d(x, x0)`, and its sublevel sets are the (convex, in
//! Hilbert geometry) horoballs.
//!
//! The escape certificate construction: given a drift estimate `tau` and a
//! shrinking schedule `eps_i`, the record times of
//! `b_i(n) = a_n - (tau - eps_i) n` single out anchor iterates whose
//! approximants satisfy `h(f^k(x)) <= -tau k` up to a measured slack. A
//! small slack certifies, numerically, that the orbit descends into a
//! single nested family of horoballs at linear speed.

use alloc::vec::Vec;

use crate::dynamics::{classify_orbit, Orbit, OrbitClassification};
use crate::geometry::{Classification, ConvexBody, Point};
use crate::linalg;
use crate::metric::{
    hilbert_distance, poincare_distance, MetricConvention, PoincarePoint, METRIC_BOUNDARY_TOL,
};
use crate::num;
use crate::{Error, Result};

/// Evaluator for `h_z = d(z, .) - d(z, x0)` with an interior anchor `z`.
#[derive(Clone, Debug)]
pub struct HorofunctionApproximant<'a> {
    body: &'a ConvexBody,
    anchor: Point,
    basepoint: Point,
    conv: MetricConvention,
    base_dist: f64,
}

impl<'a> HorofunctionApproximant<'a> {
    pub fn new(
        body: &'a ConvexBody,
        anchor: Point,
        basepoint: Point,
        conv: MetricConvention,
    ) -> Result<Self> {
        let base_dist = hilbert_distance(body, &anchor, &basepoint, conv)?;
        Ok(HorofunctionApproximant { body, anchor, basepoint, conv, base_dist })
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn basepoint(&self) -> &Point {
        &self.basepoint
    }

    /// `d(anchor, x) - d(anchor, basepoint)`; zero at the basepoint by
    /// construction.
    pub fn evaluate(&self, x: &Point) -> Result<f64> {
        if x == &self.basepoint {
            return Ok(0.0);
        }
        Ok(hilbert_distance(self.body, &self.anchor, x, self.conv)? - self.base_dist)
    }

    /// Whether `x` lies in the horoball `{ h <= level }`.
    pub fn horoball_contains(&self, x: &Point, level: f64) -> Result<bool> {
        Ok(self.evaluate(x)? <= level)
    }
}

/// A Busemann evaluation along a ray.
#[derive(Clone, Debug)]
pub struct BusemannEval {
    /// `d(gamma_k, x) - d(gamma_k, basepoint)` at the last ray point.
    pub value: f64,
    /// Gap between the last two evaluations (a convergence diagnostic).
    pub gap: f64,
    /// The whole evaluation sequence (nonincreasing up to roundoff).
    pub evals: Vec<f64>,
}

/// Busemann evaluation of `x` along `ray` under an arbitrary distance
/// backend, so the Hilbert geometry and the Poincaré oracle share one code
/// path. The ray needs at least three points with strictly increasing
/// distance from the basepoint.
pub fn busemann_along<F>(dist: F, ray: &[Point], x: &Point, basepoint: &Point) -> Result<BusemannEval>
where
    F: Fn(&Point, &Point) -> Result<f64>,
{
    if ray.len() < 3 {
        return Err(Error::RayTooShort);
    }
    let mut last_r = -1.0f64;
    let mut evals = Vec::with_capacity(ray.len());
    for g in ray {
        let r = dist(g, basepoint)?;
        if r <= last_r {
            return Err(Error::NotEscaping);
        }
        last_r = r;
        evals.push(dist(g, x)? - r);
    }
    let value = evals[evals.len() - 1];
    let gap = num::abs(value - evals[evals.len() - 2]);
    Ok(BusemannEval { value, gap, evals })
}

/// Busemann evaluation in the body's Hilbert metric.
pub fn busemann_along_hilbert(
    body: &ConvexBody,
    conv: MetricConvention,
    ray: &[Point],
    x: &Point,
    basepoint: &Point,
) -> Result<BusemannEval> {
    busemann_along(|a, b| hilbert_distance(body, a, b, conv), ray, x, basepoint)
}

/// Geodesic ray toward a boundary direction: affine points
/// `basepoint + s_j (target - basepoint)` with `s_j = 1 - 2^-j`, which
/// advances in roughly equal Hilbert arclength steps (straight lines are
/// Hilbert geodesics). `target` should be a boundary point; `steps` is
/// capped at 25 to keep the last point inside double precision's trustable
/// band.
pub fn geodesic_ray(
    body: &ConvexBody,
    basepoint: &Point,
    target: &Point,
    steps: usize,
) -> Result<Vec<Point>> {
    if body.contains(basepoint, METRIC_BOUNDARY_TOL)? != Classification::Interior {
        return Err(Error::OutsideDomain);
    }
    let steps = steps.clamp(3, 25);
    let mut ray = Vec::with_capacity(steps);
    for j in 1..=steps {
        let s = 1.0 - num::powf(2.0, -(j as f64));
        let p = Point::new(linalg::lerp(basepoint.coords(), target.coords(), s))?;
        if body.contains(&p, METRIC_BOUNDARY_TOL)? != Classification::Interior {
            break;
        }
        ray.push(p);
    }
    if ray.len() < 3 {
        return Err(Error::RayTooShort);
    }
    Ok(ray)
}

/// Record times of `b(n) = a_n - (tau - epsilon) n`.
#[derive(Clone, Debug)]
pub struct RecordSelection {
    pub epsilon: f64,
    pub tau: f64,
    /// Indices where `b` strictly exceeds every earlier value.
    pub records: Vec<usize>,
    /// `b` at the record indices.
    pub b_values: Vec<f64>,
    /// No record fell in the last half of the data: `b` does not look
    /// unbounded, so the orbit is suspected bounded.
    pub bounded_suspected: bool,
}

/// Selects the strict record times of `b(n) = a_n - (tau - epsilon) n` over
/// `distances_from_start`. The selection is nonempty iff `b` attains a new
/// maximum after index 0; a missing record in the last half of the data
/// raises the `bounded_suspected` flag (certificate construction then
/// refuses with [`Error::BoundedOrbitSuspected`]).
pub fn select_records(
    distances_from_start: &[f64],
    tau: f64,
    epsilon: f64,
) -> Result<RecordSelection> {
    if distances_from_start.is_empty() {
        return Err(Error::InvalidSpec("record selection needs data"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidSpec("epsilon must be positive"));
    }
    let b = |n: usize| distances_from_start[n] - (tau - epsilon) * n as f64;
    let mut best = b(0);
    let mut records = Vec::new();
    let mut b_values = Vec::new();
    for n in 1..distances_from_start.len() {
        let bn = b(n);
        if bn > best {
            best = bn;
            records.push(n);
            b_values.push(bn);
        }
    }
    let half = distances_from_start.len() / 2;
    let bounded_suspected = records.last().map_or(true, |&n| n < half);
    Ok(RecordSelection { epsilon, tau, records, b_values, bounded_suspected })
}

/// The default shrinking schedule `eps_i = 2^-i`, `i = 1..=8`.
pub fn default_epsilons() -> Vec<f64> {
    (1..=8).map(|i| num::powf(2.0, -(i as f64))).collect()
}

/// A horofunction escape certificate.
#[derive(Clone, Debug)]
pub struct Certificate<'a> {
    pub approximant: HorofunctionApproximant<'a>,
    /// `max_k (h(f^k x) + tau k)` over the checked range; small values
    /// certify the linear horoball descent numerically.
    pub slack: f64,
    /// Orbit index of the anchor (the last record of the smallest epsilon).
    pub anchor_index: usize,
    /// The epsilon whose records produced the anchor.
    pub epsilon: f64,
    /// Number of leading iterates the slack was checked on.
    pub checked: usize,
}

/// Builds the record-time escape certificate for an escaping orbit.
///
/// Anchors the approximant at the orbit point of the last record index for
/// the smallest epsilon in the (decreasing) schedule, then measures
/// `slack = max_{1<=k<=K} (h(f^k x) + tau k)` with `K` capped at half the
/// orbit length, where the approximant is still a faithful stand-in for its
/// boundary limit.
pub fn karlsson_certificate<'a>(
    orbit: &Orbit,
    body: &'a ConvexBody,
    conv: MetricConvention,
    tau: f64,
    epsilons: &[f64],
) -> Result<Certificate<'a>> {
    if orbit.len() < 8 {
        return Err(Error::InsufficientLength);
    }
    if epsilons.is_empty() || epsilons.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidSpec("epsilon schedule must be positive"));
    }
    if !matches!(
        classify_orbit(orbit, body)?,
        OrbitClassification::Escaping { .. }
    ) {
        return Err(Error::BoundedOrbitSuspected);
    }
    let eps = epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    let selection = select_records(&orbit.from_start, tau, eps)?;
    if selection.bounded_suspected {
        return Err(Error::BoundedOrbitSuspected);
    }
    let anchor_index = *selection.records.last().unwrap();
    let approximant = HorofunctionApproximant::new(
        body,
        orbit.points[anchor_index].clone(),
        orbit.start().clone(),
        conv,
    )?;
    let checked = ((orbit.len() - 1) / 2).min(anchor_index.saturating_sub(1)).max(1);
    let mut slack = f64::NEG_INFINITY;
    for k in 1..=checked {
        let h = approximant.evaluate(&orbit.points[k])?;
        slack = slack.max(h + tau * k as f64);
    }
    Ok(Certificate { approximant, slack, anchor_index, epsilon: eps, checked })
}

// ----- Poincaré-disk oracle ------------------------------------------------

/// Closed-form horofunction of the Poincaré disk at the boundary point
/// `zeta` (normalized internally to the unit circle):
/// `h_zeta(z) = log(|zeta - z|^2 / (1 - |z|^2))`. Vanishes at the origin.
pub fn poincare_horofunction(zeta: (f64, f64), z: PoincarePoint) -> f64 {
    let norm = num::sqrt(zeta.0 * zeta.0 + zeta.1 * zeta.1);
    let (zr, zi) = (zeta.0 / norm, zeta.1 / norm);
    let dr = zr - z.re;
    let di = zi - z.im;
    let num_sq = dr * dr + di * di;
    let den = 1.0 - (z.re * z.re + z.im * z.im);
    num::ln(num_sq / den)
}

/// Interior-anchored approximation of the same horofunction via the
/// embedding: `d(r zeta, z) - d(r zeta, 0)` at anchor radius `r`.
pub fn poincare_phi_approx(zeta: (f64, f64), radius: f64, z: PoincarePoint) -> Result<f64> {
    let norm = num::sqrt(zeta.0 * zeta.0 + zeta.1 * zeta.1);
    let anchor = PoincarePoint::new(radius * zeta.0 / norm, radius * zeta.1 / norm)?;
    let origin = PoincarePoint::new(0.0, 0.0)?;
    Ok(poincare_distance(anchor, z) - poincare_distance(anchor, origin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::iterate;
    use crate::maps::SemicontractionSpec as Spec;
    use alloc::vec;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    const LN2: f64 = core::f64::consts::LN_2;
    const LN3: f64 = 1.0986122886681098;

    #[test]
    fn approximant_vanishes_at_basepoint() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let h = HorofunctionApproximant::new(
            &disk,
            pt(&[0.9, 0.0]),
            pt(&[0.1, 0.2]),
            MetricConvention::half(),
        )
        .unwrap();
        assert_eq!(h.evaluate(&pt(&[0.1, 0.2])).unwrap(), 0.0);
    }

    #[test]
    fn approximant_on_disk_axis() {
        // anchor, basepoint, x collinear: h(x) = d(z,x) - d(z,0)
        //                                      = -atanh(0.5) at scale 1/2
        let disk = ConvexBody::unit_ball(2).unwrap();
        let h = HorofunctionApproximant::new(
            &disk,
            pt(&[0.9, 0.0]),
            pt(&[0.0, 0.0]),
            MetricConvention::half(),
        )
        .unwrap();
        let got = h.evaluate(&pt(&[0.5, 0.0])).unwrap();
        let oracle = {
            let d_zx = hilbert_distance(
                &disk,
                &pt(&[0.9, 0.0]),
                &pt(&[0.5, 0.0]),
                MetricConvention::half(),
            )
            .unwrap();
            d_zx - 0.9f64.atanh()
        };
        assert!((got - oracle).abs() < 1e-12);
        assert!((got + 0.5f64.atanh()).abs() < 1e-10, "{got}");
    }

    #[test]
    fn approximant_near_simplex_vertex_matches_log_ratio() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let eps = 1e-6;
        let h = HorofunctionApproximant::new(
            &simplex,
            pt(&[1.0 - eps, eps]),
            pt(&[0.5, 0.5]),
            MetricConvention::one(),
        )
        .unwrap();
        let got = h.evaluate(&pt(&[0.25, 0.75])).unwrap();
        // limit form toward the vertex e1: h(x) = log(x2/x1)
        assert!((got - LN3).abs() < 1e-5, "{got}");
    }

    #[test]
    fn approximant_bounds_hold_on_samples() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let conv = MetricConvention::half();
        let basepoint = pt(&[0.1, -0.1]);
        let h =
            HorofunctionApproximant::new(&disk, pt(&[0.0, 0.95]), basepoint.clone(), conv)
                .unwrap();
        let mut rng = crate::sample::rng(21);
        for _ in 0..300 {
            let x = crate::sample::interior_point(&disk, &mut rng).unwrap();
            let y = crate::sample::interior_point(&disk, &mut rng).unwrap();
            let hx = h.evaluate(&x).unwrap();
            let hy = h.evaluate(&y).unwrap();
            let dxy = hilbert_distance(&disk, &x, &y, conv).unwrap();
            let dx0 = hilbert_distance(&disk, &x, &basepoint, conv).unwrap();
            assert!((hx - hy).abs() <= dxy + 1e-9, "not 1-Lipschitz");
            assert!(hx.abs() <= dx0 + 1e-9, "|h| exceeds d(x, x0)");
        }
    }

    #[test]
    fn busemann_poincare_oracle_mode() {
        // radial ray toward (1, 0), evaluated with the Poincaré metric
        let dist = |a: &Point, b: &Point| -> Result<f64> {
            let pa = PoincarePoint::new(a[0], a[1]).map_err(|e| e)?;
            let pb = PoincarePoint::new(b[0], b[1])?;
            Ok(poincare_distance(pa, pb))
        };
        let ray: Vec<Point> = (1..=20)
            .map(|j| pt(&[1.0 - 2.0f64.powi(-j), 0.0]))
            .collect();
        let x = pt(&[0.3, 0.0]);
        let o = pt(&[0.0, 0.0]);
        let eval = busemann_along(dist, &ray, &x, &o).unwrap();
        let expected = poincare_horofunction((1.0, 0.0), PoincarePoint::new(0.3, 0.0).unwrap());
        assert!((expected - (0.49f64 / 0.91).ln()).abs() < 1e-12);
        assert!((eval.value - expected).abs() < 1e-5, "{} vs {expected}", eval.value);
        // basepoint evaluates to zero along the whole ray
        let at_base = busemann_along(dist, &ray, &o, &o).unwrap();
        assert!(at_base.evals.iter().all(|e| e.abs() < 1e-12));
        // monotone nonincreasing; the embedding form is floored by
        // -d(x, basepoint) (triangle inequality)
        for w in eval.evals.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
        let floor = -dist(&x, &o).unwrap();
        assert!(eval.evals.iter().all(|e| *e >= floor - 1e-9));
    }

    #[test]
    fn busemann_hilbert_disk_descends_on_its_ray() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let conv = MetricConvention::half();
        let ray = geodesic_ray(&disk, &pt(&[0.0, 0.0]), &pt(&[1.0, 0.0]), 20).unwrap();
        let eval =
            busemann_along_hilbert(&disk, conv, &ray, &pt(&[0.5, 0.0]), &pt(&[0.0, 0.0]))
                .unwrap();
        assert!((eval.value + 0.5f64.atanh()).abs() < 1e-5, "{}", eval.value);
        assert!(eval.gap < 1e-5);
    }

    #[test]
    fn busemann_rejects_bad_rays() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let conv = MetricConvention::half();
        let short = vec![pt(&[0.1, 0.0]), pt(&[0.2, 0.0])];
        assert_eq!(
            busemann_along_hilbert(&disk, conv, &short, &pt(&[0.0, 0.3]), &pt(&[0.0, 0.0]))
                .unwrap_err(),
            Error::RayTooShort
        );
        let stalled = vec![pt(&[0.5, 0.0]), pt(&[0.3, 0.0]), pt(&[0.7, 0.0])];
        assert_eq!(
            busemann_along_hilbert(&disk, conv, &stalled, &pt(&[0.0, 0.3]), &pt(&[0.0, 0.0]))
                .unwrap_err(),
            Error::NotEscaping
        );
    }

    #[test]
    fn record_selection_on_linear_data() {
        let distances: Vec<f64> = (0..=20).map(|n| n as f64).collect();
        let sel = select_records(&distances, 1.0, 0.1).unwrap();
        // b(n) = 0.1 n is strictly increasing: every index is a record
        assert_eq!(sel.records, (1..=20).collect::<Vec<_>>());
        assert!(!sel.bounded_suspected);
        assert!((sel.b_values[19] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn record_selection_on_diag_orbit_data() {
        let distances: Vec<f64> = (0..=30).map(|n| n as f64 * LN2).collect();
        let sel = select_records(&distances, LN2, 0.05).unwrap();
        assert_eq!(sel.records.len(), 30);
        assert!(!sel.bounded_suspected);
    }

    #[test]
    fn record_selection_flags_stalled_data() {
        // bounded data with b(n) = a_n - (tau - eps) n: records keep
        // occurring while the +eps n term dominates, but an overestimated
        // tau makes b decrease and the flag fire
        let mut distances = vec![0.0];
        distances.extend(core::iter::repeat(1.0).take(20));
        let sel = select_records(&distances, 0.8, 0.25).unwrap();
        assert_eq!(sel.records, vec![1]);
        assert!(sel.bounded_suspected);
        // with tau at the honest 0 the drift term keeps b increasing
        let sel = select_records(&distances, 0.0, 0.5).unwrap();
        assert!(!sel.bounded_suspected);
        assert_eq!(sel.records.len(), 20);
    }

    #[test]
    fn certificate_on_diag_orbit() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let conv = MetricConvention::one();
        let map = Spec::projective_linear(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let orbit = iterate(&map, &pt(&[0.5, 0.5]), &simplex, 40, conv).unwrap();
        let cert =
            karlsson_certificate(&orbit, &simplex, conv, LN2, &default_epsilons()).unwrap();
        assert!(cert.slack.abs() <= 1e-6, "slack {}", cert.slack);
        // the certificate horofunction is the vertex limit log(x2/x1)
        let probe = pt(&[0.25, 0.75]);
        let h = cert.approximant.evaluate(&probe).unwrap();
        assert!((h - LN3).abs() < 1e-6, "{h}");
        // equality case of the horoball sublevels at the checked iterates
        let k = 5;
        let level = -(k as f64) * LN2 + 1e-6;
        assert!(cert
            .approximant
            .horoball_contains(&orbit.points[k], level)
            .unwrap());
        assert!(!cert
            .approximant
            .horoball_contains(&orbit.points[k], -(k as f64) * LN2 - 1e-3)
            .unwrap());
    }

    #[test]
    fn certificate_requires_escape() {
        let simplex = ConvexBody::standard_simplex(2).unwrap();
        let conv = MetricConvention::one();
        let map = Spec::projective_linear(vec![vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let orbit = iterate(&map, &pt(&[0.5, 0.5]), &simplex, 60, conv).unwrap();
        assert_eq!(
            karlsson_certificate(&orbit, &simplex, conv, 0.0, &default_epsilons()).unwrap_err(),
            Error::BoundedOrbitSuspected
        );
    }

    #[test]
    fn horoball_contains_basepoint_at_level_zero() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let base = pt(&[0.0, 0.0]);
        let h = HorofunctionApproximant::new(
            &disk,
            pt(&[0.95, 0.0]),
            base.clone(),
            MetricConvention::half(),
        )
        .unwrap();
        assert!(h.horoball_contains(&base, 0.0).unwrap());
        // far side of the disk sits outside the zero horoball
        assert!(!h.horoball_contains(&pt(&[-0.5, 0.0]), 0.0).unwrap());
    }

    #[test]
    fn poincare_phi_limit_matches_closed_form() {
        let zeta = (1.0, 0.0);
        let z = PoincarePoint::new(0.3, 0.0).unwrap();
        let closed = poincare_horofunction(zeta, z);
        let approx = poincare_phi_approx(zeta, 0.9999, z).unwrap();
        assert!((closed - approx).abs() < 1e-3, "{closed} vs {approx}");
        // h_zeta(0) = 0 exactly
        assert_eq!(
            poincare_horofunction(zeta, PoincarePoint::new(0.0, 0.0).unwrap()),
            0.0
        );
    }

    #[test]
    fn horoball_midpoints_stay_inside() {
        // horoballs are convex in these geometries: Euclidean midpoints of
        // member pairs stay members
        let disk = ConvexBody::unit_ball(2).unwrap();
        let h = HorofunctionApproximant::new(
            &disk,
            pt(&[0.9, 0.0]),
            pt(&[0.0, 0.0]),
            MetricConvention::half(),
        )
        .unwrap();
        let mut rng = crate::sample::rng(31);
        let level = 0.5;
        let mut tested = 0;
        while tested < 200 {
            let x = crate::sample::interior_point(&disk, &mut rng).unwrap();
            let y = crate::sample::interior_point(&disk, &mut rng).unwrap();
            if !(h.horoball_contains(&x, level).unwrap()
                && h.horoball_contains(&y, level).unwrap())
            {
                continue;
            }
            let mid = Point::new(linalg::lerp(x.coords(), y.coords(), 0.5)).unwrap();
            assert!(
                h.evaluate(&mid).unwrap() <= level + 1e-9,
                "midpoint left the horoball"
            );
            tested += 1;
        }
    }
}
