//! Orbit iteration and the asymptotic invariants of a semicontraction.
//!
//! For a nonexpansive self-map `f` the sequence `a_n = d(x, f^n(x))` is
//! subadditive, so `a_n / n` converges to its infimum: the translation
//! number `tau`. The step displacements `d(f^n x, f^(n+1) x)` are
//! nonincreasing with limit `delta(x)`, and the minimal displacement
//! `D = inf_p d(p, f(p))` sits between them:
//!
//! ```text
//! 0 <= tau <= D <= delta(x)
//! ```
//!
//! `tau` is estimated by a least-squares slope over the orbit tail (which
//! removes the `O(1/n)` bias of `a_n / n`), upper-bounded by `min a_m / m`;
//! `D` gets a certified upper bound from a derivative-free displacement
//! search seeded at orbit tail points and random restarts. For Hilbert
//! domains `D = tau` (both equal the best horofunction payoff), so the
//! measured gap between the two estimates is an end-to-end consistency
//! check; see [`gv_gap`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::geometry::{Classification, ConvexBody, Point};
use crate::horo::Certificate;
use crate::linalg;
use crate::maps::SemicontractionSpec;
use crate::metric::{hilbert_distance, MetricConvention, METRIC_BOUNDARY_TOL};
use crate::sample;
use crate::{Error, Result};

/// Orbit iteration halts when the relative interior slack falls below this.
pub const BOUNDARY_PROXIMITY_SLACK: f64 = 1e-12;

/// Orbit iteration halts when a step displacement falls below this.
pub const CONVERGENCE_DISPLACEMENT: f64 = 1e-14;

/// Tail slack below which an orbit counts as approaching the boundary.
pub const ESCAPE_SLACK: f64 = 1e-6;

/// Why iteration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    MaxIter,
    BoundaryProximity,
    Converged,
}

/// An iterate sequence with cached step displacements and distances from
/// the start, all in one metric convention.
#[derive(Clone, Debug)]
pub struct Orbit {
    /// `x, f(x), ..., f^n(x)`.
    pub points: Vec<Point>,
    /// `d(f^k x, f^(k+1) x)` for `k = 0..n`.
    pub displacements: Vec<f64>,
    /// `a_k = d(x, f^k x)` for `k = 0..=n`.
    pub from_start: Vec<f64>,
    pub map_id: String,
    pub stop_reason: StopReason,
}

impl Orbit {
    /// Number of stored points (`n + 1` for `n` steps).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        &self.points[self.points.len() - 1]
    }
}

/// Iterates `map` from `x0`, caching distances in `conv`.
///
/// Stops at `max_iter` steps, at boundary proximity (relative interior
/// slack under [`BOUNDARY_PROXIMITY_SLACK`], where double-precision
/// cross-ratios degrade), or at convergence (displacement under
/// [`CONVERGENCE_DISPLACEMENT`]). A distance overflow after the first step
/// is treated as boundary proximity rather than an error; an iterate
/// classified outside the body reports [`Error::MapLeftDomain`].
pub fn iterate(
    map: &SemicontractionSpec,
    x0: &Point,
    body: &ConvexBody,
    max_iter: usize,
    conv: MetricConvention,
) -> Result<Orbit> {
    if max_iter == 0 {
        return Err(Error::InvalidSpec("max_iter must be at least 1"));
    }
    match body.contains(x0, METRIC_BOUNDARY_TOL)? {
        Classification::Interior => {}
        Classification::Boundary => return Err(Error::DistanceOverflow),
        Classification::Outside => return Err(Error::OutsideDomain),
    }
    let mut orbit = Orbit {
        points: alloc::vec![x0.clone()],
        displacements: Vec::new(),
        from_start: alloc::vec![0.0],
        map_id: map.id(),
        stop_reason: StopReason::MaxIter,
    };
    for step in 0..max_iter {
        let cur = orbit.last().clone();
        let next = map.apply(&cur)?;
        if body.contains(&next, METRIC_BOUNDARY_TOL)? == Classification::Outside {
            return Err(Error::MapLeftDomain);
        }
        let disp = hilbert_distance(body, &cur, &next, conv);
        let a = hilbert_distance(body, x0, &next, conv);
        let (disp, a) = match (disp, a) {
            (Ok(d), Ok(a)) => (d, a),
            (Err(Error::DistanceOverflow), _) | (_, Err(Error::DistanceOverflow)) if step > 0 => {
                orbit.stop_reason = StopReason::BoundaryProximity;
                return Ok(orbit);
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        orbit.points.push(next.clone());
        orbit.displacements.push(disp);
        orbit.from_start.push(a);
        if body.interior_slack(&next)? < BOUNDARY_PROXIMITY_SLACK {
            orbit.stop_reason = StopReason::BoundaryProximity;
            return Ok(orbit);
        }
        if disp < CONVERGENCE_DISPLACEMENT {
            orbit.stop_reason = StopReason::Converged;
            return Ok(orbit);
        }
    }
    Ok(orbit)
}

/// Estimates of the asymptotic invariants from one orbit.
#[derive(Clone, Copy, Debug)]
pub struct DriftEstimates {
    /// Least-squares slope of `a_n` over the tail window (the last quarter
    /// of the orbit), clamped into `[0, tau_upper]`.
    pub tau_hat: f64,
    /// `min_m a_m / m`: an upper bound for the translation number.
    pub tau_upper: f64,
    /// Final step displacement.
    pub delta_hat: f64,
    /// Best displacement found by the probe search: an upper bound for the
    /// minimal displacement.
    pub d_upper: f64,
    /// Tail window length used for the slope.
    pub window: usize,
}

fn ls_slope(values: &[f64], first_index: usize) -> f64 {
    let n = values.len();
    debug_assert!(n >= 2);
    let mean_x = first_index as f64 + (n as f64 - 1.0) / 2.0;
    let mean_y: f64 = values.iter().sum::<f64>() / n as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, v) in values.iter().enumerate() {
        let dx = (first_index + k) as f64 - mean_x;
        num += dx * (v - mean_y);
        den += dx * dx;
    }
    num / den
}

fn displacement_at(
    map: &SemicontractionSpec,
    body: &ConvexBody,
    conv: MetricConvention,
    p: &Point,
) -> f64 {
    match map.apply(p) {
        Ok(fp) => hilbert_distance(body, p, &fp, conv).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}

/// One golden-section minimization of the displacement along `p + t u`,
/// restricted to 0.999 of the feasible interval.
fn golden_refine(
    map: &SemicontractionSpec,
    body: &ConvexBody,
    conv: MetricConvention,
    p: &Point,
    u: &[f64],
    evals: &mut usize,
    budget: usize,
) -> Option<(Point, f64)> {
    const PHI_INV: f64 = 0.618_033_988_749_894_9;
    let (t_lo, t_hi) = body.ray_interval(p, u).ok()?;
    let mut a = 0.999 * t_lo;
    let mut b = 0.999 * t_hi;
    let point_at = |t: f64| Point::new(linalg::add_scaled(p.coords(), t, u)).ok();
    let mut x1 = b - PHI_INV * (b - a);
    let mut x2 = a + PHI_INV * (b - a);
    let mut f1 = displacement_at(map, body, conv, &point_at(x1)?);
    let mut f2 = displacement_at(map, body, conv, &point_at(x2)?);
    *evals += 2;
    for _ in 0..28 {
        if *evals >= budget {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - PHI_INV * (b - a);
            f1 = displacement_at(map, body, conv, &point_at(x1)?);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + PHI_INV * (b - a);
            f2 = displacement_at(map, body, conv, &point_at(x2)?);
        }
        *evals += 1;
    }
    let (t, f) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    Some((point_at(t)?, f))
}

/// Drift estimates from an orbit, plus a displacement probe search.
///
/// Orbits shorter than 8 points are accepted only when they converged (the
/// invariants are then read off the fixed point); otherwise
/// [`Error::OrbitTooShort`]. The probe search runs coordinate-wise
/// golden-section refinement from orbit-tail seeds and 8 random interior
/// restarts, budgeted at `probes` displacement evaluations, and always
/// includes the cached orbit displacements (so `d_upper <= delta_hat`).
pub fn drift_estimates(
    orbit: &Orbit,
    map: &SemicontractionSpec,
    body: &ConvexBody,
    probes: usize,
    seed: u64,
    conv: MetricConvention,
) -> Result<DriftEstimates> {
    let n = orbit.len();
    if n < 8 && orbit.stop_reason != StopReason::Converged {
        return Err(Error::OrbitTooShort);
    }
    if n < 2 {
        return Err(Error::OrbitTooShort);
    }
    let tau_upper = orbit
        .from_start
        .iter()
        .enumerate()
        .skip(1)
        .map(|(m, a)| a / m as f64)
        .fold(f64::INFINITY, f64::min);
    // last quarter: late enough that geometric transients of a_n have
    // decayed below the slope tolerance, long enough to average roundoff
    let window = (n / 4).max(2);
    let first = n - window;
    let slope = ls_slope(&orbit.from_start[first..], first);
    let tau_hat = slope.clamp(0.0, tau_upper);
    let delta_hat = *orbit.displacements.last().unwrap();

    // cached displacements are free probes
    let mut d_upper = orbit
        .displacements
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let mut rng = sample::rng(seed);
    let mut seeds: Vec<Point> = Vec::new();
    for idx in [n - 1, (3 * n) / 4, n / 2] {
        let p = &orbit.points[idx];
        if body.interior_slack(p)? > 1e-9 {
            seeds.push(p.clone());
        }
    }
    for _ in 0..8 {
        seeds.push(sample::interior_point(body, &mut rng)?);
    }
    let mut evals = 0usize;
    let budget = probes.max(16);
    'seeds: for seed_point in seeds {
        let mut p = seed_point;
        let mut best = displacement_at(map, body, conv, &p);
        evals += 1;
        d_upper = d_upper.min(best);
        for _sweep in 0..2 {
            for u in body.search_directions() {
                if evals >= budget {
                    break 'seeds;
                }
                if let Some((q, f)) = golden_refine(map, body, conv, &p, &u, &mut evals, budget) {
                    if f < best {
                        best = f;
                        p = q;
                        d_upper = d_upper.min(f);
                    }
                }
            }
        }
    }
    Ok(DriftEstimates { tau_hat, tau_upper, delta_hat, d_upper, window })
}

/// Bounded / escaping dichotomy for an orbit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrbitClassification {
    /// Orbit stays in a metric ball of this radius around its start.
    Bounded { radius: f64 },
    /// Tail reaches within this relative slack of the boundary.
    Escaping { min_boundary_gap: f64 },
    /// Neither signal is clear at this length; run longer.
    Undetermined,
}

/// Classifies an orbit.
///
/// Escaping: the tail's interior slack falls under [`ESCAPE_SLACK`] and the
/// distances from the start increase over the last quarter. Bounded: the
/// orbit converged, or the sup of `a_n` was already attained in the first
/// half (with `1e-9` margin). Anything else is `Undetermined` - the safe
/// default, never an error.
pub fn classify_orbit(orbit: &Orbit, body: &ConvexBody) -> Result<OrbitClassification> {
    let n = orbit.len();
    let radius = orbit.from_start.iter().copied().fold(0.0f64, f64::max);
    if orbit.stop_reason == StopReason::Converged {
        return Ok(OrbitClassification::Bounded { radius });
    }
    if n < 8 {
        return Ok(OrbitClassification::Undetermined);
    }
    let quarter = (n / 4).max(2);
    let tail = &orbit.points[n - quarter..];
    let mut min_gap = f64::INFINITY;
    for p in tail {
        min_gap = min_gap.min(body.interior_slack(p)?);
    }
    let tail_a = &orbit.from_start[n - quarter..];
    let increasing = tail_a.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    if min_gap < ESCAPE_SLACK && increasing {
        return Ok(OrbitClassification::Escaping { min_boundary_gap: min_gap });
    }
    let half = n / 2;
    let max_first = orbit.from_start[..half].iter().copied().fold(0.0f64, f64::max);
    let max_last = orbit.from_start[half..].iter().copied().fold(0.0f64, f64::max);
    if max_last <= max_first + 1e-9 {
        return Ok(OrbitClassification::Bounded { radius });
    }
    Ok(OrbitClassification::Undetermined)
}

/// True when the distances from the start grow monotonically (within
/// `1e-12`) and the orbit classifies as escaping.
pub fn is_monotone_escape(orbit: &Orbit, body: &ConvexBody) -> Result<bool> {
    let monotone = orbit
        .from_start
        .windows(2)
        .all(|w| w[1] >= w[0] - 1e-12);
    Ok(monotone
        && matches!(
            classify_orbit(orbit, body)?,
            OrbitClassification::Escaping { .. }
        ))
}

/// Numerical test of the minimal-displacement / translation-number equality
/// and of its horofunction witness.
#[derive(Clone, Copy, Debug)]
pub struct GvGap {
    /// `|d_upper - tau_hat|`; small on Hilbert domains, where the two
    /// invariants coincide.
    pub d_tau_gap: f64,
    /// Empirical `inf (h(x) - h(f x))` over the orbit tail for the
    /// certificate horofunction.
    pub horo_payoff: f64,
    /// Whether the payoff reaches `tau_hat` within `tol`: the certificate
    /// witnesses the maximizing horofunction.
    pub certificate_witnesses_max: bool,
}

/// Evaluates [`GvGap`] for an orbit with a certificate from
/// [`crate::horo::karlsson_certificate`]. The payoff infimum runs over
/// consecutive tail pairs, so no extra map applications are needed.
pub fn gv_gap(
    estimates: &DriftEstimates,
    certificate: Option<&Certificate<'_>>,
    orbit: &Orbit,
    tol: f64,
) -> Result<GvGap> {
    let cert = certificate.ok_or(Error::MissingCertificate)?;
    let n = orbit.len();
    if n < 4 {
        return Err(Error::OrbitTooShort);
    }
    let mut payoff = f64::INFINITY;
    let mut prev = cert.approximant.evaluate(&orbit.points[n / 2])?;
    for k in n / 2..n - 1 {
        let next = cert.approximant.evaluate(&orbit.points[k + 1])?;
        payoff = payoff.min(prev - next);
        prev = next;
    }
    let d_tau_gap = (estimates.d_upper - estimates.tau_hat).abs();
    Ok(GvGap {
        d_tau_gap,
        horo_payoff: payoff,
        certificate_witnesses_max: payoff >= estimates.tau_hat - tol,
    })
}

/// Deterministic interior perturbation of a start point: a tangent step of
/// Euclidean size `magnitude`, shrunk toward the witness until interior.
pub fn perturbed_start(body: &ConvexBody, x0: &Point, magnitude: f64) -> Result<Point> {
    let n = body.dim();
    let mut dir = alloc::vec![0.0; n];
    dir[0] = 1.0;
    if n > 1 {
        dir[1] = -1.0;
    }
    body.project_direction(&mut dir);
    let norm = linalg::norm(&dir);
    if norm > 1e-12 {
        for c in dir.iter_mut() {
            *c /= norm;
        }
    }
    let mut mag = magnitude;
    for _ in 0..40 {
        let q = Point::new(linalg::add_scaled(x0.coords(), mag, &dir))?;
        if matches!(body.contains(&q, 1e-12)?, Classification::Interior) {
            return Ok(q);
        }
        mag *= 0.5;
    }
    Err(Error::InvalidSpec("could not perturb the start inside the body"))
}

/// Compact diagnostic string for error reporting in sweeps.
pub fn describe_classification(c: &OrbitClassification) -> String {
    match c {
        OrbitClassification::Bounded { radius } => format!("bounded(radius={radius:.6})"),
        OrbitClassification::Escaping { min_boundary_gap } => {
            format!("escaping(gap={min_boundary_gap:.3e})")
        }
        OrbitClassification::Undetermined => String::from("undetermined"),
    }
}
