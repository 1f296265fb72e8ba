//! Hilbert's cross-ratio distance, the simplex closed form, the Gromov
//! product, and the Poincaré-disk oracle metric.
//!
//! The distance through two interior points `x`, `y` with chord endpoints
//! `a = p(t_min)`, `b = p(t_max)` is
//!
//! ```text
//! d(x, y) = scale * log( (1 - t_min)/(-t_min) * t_max/(t_max - 1) )
//! ```
//!
//! Two conventions coexist in the literature: `scale = 1` (the cone /
//! Perron-Frobenius convention, under which the simplex closed form and
//! Birkhoff's `tanh(diam/4)` coefficient hold without extra factors) and
//! `scale = 1/2` (under which the unit ball becomes the Klein model of
//! hyperbolic space). [`MetricConvention`] makes the choice explicit; the
//! default is `scale = 1`.

use crate::geometry::{Classification, ConvexBody, Point, DEGENERACY_TOL};
use crate::linalg;
use crate::num;
use crate::{Error, Result};

/// Interior gate for distance evaluation: points with less relative slack
/// than this are treated as boundary points and overflow.
pub const METRIC_BOUNDARY_TOL: f64 = 1e-13;

/// Distances beyond this cap report [`Error::DistanceOverflow`].
pub const DISTANCE_CAP: f64 = 1e6;

/// The scale convention for the cross-ratio logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricConvention {
    scale: f64,
}

impl MetricConvention {
    /// Cone convention, `scale = 1` (default).
    pub const fn one() -> Self {
        MetricConvention { scale: 1.0 }
    }

    /// Hyperbolic convention, `scale = 1/2`.
    pub const fn half() -> Self {
        MetricConvention { scale: 0.5 }
    }

    pub const fn scale(&self) -> f64 {
        self.scale
    }
}

impl Default for MetricConvention {
    fn default() -> Self {
        MetricConvention::one()
    }
}

fn gate_interior(body: &ConvexBody, p: &Point) -> Result<()> {
    match body.contains(p, METRIC_BOUNDARY_TOL)? {
        Classification::Interior => Ok(()),
        Classification::Boundary => Err(Error::DistanceOverflow),
        Classification::Outside => Err(Error::OutsideDomain),
    }
}

/// Hilbert's projective distance between interior points of `body`.
///
/// Returns 0 for coincident points (short-circuited before the chord
/// degeneracy check). Points within [`METRIC_BOUNDARY_TOL`] of the boundary,
/// and values exceeding [`DISTANCE_CAP`], report
/// [`Error::DistanceOverflow`].
pub fn hilbert_distance(
    body: &ConvexBody,
    x: &Point,
    y: &Point,
    conv: MetricConvention,
) -> Result<f64> {
    gate_interior(body, x)?;
    gate_interior(body, y)?;
    let sep = linalg::dist(x.coords(), y.coords());
    if sep <= DEGENERACY_TOL * (1.0 + linalg::norm(x.coords())) {
        return Ok(0.0);
    }
    let (fx, fy) = body.chord_factors(x, y)?;
    let d = conv.scale() * (num::ln(fx) + num::ln(fy));
    if !d.is_finite() || d > DISTANCE_CAP {
        return Err(Error::DistanceOverflow);
    }
    // factors are >= 1 up to roundoff, clamp the dust
    Ok(d.max(0.0))
}

/// Closed form on the standard simplex at scale 1:
/// `log( max_i(x_i/y_i) / min_i(x_i/y_i) )`.
pub fn simplex_distance(x: &Point, y: &Point) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim() });
    }
    for p in [x, y] {
        let sum: f64 = p.coords().iter().sum();
        if num::abs(sum - 1.0) > 1e-7 || p.coords().iter().any(|c| *c <= 0.0) {
            return Err(Error::NotInSimplex);
        }
    }
    let mut max_r = f64::NEG_INFINITY;
    let mut min_r = f64::INFINITY;
    for (a, b) in x.coords().iter().zip(y.coords()) {
        let r = a / b;
        max_r = max_r.max(r);
        min_r = min_r.min(r);
    }
    Ok(num::ln(max_r) - num::ln(min_r))
}

/// Gromov product `(x, x')_basept = (d(x,b) + d(x',b) - d(x,x')) / 2`.
///
/// Nonnegative by the triangle inequality; stays bounded along pairs of
/// sequences whose boundary limits are not joined by a boundary segment.
pub fn gromov_product(
    body: &ConvexBody,
    x: &Point,
    xp: &Point,
    basept: &Point,
    conv: MetricConvention,
) -> Result<f64> {
    let dxb = hilbert_distance(body, x, basept, conv)?;
    let dxpb = hilbert_distance(body, xp, basept, conv)?;
    let dxxp = hilbert_distance(body, x, xp, conv)?;
    Ok(0.5 * (dxb + dxpb - dxxp))
}

/// A point of the open unit disk in the plane, for the Poincaré oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoincarePoint {
    pub re: f64,
    pub im: f64,
}

impl PoincarePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) || re * re + im * im >= 1.0 {
            return Err(Error::OutsideDisk);
        }
        Ok(PoincarePoint { re, im })
    }

    pub fn norm(&self) -> f64 {
        num::sqrt(self.re * self.re + self.im * self.im)
    }
}

/// Poincaré metric of curvature -1 on the unit disk:
/// `d(z, w) = log((1 + rho)/(1 - rho))` with
/// `rho = |z - w| / |1 - z * conj(w)|`.
///
/// Radially this is `d(0, z) = log((1 + |z|)/(1 - |z|))`; the general form
/// follows by Möbius invariance. Serves as the independent oracle for the
/// Hilbert-metric horofunction computations on the disk.
pub fn poincare_distance(z: PoincarePoint, w: PoincarePoint) -> f64 {
    let dre = z.re - w.re;
    let dim = z.im - w.im;
    let num_mod = num::sqrt(dre * dre + dim * dim);
    // 1 - z*conj(w) = (1 - (zr*wr + zi*wi)) - (zi*wr - zr*wi) i
    let re = 1.0 - (z.re * w.re + z.im * w.im);
    let im = z.re * w.im - z.im * w.re;
    let den_mod = num::sqrt(re * re + im * im);
    let rho = num_mod / den_mod;
    if rho <= 0.0 {
        return 0.0;
    }
    num::ln((1.0 + rho) / (1.0 - rho))
}
