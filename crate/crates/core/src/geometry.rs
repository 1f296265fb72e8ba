//! Bounded convex domains and the exact geometric queries the metric and the
//! dynamics are built on: membership classification, chords (the boundary
//! pair cut by a line through two interior points), minimal faces, and
//! boundary-segment tests.
//!
//! Chord parameters use the line `p(t) = x + t(y - x)`, so `t = 0` is `x` and
//! `t = 1` is `y`; for interior `x != y` the cut interval satisfies
//! `t_min < 0` and `t_max > 1`. Besides the raw parameters, every body also
//! produces the two *cross-ratio factors*
//!
//! ```text
//! (1 - t_min) / (-t_min)    and    t_max / (t_max - 1)
//! ```
//!
//! evaluated without forming `t - 1` differences of rounded parameters. For
//! half-space constraints both factors reduce to ratios of constraint slacks,
//! which keeps the downstream distance accurate even when one endpoint is
//! deep in a corner (on the simplex the slack *is* a coordinate, so the
//! factors stay exact at full relative precision).

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg;
use crate::num;
use crate::{Error, Result};

/// Default relative boundary tolerance for membership classification.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 16;

/// Relative degeneracy threshold below which two chord endpoints are
/// considered coincident.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// A point of the ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting empty, oversized, or non-finite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::InvalidSpec("point dimension must be in 1..=16"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpec("point coordinates must be finite"));
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

impl core::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.coords
    }
}

/// Membership classification at a given tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Interior,
    Boundary,
    Outside,
}

/// The boundary pair cut by the line through two interior points, with the
/// line parameters at which the boundary is met.
#[derive(Clone, Debug)]
pub struct Chord {
    /// Boundary point behind `x` (`p(t_min)`).
    pub a: Point,
    /// Boundary point beyond `y` (`p(t_max)`).
    pub b: Point,
    pub t_min: f64,
    pub t_max: f64,
}

/// A face of the boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum Face {
    /// Face of a polytope-like body: the set of tight constraint indices,
    /// plus the face's vertices when the ambient dimension permits
    /// enumeration (`dim <= 3` for general H-polytopes, any dimension for
    /// the standard simplex).
    Polytope { active: Vec<usize>, vertices: Vec<Point> },
    /// Exposed point of a strictly convex (or intersection) body.
    Exposed(Point),
}

impl Face {
    /// Face equality for verdict comparison: identical active sets for
    /// polytope faces, coincident points (within `tol`) for exposed ones.
    pub fn same(&self, other: &Face, tol: f64) -> bool {
        match (self, other) {
            (Face::Polytope { active: a, .. }, Face::Polytope { active: b, .. }) => a == b,
            (Face::Exposed(p), Face::Exposed(q)) => linalg::dist(p.coords(), q.coords()) <= tol,
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
enum BodyShape {
    HPolytope { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
    Ellipsoid { center: Vec<f64>, shape: Vec<Vec<f64>> },
    StandardSimplex,
    Intersection(Vec<ConvexBody>),
}

/// A bounded convex domain with nonempty interior, certified by a stored
/// interior witness point. Boundedness is enforced lazily: any chord whose
/// parameter interval is infinite reports [`Error::Unbounded`].
#[derive(Clone, Debug)]
pub struct ConvexBody {
    dim: usize,
    shape: BodyShape,
    witness: Point,
}

/// One side of a line cut: the parameter bound together with the cross-ratio
/// factor to use if this bound is the binding one.
#[derive(Clone, Copy, Debug)]
struct CutBound {
    t: f64,
    factor: f64,
}

#[derive(Clone, Copy, Debug)]
struct LineCut {
    lower: CutBound,
    upper: CutBound,
}

impl ConvexBody {
    // ----- constructors -------------------------------------------------

    /// H-polytope `{ x : normals[i] . x <= offsets[i] }` with an interior
    /// witness, validated at construction.
    pub fn hpolytope(normals: Vec<Vec<f64>>, offsets: Vec<f64>, witness: Point) -> Result<Self> {
        let dim = witness.dim();
        if normals.len() != offsets.len() || normals.is_empty() {
            return Err(Error::InvalidSpec("constraint rows and offsets must match"));
        }
        if normals.iter().any(|n| n.len() != dim) {
            return Err(Error::InvalidSpec("constraint row dimension mismatch"));
        }
        if normals.iter().any(|n| linalg::norm(n) <= 1e-300) {
            return Err(Error::InvalidSpec("zero constraint row"));
        }
        if offsets.iter().any(|b| !b.is_finite())
            || normals.iter().flatten().any(|a| !a.is_finite())
        {
            return Err(Error::InvalidSpec("constraint data must be finite"));
        }
        let body = ConvexBody {
            dim,
            shape: BodyShape::HPolytope { normals, offsets },
            witness,
        };
        body.check_witness()?;
        Ok(body)
    }

    /// Ellipsoid `{ x : (x - center)' Q (x - center) < 1 }` with SPD `Q`.
    /// The witness is the center.
    pub fn ellipsoid(center: Point, shape: Vec<Vec<f64>>) -> Result<Self> {
        let dim = center.dim();
        if shape.len() != dim || shape.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidSpec("shape matrix dimension mismatch"));
        }
        if !linalg::is_spd(&shape) {
            return Err(Error::InvalidSpec("shape matrix must be symmetric positive definite"));
        }
        let witness = center.clone();
        Ok(ConvexBody {
            dim,
            shape: BodyShape::Ellipsoid { center: center.into(), shape },
            witness,
        })
    }

    /// The open unit ball.
    pub fn unit_ball(dim: usize) -> Result<Self> {
        let center = Point::new(vec![0.0; dim])?;
        let mut q = vec![vec![0.0; dim]; dim];
        for (i, row) in q.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self::ellipsoid(center, q)
    }

    /// The standard simplex `{ x_i > 0, sum x_i = 1 }` in its ambient
    /// coordinates; chords live in the affine hull `sum u_i = 0`.
    pub fn standard_simplex(n: usize) -> Result<Self> {
        if n < 2 || n > MAX_DIM {
            return Err(Error::InvalidSpec("simplex needs ambient dimension in 2..=16"));
        }
        let witness = Point::new(vec![1.0 / n as f64; n])?;
        Ok(ConvexBody { dim: n, shape: BodyShape::StandardSimplex, witness })
    }

    /// The cube `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        if half_width <= 0.0 || !half_width.is_finite() {
            return Err(Error::InvalidSpec("cube half-width must be positive"));
        }
        let mut normals = Vec::with_capacity(2 * dim);
        let mut offsets = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut up = vec![0.0; dim];
            up[i] = 1.0;
            normals.push(up);
            offsets.push(half_width);
            let mut dn = vec![0.0; dim];
            dn[i] = -1.0;
            normals.push(dn);
            offsets.push(half_width);
        }
        Self::hpolytope(normals, offsets, Point::new(vec![0.0; dim])?)
    }

    /// Convex polygon in the plane from counterclockwise vertices.
    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidSpec("polygon needs at least three vertices"));
        }
        let m = vertices.len();
        let mut normals = Vec::with_capacity(m);
        let mut offsets = Vec::with_capacity(m);
        let mut cx = 0.0;
        let mut cy = 0.0;
        for i in 0..m {
            let [x0, y0] = vertices[i];
            let [x1, y1] = vertices[(i + 1) % m];
            // outward normal of a ccw edge
            let n = vec![y1 - y0, x0 - x1];
            let b = n[0] * x0 + n[1] * y0;
            normals.push(n);
            offsets.push(b);
            cx += x0 / m as f64;
            cy += y0 / m as f64;
        }
        Self::hpolytope(normals, offsets, Point::new(vec![cx, cy])?)
    }

    /// Regular polygon with `sides` vertices on a circle of radius
    /// `circumradius`, first vertex at the top.
    pub fn regular_polygon(sides: usize, circumradius: f64) -> Result<Self> {
        if sides < 3 {
            return Err(Error::InvalidSpec("polygon needs at least three vertices"));
        }
        let mut vs = Vec::with_capacity(sides);
        for k in 0..sides {
            let theta = core::f64::consts::FRAC_PI_2
                + 2.0 * core::f64::consts::PI * k as f64 / sides as f64;
            vs.push([circumradius * num::cos(theta), circumradius * num::sin(theta)]);
        }
        Self::polygon(&vs)
    }

    /// Intersection of bodies of one common dimension. The witness is the
    /// first component witness interior to every part.
    pub fn intersection(parts: Vec<ConvexBody>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpec("intersection needs at least one part"));
        }
        let dim = parts[0].dim;
        if parts.iter().any(|p| p.dim != dim) {
            return Err(Error::InvalidSpec("intersection parts must share a dimension"));
        }
        let witness = parts
            .iter()
            .map(|p| p.witness.clone())
            .find(|w| {
                parts
                    .iter()
                    .all(|p| matches!(p.contains(w, DEFAULT_TOL), Ok(Classification::Interior)))
            })
            .ok_or(Error::InvalidSpec(
                "no component witness is interior to every part; supply one via intersection_with_witness",
            ))?;
        Ok(ConvexBody { dim, shape: BodyShape::Intersection(parts), witness })
    }

    /// Intersection with an explicitly supplied interior witness.
    pub fn intersection_with_witness(parts: Vec<ConvexBody>, witness: Point) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpec("intersection needs at least one part"));
        }
        let dim = parts[0].dim;
        if parts.iter().any(|p| p.dim != dim) {
            return Err(Error::InvalidSpec("intersection parts must share a dimension"));
        }
        let body = ConvexBody { dim, shape: BodyShape::Intersection(parts), witness };
        body.check_witness()?;
        Ok(body)
    }

    fn check_witness(&self) -> Result<()> {
        if self.witness.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: self.witness.dim() });
        }
        match self.contains(&self.witness, DEFAULT_TOL)? {
            Classification::Interior => Ok(()),
            _ => Err(Error::InvalidSpec("witness point is not interior")),
        }
    }

    // ----- basic queries ------------------------------------------------

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The stored interior witness.
    pub fn witness(&self) -> &Point {
        &self.witness
    }

    fn check_dim(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.dim() });
        }
        Ok(())
    }

    /// Classifies `p` with a relative tolerance: half-space slacks are
    /// compared against `tol * (1 + |b_i|)`, quadratic slacks against
    /// `tol * (1 + ||p||)`.
    pub fn contains(&self, p: &Point, tol: f64) -> Result<Classification> {
        self.check_dim(p)?;
        match &self.shape {
            BodyShape::HPolytope { normals, offsets } => {
                let mut on_boundary = false;
                for (a, b) in normals.iter().zip(offsets) {
                    let slack = b - linalg::dot(a, p.coords());
                    let t = tol * (1.0 + num::abs(*b));
                    if slack < -t {
                        return Ok(Classification::Outside);
                    }
                    if slack <= t {
                        on_boundary = true;
                    }
                }
                Ok(if on_boundary { Classification::Boundary } else { Classification::Interior })
            }
            BodyShape::Ellipsoid { center, shape } => {
                let d = linalg::sub(p.coords(), center);
                let slack = 1.0 - linalg::quad_form(shape, &d);
                let t = tol * (1.0 + linalg::norm(p.coords()));
                Ok(if slack < -t {
                    Classification::Outside
                } else if slack <= t {
                    Classification::Boundary
                } else {
                    Classification::Interior
                })
            }
            BodyShape::StandardSimplex => {
                let sum: f64 = p.coords().iter().sum();
                if num::abs(sum - 1.0) > tol.max(1e-12) * 2.0 {
                    return Ok(Classification::Outside);
                }
                let mut on_boundary = false;
                for &c in p.coords() {
                    if c < -tol {
                        return Ok(Classification::Outside);
                    }
                    if c <= tol {
                        on_boundary = true;
                    }
                }
                Ok(if on_boundary { Classification::Boundary } else { Classification::Interior })
            }
            BodyShape::Intersection(parts) => {
                let mut on_boundary = false;
                for part in parts {
                    match part.contains(p, tol)? {
                        Classification::Outside => return Ok(Classification::Outside),
                        Classification::Boundary => on_boundary = true,
                        Classification::Interior => {}
                    }
                }
                Ok(if on_boundary { Classification::Boundary } else { Classification::Interior })
            }
        }
    }

    /// Signed relative interior slack: the margin `contains` compares against
    /// its tolerance. Positive inside, roughly zero on the boundary.
    pub fn interior_slack(&self, p: &Point) -> Result<f64> {
        self.check_dim(p)?;
        Ok(match &self.shape {
            BodyShape::HPolytope { normals, offsets } => normals
                .iter()
                .zip(offsets)
                .map(|(a, b)| (b - linalg::dot(a, p.coords())) / (1.0 + num::abs(*b)))
                .fold(f64::INFINITY, f64::min),
            BodyShape::Ellipsoid { center, shape } => {
                let d = linalg::sub(p.coords(), center);
                (1.0 - linalg::quad_form(shape, &d)) / (1.0 + linalg::norm(p.coords()))
            }
            BodyShape::StandardSimplex => {
                p.coords().iter().copied().fold(f64::INFINITY, f64::min)
            }
            BodyShape::Intersection(parts) => {
                let mut s = f64::INFINITY;
                for part in parts {
                    s = s.min(part.interior_slack(p)?);
                }
                s
            }
        })
    }

    // ----- chords ---------------------------------------------------------

    /// The maximal open parameter interval of `p(t) = x + t(y - x)` inside
    /// the body, with the boundary endpoints evaluated.
    pub fn chord(&self, x: &Point, y: &Point) -> Result<Chord> {
        let cut = self.line_cut(x, y)?;
        let a = Point::new(linalg::lerp(x.coords(), y.coords(), cut.lower.t))?;
        let b = Point::new(linalg::lerp(x.coords(), y.coords(), cut.upper.t))?;
        Ok(Chord { a, b, t_min: cut.lower.t, t_max: cut.upper.t })
    }

    /// The two cross-ratio factors `((1 - t_min)/(-t_min), t_max/(t_max - 1))`
    /// of the chord through `x` and `y`, evaluated stably (see module docs).
    pub fn chord_factors(&self, x: &Point, y: &Point) -> Result<(f64, f64)> {
        let cut = self.line_cut(x, y)?;
        Ok((cut.lower.factor, cut.upper.factor))
    }

    fn line_cut(&self, x: &Point, y: &Point) -> Result<LineCut> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let u = linalg::sub(y.coords(), x.coords());
        let sep = linalg::norm(&u);
        if sep <= DEGENERACY_TOL * (1.0 + linalg::norm(x.coords())) {
            return Err(Error::DegenerateChord);
        }
        self.cut_along(x, y, &u)
    }

    /// Parameter interval of the full line `x + t u` inside the body. Only
    /// `x` must be interior, so this also serves ray construction and line
    /// searches whose far endpoint is unknown.
    pub fn ray_interval(&self, x: &Point, u: &[f64]) -> Result<(f64, f64)> {
        self.check_dim(x)?;
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: u.len() });
        }
        if linalg::norm(u) <= 1e-300 {
            return Err(Error::DegenerateChord);
        }
        match &self.shape {
            BodyShape::HPolytope { normals, offsets } => {
                let sx: Vec<f64> = normals
                    .iter()
                    .zip(offsets)
                    .map(|(a, b)| b - linalg::dot(a, x.coords()))
                    .collect();
                if sx.iter().any(|s| *s <= 0.0) {
                    return Err(Error::OutsideDomain);
                }
                let dir: Vec<f64> = normals.iter().map(|a| linalg::dot(a, u)).collect();
                halfspace_interval(&sx, &dir)
            }
            BodyShape::StandardSimplex => {
                check_on_simplex_hull(x)?;
                if x.coords().iter().any(|s| *s <= 0.0) {
                    return Err(Error::OutsideDomain);
                }
                let dir: Vec<f64> = u.iter().map(|d| -d).collect();
                halfspace_interval(x.coords(), &dir)
            }
            BodyShape::Ellipsoid { center, shape } => {
                let dx = linalg::sub(x.coords(), center);
                let a = linalg::quad_form(shape, u);
                let b = dx
                    .iter()
                    .enumerate()
                    .map(|(i, _)| linalg::dot(&shape[i], u) * dx[i])
                    .sum::<f64>();
                let slack_x = 1.0 - linalg::quad_form(shape, &dx);
                if slack_x <= 0.0 {
                    return Err(Error::OutsideDomain);
                }
                let disc = num::sqrt(b * b + a * slack_x);
                let (neg_t_min, t_max) = if b >= 0.0 {
                    let n = (b + disc) / a;
                    (n, slack_x / (a * n))
                } else {
                    let t = (-b + disc) / a;
                    (slack_x / (a * t), t)
                };
                Ok((-neg_t_min, t_max))
            }
            BodyShape::Intersection(parts) => {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for part in parts {
                    let (l, h) = part.ray_interval(x, u)?;
                    lo = lo.max(l);
                    hi = hi.min(h);
                }
                Ok((lo, hi))
            }
        }
    }

    fn cut_along(&self, x: &Point, y: &Point, u: &[f64]) -> Result<LineCut> {
        match &self.shape {
            BodyShape::HPolytope { normals, offsets } => {
                let sx: Vec<f64> = normals
                    .iter()
                    .zip(offsets)
                    .map(|(a, b)| b - linalg::dot(a, x.coords()))
                    .collect();
                let sy: Vec<f64> = normals
                    .iter()
                    .zip(offsets)
                    .map(|(a, b)| b - linalg::dot(a, y.coords()))
                    .collect();
                if sx.iter().any(|s| *s <= 0.0) || sy.iter().any(|s| *s <= 0.0) {
                    return Err(Error::OutsideDomain);
                }
                let dir: Vec<f64> = normals.iter().map(|a| linalg::dot(a, u)).collect();
                halfspace_cut(&sx, &sy, &dir)
            }
            BodyShape::StandardSimplex => {
                check_on_simplex_hull(x)?;
                check_on_simplex_hull(y)?;
                let sx = x.coords();
                let sy = y.coords();
                if sx.iter().any(|s| *s <= 0.0) || sy.iter().any(|s| *s <= 0.0) {
                    return Err(Error::OutsideDomain);
                }
                // constraints x_i >= 0: slack is the coordinate, direction -u_i
                let dir: Vec<f64> = u.iter().map(|d| -d).collect();
                halfspace_cut(sx, sy, &dir)
            }
            BodyShape::Ellipsoid { center, shape } => {
                let dx = linalg::sub(x.coords(), center);
                let dy = linalg::sub(y.coords(), center);
                let a = linalg::quad_form(shape, u);
                let b = dx
                    .iter()
                    .enumerate()
                    .map(|(i, _)| linalg::dot(&shape[i], u) * dx[i])
                    .sum::<f64>();
                let slack_x = 1.0 - linalg::quad_form(shape, &dx);
                let slack_y = 1.0 - linalg::quad_form(shape, &dy);
                if slack_x <= 0.0 || slack_y <= 0.0 {
                    return Err(Error::OutsideDomain);
                }
                debug_assert!(a > 0.0);
                // roots of a t^2 + 2 b t - slack_x; the larger-magnitude root
                // comes from the additive branch, the other via Vieta.
                let disc = num::sqrt(b * b + a * slack_x);
                let (neg_t_min, t_max) = if b >= 0.0 {
                    let n = (b + disc) / a;
                    (n, slack_x / (a * n))
                } else {
                    let t = (-b + disc) / a;
                    (slack_x / (a * t), t)
                };
                let t_max_m1 = slack_y / (a * (1.0 + neg_t_min));
                Ok(LineCut {
                    lower: CutBound {
                        t: -neg_t_min,
                        factor: (1.0 + neg_t_min) / neg_t_min,
                    },
                    upper: CutBound {
                        t: t_max,
                        factor: (t_max_m1 + 1.0) / t_max_m1,
                    },
                })
            }
            BodyShape::Intersection(parts) => {
                let mut lower: Option<CutBound> = None;
                let mut upper: Option<CutBound> = None;
                for part in parts {
                    let cut = part.cut_along(x, y, u)?;
                    if lower.map_or(true, |l| cut.lower.t > l.t) {
                        lower = Some(cut.lower);
                    }
                    if upper.map_or(true, |h| cut.upper.t < h.t) {
                        upper = Some(cut.upper);
                    }
                }
                Ok(LineCut { lower: lower.unwrap(), upper: upper.unwrap() })
            }
        }
    }

    // ----- faces ----------------------------------------------------------

    /// The unique minimal face containing the boundary point `p`.
    ///
    /// H-polytopes report the set of constraints tight within the relative
    /// tolerance, plus the face's vertices when `dim <= 3`. The simplex
    /// reports the support face (vertices are the unit vectors of the
    /// nonzero coordinates, any dimension). Strictly convex bodies and
    /// intersections report the exposed point itself.
    pub fn minimal_face(&self, p: &Point, tol: f64) -> Result<Face> {
        if self.contains(p, tol)? != Classification::Boundary {
            return Err(Error::NotOnBoundary);
        }
        match &self.shape {
            BodyShape::HPolytope { normals, offsets } => {
                let active: Vec<usize> = normals
                    .iter()
                    .zip(offsets)
                    .enumerate()
                    .filter(|(_, (a, b))| {
                        num::abs(*b - linalg::dot(a, p.coords())) <= tol * (1.0 + num::abs(**b))
                    })
                    .map(|(i, _)| i)
                    .collect();
                debug_assert!(!active.is_empty());
                let vertices = if self.dim <= 3 {
                    polytope_face_vertices(normals, offsets, &active, tol)
                } else {
                    Vec::new()
                };
                Ok(Face::Polytope { active, vertices })
            }
            BodyShape::StandardSimplex => {
                let active: Vec<usize> = p
                    .coords()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c <= tol)
                    .map(|(i, _)| i)
                    .collect();
                let vertices = p
                    .coords()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c > tol)
                    .map(|(i, _)| {
                        let mut v = vec![0.0; self.dim];
                        v[i] = 1.0;
                        Point::new(v)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Face::Polytope { active, vertices })
            }
            BodyShape::Ellipsoid { .. } | BodyShape::Intersection(_) => {
                Ok(Face::Exposed(p.clone()))
            }
        }
    }

    /// Whether the closed segment `[p, q]` lies entirely in the boundary.
    ///
    /// Exact for H-polytopes and the simplex (a shared tight constraint is
    /// necessary and sufficient, slacks being affine along the segment);
    /// sampled at `samples` equispaced points otherwise.
    pub fn segment_in_boundary(
        &self,
        p: &Point,
        q: &Point,
        tol: f64,
        samples: usize,
    ) -> Result<bool> {
        if self.contains(p, tol)? != Classification::Boundary
            || self.contains(q, tol)? != Classification::Boundary
        {
            return Err(Error::NotOnBoundary);
        }
        match &self.shape {
            BodyShape::HPolytope { normals, offsets } => {
                Ok(normals.iter().zip(offsets).any(|(a, b)| {
                    num::abs(b - linalg::dot(a, p.coords())) <= tol * (1.0 + num::abs(*b))
                        && num::abs(b - linalg::dot(a, q.coords())) <= tol * (1.0 + num::abs(*b))
                }))
            }
            BodyShape::StandardSimplex => Ok(p
                .coords()
                .iter()
                .zip(q.coords())
                .any(|(a, b)| *a <= tol && *b <= tol)),
            _ => {
                let n = samples.max(3);
                for k in 0..n {
                    let t = k as f64 / (n - 1) as f64;
                    let m = Point::new(linalg::lerp(p.coords(), q.coords(), t))?;
                    if self.contains(&m, tol)? != Classification::Boundary {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Projects an interior point to the boundary along the ray from the
    /// witness through it.
    pub fn project_from_witness(&self, p: &Point) -> Result<Point> {
        let chord = self.chord(&self.witness, p)?;
        Ok(chord.b)
    }

    /// Whether faces are described by active constraint sets (H-polytopes
    /// and the simplex).
    pub fn is_polytopal(&self) -> bool {
        matches!(
            self.shape,
            BodyShape::HPolytope { .. } | BodyShape::StandardSimplex
        )
    }

    /// The face of a polytopal body with the given active constraint set,
    /// with vertices enumerated where [`ConvexBody::minimal_face`] would
    /// enumerate them.
    pub fn face_from_active(&self, active: Vec<usize>) -> Result<Face> {
        match &self.shape {
            BodyShape::HPolytope { normals, offsets } => {
                if active.iter().any(|i| *i >= normals.len()) {
                    return Err(Error::InvalidSpec("active constraint index out of range"));
                }
                let vertices = if self.dim <= 3 {
                    polytope_face_vertices(normals, offsets, &active, DEFAULT_TOL)
                } else {
                    Vec::new()
                };
                Ok(Face::Polytope { active, vertices })
            }
            BodyShape::StandardSimplex => {
                if active.iter().any(|i| *i >= self.dim) {
                    return Err(Error::InvalidSpec("active constraint index out of range"));
                }
                let vertices = (0..self.dim)
                    .filter(|i| !active.contains(i))
                    .map(|i| {
                        let mut v = vec![0.0; self.dim];
                        v[i] = 1.0;
                        Point::new(v)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Face::Polytope { active, vertices })
            }
            _ => Err(Error::InvalidSpec("faces by active set need a polytopal body")),
        }
    }

    /// Projects a direction onto the tangent space of the body's affine hull
    /// (the simplex lives in `sum x = 1`, so directions must sum to zero);
    /// the identity for full-dimensional bodies.
    pub fn project_direction(&self, u: &mut [f64]) {
        if matches!(self.shape, BodyShape::StandardSimplex) {
            let mean: f64 = u.iter().sum::<f64>() / u.len() as f64;
            for c in u.iter_mut() {
                *c -= mean;
            }
        }
    }

    /// A spanning set of affine-hull directions for coordinate-wise search:
    /// `e_i` in general, `e_i - e_n` on the simplex.
    pub fn search_directions(&self) -> Vec<Vec<f64>> {
        let n = self.dim;
        if matches!(self.shape, BodyShape::StandardSimplex) {
            (0..n - 1)
                .map(|i| {
                    let mut u = vec![0.0; n];
                    u[i] = 1.0;
                    u[n - 1] = -1.0;
                    u
                })
                .collect()
        } else {
            (0..n)
                .map(|i| {
                    let mut u = vec![0.0; n];
                    u[i] = 1.0;
                    u
                })
                .collect()
        }
    }
}

fn check_on_simplex_hull(p: &Point) -> Result<()> {
    let sum: f64 = p.coords().iter().sum();
    if num::abs(sum - 1.0) > 1e-7 {
        return Err(Error::OutsideDomain);
    }
    Ok(())
}

/// Parameter interval from slacks at `x` plus the directional derivative of
/// each constraint along the line.
fn halfspace_interval(sx: &[f64], dir: &[f64]) -> Result<(f64, f64)> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (s, d) in sx.iter().zip(dir) {
        if *d > 0.0 {
            hi = hi.min(s / d);
        } else if *d < 0.0 {
            lo = lo.max(s / d);
        }
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Unbounded);
    }
    Ok((lo, hi))
}

/// Cut interval from half-space data: slacks at both endpoints plus the
/// directional derivative of each constraint along the line. The binding
/// bound's cross-ratio factor is a plain slack ratio.
fn halfspace_cut(sx: &[f64], sy: &[f64], dir: &[f64]) -> Result<LineCut> {
    let mut upper: Option<(f64, usize)> = None;
    let mut lower: Option<(f64, usize)> = None;
    for (i, &d) in dir.iter().enumerate() {
        if d > 0.0 {
            let t = sx[i] / d;
            if upper.map_or(true, |(tu, _)| t < tu) {
                upper = Some((t, i));
            }
        } else if d < 0.0 {
            let t = sx[i] / d; // negative
            if lower.map_or(true, |(tl, _)| t > tl) {
                lower = Some((t, i));
            }
        }
    }
    match (lower, upper) {
        (Some((tl, j)), Some((tu, i))) => Ok(LineCut {
            lower: CutBound { t: tl, factor: sy[j] / sx[j] },
            upper: CutBound { t: tu, factor: sx[i] / sy[i] },
        }),
        _ => Err(Error::Unbounded),
    }
}

/// Vertices of the face `{ tight on `active` }` of a low-dimensional
/// H-polytope, by solving all full-rank constraint subsets of size `dim` and
/// keeping feasible solutions tight on the whole active set.
fn polytope_face_vertices(
    normals: &[Vec<f64>],
    offsets: &[f64],
    active: &[usize],
    tol: f64,
) -> Vec<Point> {
    let dim = normals[0].len();
    let m = normals.len();
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    subset_indices(m, dim, &mut Vec::new(), 0, &mut subsets);
    for s in &subsets {
        let rows: Vec<&[f64]> = s.iter().map(|&i| normals[i].as_slice()).collect();
        let rhs: Vec<f64> = s.iter().map(|&i| offsets[i]).collect();
        let Some(v) = linalg::solve(&rows, &rhs) else { continue };
        let feasible = normals.iter().zip(offsets).all(|(a, b)| {
            linalg::dot(a, &v) <= b + tol.max(1e-9) * (1.0 + num::abs(*b))
        });
        if !feasible {
            continue;
        }
        let on_face = active.iter().all(|&i| {
            num::abs(offsets[i] - linalg::dot(&normals[i], &v))
                <= tol.max(1e-9) * (1.0 + num::abs(offsets[i]))
        });
        if !on_face {
            continue;
        }
        if !vertices.iter().any(|w| linalg::dist(w, &v) <= 1e-7) {
            vertices.push(v);
        }
    }
    vertices.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    vertices
        .into_iter()
        .filter_map(|v| Point::new(v).ok())
        .collect()
}

fn subset_indices(m: usize, k: usize, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..m {
        cur.push(i);
        subset_indices(m, k, cur, i + 1, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn disk_center_is_interior() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        assert_eq!(
            disk.contains(&pt(&[0.0, 0.0]), 1e-9).unwrap(),
            Classification::Interior
        );
    }

    #[test]
    fn square_edge_point_is_boundary() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        assert_eq!(
            sq.contains(&pt(&[1.0, 0.3]), 1e-9).unwrap(),
            Classification::Boundary
        );
        assert_eq!(
            sq.contains(&pt(&[1.2, 0.0]), 1e-9).unwrap(),
            Classification::Outside
        );
    }

    #[test]
    fn simplex_membership() {
        let s = ConvexBody::standard_simplex(3).unwrap();
        assert_eq!(
            s.contains(&pt(&[0.2, 0.3, 0.5]), 1e-9).unwrap(),
            Classification::Interior
        );
        assert_eq!(
            s.contains(&pt(&[0.0, 0.5, 0.5]), 1e-9).unwrap(),
            Classification::Boundary
        );
        assert_eq!(
            s.contains(&pt(&[0.5, 0.6, -0.1]), 1e-9).unwrap(),
            Classification::Outside
        );
    }

    #[test]
    fn disk_chord_along_axis() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let c = disk.chord(&pt(&[0.0, 0.0]), &pt(&[0.5, 0.0])).unwrap();
        assert!((c.t_min + 2.0).abs() < 1e-12);
        assert!((c.t_max - 2.0).abs() < 1e-12);
        assert!((c.a[0] + 1.0).abs() < 1e-12 && c.a[1].abs() < 1e-12);
        assert!((c.b[0] - 1.0).abs() < 1e-12 && c.b[1].abs() < 1e-12);
    }

    #[test]
    fn square_chord_along_axis() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let c = sq.chord(&pt(&[0.0, 0.0]), &pt(&[0.5, 0.0])).unwrap();
        assert!((c.t_min + 2.0).abs() < 1e-12);
        assert!((c.t_max - 2.0).abs() < 1e-12);
    }

    #[test]
    fn halfspace_is_unbounded() {
        let hs = ConvexBody::hpolytope(
            vec![vec![-1.0, 0.0]],
            vec![0.0],
            pt(&[1.0, 0.0]),
        )
        .unwrap();
        let err = hs.chord(&pt(&[1.0, 0.0]), &pt(&[2.0, 0.5])).unwrap_err();
        assert_eq!(err, Error::Unbounded);
    }

    #[test]
    fn degenerate_chord_rejected() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let err = disk.chord(&pt(&[0.1, 0.1]), &pt(&[0.1, 0.1])).unwrap_err();
        assert_eq!(err, Error::DegenerateChord);
    }

    #[test]
    fn chord_reversal_swaps_roles() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let x = pt(&[0.1, -0.3]);
        let y = pt(&[0.4, 0.2]);
        let fwd = disk.chord(&x, &y).unwrap();
        let rev = disk.chord(&y, &x).unwrap();
        // t -> 1 - t exchanges the parametrizations
        assert!((fwd.t_min - (1.0 - rev.t_max)).abs() < 1e-10);
        assert!((fwd.t_max - (1.0 - rev.t_min)).abs() < 1e-10);
        assert!(linalg::dist(fwd.a.coords(), rev.b.coords()) < 1e-10);
        assert!(linalg::dist(fwd.b.coords(), rev.a.coords()) < 1e-10);
    }

    #[test]
    fn chord_endpoints_classify_boundary() {
        for body in [
            ConvexBody::unit_ball(2).unwrap(),
            ConvexBody::cube(2, 1.0).unwrap(),
            ConvexBody::standard_simplex(3).unwrap(),
        ] {
            let w = body.witness().clone();
            let shift: Vec<f64> = if matches!(body.shape, BodyShape::StandardSimplex) {
                vec![0.05, -0.02, -0.03]
            } else {
                vec![0.2, 0.1]
            };
            let y = Point::new(linalg::add_scaled(w.coords(), 1.0, &shift)).unwrap();
            let c = body.chord(&w, &y).unwrap();
            assert_eq!(body.contains(&c.a, 1e-8).unwrap(), Classification::Boundary);
            assert_eq!(body.contains(&c.b, 1e-8).unwrap(), Classification::Boundary);
        }
    }

    #[test]
    fn square_edge_face() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let f = sq.minimal_face(&pt(&[1.0, 0.3]), 1e-9).unwrap();
        match &f {
            Face::Polytope { active, vertices } => {
                assert_eq!(active, &vec![0]); // x <= 1 is the first constraint
                assert_eq!(vertices.len(), 2);
                assert!(vertices.iter().all(|v| (v[0] - 1.0).abs() < 1e-9));
            }
            _ => panic!("expected a polytope face"),
        }
    }

    #[test]
    fn square_corner_face() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let f = sq.minimal_face(&pt(&[1.0, 1.0]), 1e-9).unwrap();
        match &f {
            Face::Polytope { active, vertices } => {
                assert_eq!(active.len(), 2);
                assert_eq!(vertices.len(), 1);
            }
            _ => panic!("expected a polytope face"),
        }
    }

    #[test]
    fn disk_boundary_point_is_exposed() {
        let disk = ConvexBody::unit_ball(2).unwrap();
        let f = disk.minimal_face(&pt(&[1.0, 0.0]), 1e-9).unwrap();
        assert_eq!(f, Face::Exposed(pt(&[1.0, 0.0])));
    }

    #[test]
    fn interior_point_has_no_face() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        assert_eq!(
            sq.minimal_face(&pt(&[0.0, 0.0]), 1e-9).unwrap_err(),
            Error::NotOnBoundary
        );
    }

    #[test]
    fn minimal_face_supersets_fail_minimality_on_square() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        // for each edge midpoint, no strict superset of its active set stays tight
        let probes = [
            pt(&[1.0, 0.3]),
            pt(&[-1.0, 0.2]),
            pt(&[0.4, 1.0]),
            pt(&[-0.7, -1.0]),
        ];
        for p in &probes {
            let Face::Polytope { active, .. } = sq.minimal_face(p, 1e-9).unwrap() else {
                panic!()
            };
            for extra in 0..4usize {
                if active.contains(&extra) {
                    continue;
                }
                // tightness of the extra constraint must fail at p
                let tight = match extra {
                    0 => (p[0] - 1.0).abs() <= 1e-9,
                    1 => (-p[0] - 1.0).abs() <= 1e-9,
                    2 => (p[1] - 1.0).abs() <= 1e-9,
                    _ => (-p[1] - 1.0).abs() <= 1e-9,
                };
                assert!(!tight);
            }
        }
    }

    #[test]
    fn simplex_face_is_support_set() {
        // brute-force comparison against the support set for small n
        for n in 2..=4usize {
            let s = ConvexBody::standard_simplex(n).unwrap();
            let mut coords = vec![0.0; n];
            // one zero coordinate, mass spread over the rest
            coords[0] = 0.0;
            for c in coords.iter_mut().skip(1) {
                *c = 1.0 / (n - 1) as f64;
            }
            let f = s.minimal_face(&Point::new(coords.clone()).unwrap(), 1e-9).unwrap();
            let Face::Polytope { active, vertices } = f else { panic!() };
            assert_eq!(active, vec![0]);
            let support: Vec<usize> = (1..n).collect();
            let got: Vec<usize> = vertices
                .iter()
                .map(|v| v.coords().iter().position(|c| *c > 0.5).unwrap())
                .collect();
            assert_eq!(got, support);
        }
    }

    #[test]
    fn segment_tests() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        assert!(sq
            .segment_in_boundary(&pt(&[1.0, -0.5]), &pt(&[1.0, 0.5]), 1e-9, 17)
            .unwrap());
        assert!(sq
            .segment_in_boundary(&pt(&[1.0, 1.0]), &pt(&[-1.0, 1.0]), 1e-9, 17)
            .unwrap());
        assert!(!sq
            .segment_in_boundary(&pt(&[1.0, 0.0]), &pt(&[-1.0, 0.0]), 1e-9, 17)
            .unwrap());
        let disk = ConvexBody::unit_ball(2).unwrap();
        assert!(!disk
            .segment_in_boundary(&pt(&[1.0, 0.0]), &pt(&[-1.0, 0.0]), 1e-9, 17)
            .unwrap());
        assert_eq!(
            disk.segment_in_boundary(&pt(&[0.2, 0.0]), &pt(&[1.0, 0.0]), 1e-9, 17)
                .unwrap_err(),
            Error::NotOnBoundary
        );
    }

    #[test]
    fn intersection_classification_and_chord() {
        let lens = ConvexBody::intersection(vec![
            ConvexBody::unit_ball(2).unwrap(),
            ConvexBody::cube(2, 0.8).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            lens.contains(&pt(&[0.0, 0.0]), 1e-9).unwrap(),
            Classification::Interior
        );
        // cube binds along the x axis, ball would bind later
        let c = lens.chord(&pt(&[0.0, 0.0]), &pt(&[0.4, 0.0])).unwrap();
        assert!((c.t_max - 2.0).abs() < 1e-12);
        assert!((c.t_min + 2.0).abs() < 1e-12);
        // ball binds along the diagonal
        let d = lens.chord(&pt(&[0.0, 0.0]), &pt(&[0.4, 0.4])).unwrap();
        let r = linalg::norm(d.b.coords());
        assert!((r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ellipsoid_rejects_bad_shape() {
        let err = ConvexBody::ellipsoid(pt(&[0.0, 0.0]), vec![vec![1.0, 0.0], vec![0.0, -1.0]])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn zero_constraint_row_rejected() {
        let err = ConvexBody::hpolytope(
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            vec![1.0, 1.0],
            pt(&[0.0, 0.0]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn chord_factors_match_parameters() {
        // moderate regime: factors from slack ratios agree with the naive
        // parameter arithmetic
        let bodies = [
            ConvexBody::unit_ball(2).unwrap(),
            ConvexBody::cube(2, 1.0).unwrap(),
        ];
        for body in &bodies {
            let x = pt(&[0.1, -0.2]);
            let y = pt(&[0.35, 0.25]);
            let c = body.chord(&x, &y).unwrap();
            let (fx, fy) = body.chord_factors(&x, &y).unwrap();
            let naive_fx = (1.0 - c.t_min) / (-c.t_min);
            let naive_fy = c.t_max / (c.t_max - 1.0);
            assert!((fx - naive_fx).abs() < 1e-10 * naive_fx);
            assert!((fy - naive_fy).abs() < 1e-10 * naive_fy);
        }
    }

    #[test]
    fn regular_polygon_contains_center() {
        let pent = ConvexBody::regular_polygon(5, 1.0).unwrap();
        assert_eq!(
            pent.contains(&pt(&[0.0, 0.0]), 1e-9).unwrap(),
            Classification::Interior
        );
        assert_eq!(
            pent.contains(&pt(&[0.0, 1.0]), 1e-9).unwrap(),
            Classification::Boundary
        );
    }
}
