//! Seeded interior sampling. Points are drawn along random chords through
//! the witness, which is cheap, works for every body variant, and puts
//! useful mass near the boundary where contraction ratios are interesting.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Classification, ConvexBody, Point};
use crate::linalg;
use crate::Result;

/// The crate's deterministic generator, seeded from a plain integer.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_direction(body: &ConvexBody, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = body.dim();
    loop {
        let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        body.project_direction(&mut u);
        let norm = linalg::norm(&u);
        if norm > 1e-3 {
            for c in u.iter_mut() {
                *c /= norm;
            }
            return u;
        }
    }
}

/// A random interior point: uniform position on a random chord through the
/// witness, shrunk by `margin` so the draw stays strictly inside.
pub fn interior_point_with_margin(
    body: &ConvexBody,
    rng: &mut ChaCha8Rng,
    margin: f64,
) -> Result<Point> {
    let w = body.witness();
    loop {
        let u = random_direction(body, rng);
        let (t_min, t_max) = body.ray_interval(w, &u)?;
        let t = rng.gen_range(margin * t_min..margin * t_max);
        let p = Point::new(linalg::add_scaled(w.coords(), t, &u))?;
        if matches!(body.contains(&p, 1e-12)?, Classification::Interior) {
            return Ok(p);
        }
    }
}

/// A random interior point at the default margin (0.9 of the chord).
pub fn interior_point(body: &ConvexBody, rng: &mut ChaCha8Rng) -> Result<Point> {
    interior_point_with_margin(body, rng, 0.9)
}

/// A small interior perturbation of `p`: a random tangent step of Euclidean
/// size scaled between `lo` and `hi`, retried until strictly interior.
pub fn perturb_interior(
    body: &ConvexBody,
    p: &Point,
    rng: &mut ChaCha8Rng,
    lo: f64,
    hi: f64,
) -> Result<Point> {
    for _ in 0..64 {
        let u = random_direction(body, rng);
        let eta = rng.gen_range(lo..hi);
        let q = Point::new(linalg::add_scaled(p.coords(), eta, &u))?;
        if matches!(body.contains(&q, 1e-12)?, Classification::Interior) {
            return Ok(q);
        }
    }
    // fall back to shrinking toward the witness
    let q = Point::new(linalg::lerp(p.coords(), body.witness().coords(), lo))?;
    Ok(q)
}
