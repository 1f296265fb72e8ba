//! Randomized invariants. Strategies draw generator seeds; points are then
//! sampled inside each body with the crate's own chord sampler, which keeps
//! every draw valid for every body variant.

use proptest::prelude::*;

use hilbert_dyn::geometry::{Classification, ConvexBody, Face, Point};
use hilbert_dyn::metric::{
    gromov_product, hilbert_distance, simplex_distance, MetricConvention,
};
use hilbert_dyn::{sample, Error};

fn euclid(a: &Point, b: &Point) -> f64 {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn bodies() -> Vec<(&'static str, ConvexBody)> {
    vec![
        ("disk", ConvexBody::unit_ball(2).unwrap()),
        ("square", ConvexBody::cube(2, 1.0).unwrap()),
        ("simplex3", ConvexBody::standard_simplex(3).unwrap()),
        (
            "lens",
            ConvexBody::intersection(vec![
                ConvexBody::unit_ball(2).unwrap(),
                ConvexBody::cube(2, 0.8).unwrap(),
            ])
            .unwrap(),
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms_hold(seed in any::<u64>()) {
        let conv = MetricConvention::one();
        for (name, body) in bodies() {
            let mut rng = sample::rng(seed);
            let x = sample::interior_point(&body, &mut rng).unwrap();
            let y = sample::interior_point(&body, &mut rng).unwrap();
            let z = sample::interior_point(&body, &mut rng).unwrap();
            let dxy = hilbert_distance(&body, &x, &y, conv).unwrap();
            let dyx = hilbert_distance(&body, &y, &x, conv).unwrap();
            let dxz = hilbert_distance(&body, &x, &z, conv).unwrap();
            let dzy = hilbert_distance(&body, &z, &y, conv).unwrap();
            prop_assert!(dxy >= 0.0, "{name}: negative distance");
            prop_assert!((dxy - dyx).abs() <= 1e-12 * (1.0 + dxy), "{name}: asymmetric");
            prop_assert!(dxy <= dxz + dzy + 1e-9, "{name}: triangle violated");
            // identity of indiscernibles, numerically: same point gives zero
            prop_assert_eq!(hilbert_distance(&body, &x, &x, conv).unwrap(), 0.0);
        }
    }

    #[test]
    fn gromov_products_are_nonnegative(seed in any::<u64>()) {
        let conv = MetricConvention::one();
        for (_, body) in bodies() {
            let mut rng = sample::rng(seed);
            let x = sample::interior_point(&body, &mut rng).unwrap();
            let y = sample::interior_point(&body, &mut rng).unwrap();
            let base = sample::interior_point(&body, &mut rng).unwrap();
            let g = gromov_product(&body, &x, &y, &base, conv).unwrap();
            prop_assert!(g >= -1e-9);
        }
    }

    #[test]
    fn chord_reversal_swaps_parameters(seed in any::<u64>()) {
        for (_, body) in bodies() {
            let mut rng = sample::rng(seed);
            let x = sample::interior_point(&body, &mut rng).unwrap();
            let y = sample::interior_point(&body, &mut rng).unwrap();
            if euclid(&x, &y) < 1e-9 {
                continue;
            }
            let fwd = body.chord(&x, &y).unwrap();
            let rev = body.chord(&y, &x).unwrap();
            let scale = 1.0 + fwd.t_max.abs() + fwd.t_min.abs();
            prop_assert!((fwd.t_min - (1.0 - rev.t_max)).abs() <= 1e-9 * scale);
            prop_assert!((fwd.t_max - (1.0 - rev.t_min)).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn chord_endpoints_lie_on_boundary(seed in any::<u64>()) {
        for (name, body) in bodies() {
            let mut rng = sample::rng(seed);
            let x = sample::interior_point(&body, &mut rng).unwrap();
            let y = sample::interior_point(&body, &mut rng).unwrap();
            if euclid(&x, &y) < 1e-9 {
                continue;
            }
            let chord = body.chord(&x, &y).unwrap();
            for p in [&chord.a, &chord.b] {
                let class = body.contains(p, 1e-8).unwrap();
                prop_assert_eq!(class, Classification::Boundary, "{}", name);
            }
        }
    }

    #[test]
    fn simplex_closed_form_matches_chord(seed in any::<u64>(), n in 2usize..=4) {
        let body = ConvexBody::standard_simplex(n).unwrap();
        let mut rng = sample::rng(seed);
        let x = sample::interior_point(&body, &mut rng).unwrap();
        let y = sample::interior_point(&body, &mut rng).unwrap();
        let closed = simplex_distance(&x, &y).unwrap();
        let chord = hilbert_distance(&body, &x, &y, MetricConvention::one()).unwrap();
        prop_assert!((closed - chord).abs() <= 1e-8, "{closed} vs {chord}");
    }

    #[test]
    fn scale_half_is_exactly_half(seed in any::<u64>()) {
        for (_, body) in bodies() {
            let mut rng = sample::rng(seed);
            let x = sample::interior_point(&body, &mut rng).unwrap();
            let y = sample::interior_point(&body, &mut rng).unwrap();
            let one = hilbert_distance(&body, &x, &y, MetricConvention::one()).unwrap();
            let half = hilbert_distance(&body, &x, &y, MetricConvention::half()).unwrap();
            prop_assert_eq!(half, 0.5 * one);
        }
    }

    #[test]
    fn simplex_minimal_face_is_the_support(seed in any::<u64>(), n in 2usize..=4) {
        let body = ConvexBody::standard_simplex(n).unwrap();
        let mut rng = sample::rng(seed);
        let interior = sample::interior_point(&body, &mut rng).unwrap();
        // zero out one coordinate and renormalize onto a facet
        let kill = (seed as usize) % n;
        let mut coords: Vec<f64> = interior.coords().to_vec();
        coords[kill] = 0.0;
        let sum: f64 = coords.iter().sum();
        for c in coords.iter_mut() {
            *c /= sum;
        }
        let p = Point::new(coords.clone()).unwrap();
        let face = body.minimal_face(&p, 1e-9).unwrap();
        match face {
            Face::Polytope { active, vertices } => {
                let support: Vec<usize> =
                    (0..n).filter(|i| coords[*i] > 1e-9).collect();
                prop_assert_eq!(&active, &vec![kill]);
                let got: Vec<usize> = vertices
                    .iter()
                    .map(|v| v.coords().iter().position(|c| *c > 0.5).unwrap())
                    .collect();
                prop_assert_eq!(got, support);
            }
            _ => prop_assert!(false, "expected polytope face"),
        }
    }

    #[test]
    fn near_boundary_distances_overflow(seed in any::<u64>()) {
        // completeness proxy: approaching the boundary blows distances up
        let disk = ConvexBody::unit_ball(2).unwrap();
        let mut rng = sample::rng(seed);
        let x = sample::interior_point(&disk, &mut rng).unwrap();
        let p = Point::new(vec![1.0 - 1e-5, 0.0]).unwrap();
        let d = hilbert_distance(&disk, &x, &p, MetricConvention::one()).unwrap();
        prop_assert!(d > 10.0 - hilbert_distance(&disk, &x, &Point::new(vec![0.0, 0.0]).unwrap(), MetricConvention::one()).unwrap());
        let q = Point::new(vec![1.0 - 1e-15, 0.0]).unwrap();
        prop_assert_eq!(
            hilbert_distance(&disk, &x, &q, MetricConvention::one()).unwrap_err(),
            Error::DistanceOverflow
        );
    }
}
