//! Hilbert's projective metric on bounded convex domains and the dynamics of
//! its nonexpansive self-maps.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`geometry`]: convex bodies (H-polytopes, ellipsoids, the standard
//!   simplex, intersections) with chord, membership, and face queries;
//! - [`metric`]: the cross-ratio distance, the simplex closed form, Gromov
//!   products, and the Poincaré-disk oracle metric;
//! - [`maps`]: a library of concrete semicontractions (projective linear,
//!   topical, projective on Klein-type charts) with empirical
//!   nonexpansiveness certification;
//! - [`dynamics`]: orbit iteration, translation-number / minimal-displacement
//!   estimation, and bounded-vs-escaping classification;
//! - [`horo`]: horofunction approximants, Busemann evaluations along rays,
//!   and record-time escape certificates;
//! - [`conjecture`]: limit-set clustering, attractor faces, star witnesses,
//!   and per-run verdicts on single-face accumulation;
//! - [`benchmarks`]: the built-in catalog of maps used by the validation
//!   suites.
//!
//! The core is `no_std`-compatible (`alloc` required); enable the `libm`
//! feature instead of `std` for float math on bare targets.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("hilbert-dyn requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod benchmarks;
pub mod conjecture;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod horo;
pub(crate) mod linalg;
pub mod maps;
pub mod metric;
pub(crate) mod num;
pub mod sample;

pub use error::Error;
pub use geometry::{Chord, Classification, ConvexBody, Face, Point};
pub use metric::MetricConvention;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
