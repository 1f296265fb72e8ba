//! Error type shared across the crate.

use core::fmt;

/// Everything that can go wrong in geometric queries, metric evaluation,
/// map application, and orbit analysis.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Point and body (or two points) have different ambient dimensions.
    DimensionMismatch { expected: usize, got: usize },
    /// A body failed a construction invariant (empty interior, zero
    /// constraint row, non-SPD shape matrix, bad witness, ...).
    InvalidSpec(&'static str),
    /// Chord endpoints coincide within the degeneracy tolerance.
    DegenerateChord,
    /// A chord has an infinite parameter interval: the body is unbounded.
    Unbounded,
    /// A point expected to be interior is not.
    OutsideDomain,
    /// A point expected to lie on the boundary does not.
    NotOnBoundary,
    /// A point is not an interior point of the standard simplex.
    NotInSimplex,
    /// A point is not inside the open unit disk.
    OutsideDisk,
    /// The distance exceeds the cap, or a point sits within the metric's
    /// boundary tolerance where the cross-ratio is no longer trustworthy.
    DistanceOverflow,
    /// A Busemann ray has fewer than three points.
    RayTooShort,
    /// A Busemann ray's distances from the basepoint fail to increase.
    NotEscaping,
    /// Record selection found no new record in the tail: the orbit looks
    /// bounded, so no escape certificate can be anchored.
    BoundedOrbitSuspected,
    /// The orbit is too short for certificate construction.
    InsufficientLength,
    /// The orbit is too short for drift estimation.
    OrbitTooShort,
    /// A map sent an interior point outside its domain.
    MapLeftDomain,
    /// A cone map sent a positive vector to zero.
    ZeroImage,
    /// A matrix entry expected to be strictly positive is not.
    NonPositiveEntry,
    /// A horofunction certificate was required but not supplied.
    MissingCertificate,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidSpec(why) => write!(f, "invalid specification: {why}"),
            Error::DegenerateChord => write!(f, "chord endpoints coincide"),
            Error::Unbounded => write!(f, "unbounded body: chord interval is infinite"),
            Error::OutsideDomain => write!(f, "point is not interior to the body"),
            Error::NotOnBoundary => write!(f, "point is not on the boundary"),
            Error::NotInSimplex => write!(f, "point is not interior to the standard simplex"),
            Error::OutsideDisk => write!(f, "point is not inside the open unit disk"),
            Error::DistanceOverflow => write!(f, "distance overflow near the boundary"),
            Error::RayTooShort => write!(f, "ray needs at least three points"),
            Error::NotEscaping => write!(f, "ray distances from basepoint do not increase"),
            Error::BoundedOrbitSuspected => {
                write!(f, "no late record time: orbit appears bounded")
            }
            Error::InsufficientLength => write!(f, "orbit too short for a certificate"),
            Error::OrbitTooShort => write!(f, "orbit too short for drift estimates"),
            Error::MapLeftDomain => write!(f, "map sent an interior point out of the domain"),
            Error::ZeroImage => write!(f, "cone map produced the zero vector"),
            Error::NonPositiveEntry => write!(f, "matrix entry must be strictly positive"),
            Error::MissingCertificate => write!(f, "no horofunction certificate available"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
