//! Arm events and color switching for critical bond percolation on the
//! square lattice.
//!
//! The crate is `no_std` (it needs `alloc`). It contains the lattice and
//! duality geometry, critical sampling with a counter-based generator,
//! cluster and path computations, exact and oracle arm-event detectors,
//! Jordan-curve regions, the measure-preserving shift transformation with
//! its inverse, the flip-and-shift color switching pipeline, and Monte Carlo
//! estimators. IO, file formats and the command line live in the `percolab`
//! crate.
#![no_std]

extern crate alloc;

pub mod arms;
pub mod color;
pub mod colorswitch;
pub mod config;
pub mod connectivity;
pub mod estimator;
pub(crate) mod flow;
pub mod lattice;
pub mod regions;
pub mod shift;

use alloc::string::String;

pub use color::{Color, ColorSequence};
pub use config::{Configuration, EdgeSet, RngSeed};
pub use lattice::{Annulus, BoxRegion, Edge, Lattice, Orientation, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid radii: inner {inner}, outer {outer}")]
    InvalidRadii { inner: u32, outer: u32 },
    #[error("edge lies on the wrong lattice for this operation")]
    LatticeMismatch,
    #[error("edge {0} lies outside the configuration box")]
    OutsideBox(Edge),
    #[error("region or annulus is not contained in the configuration box")]
    RegionOutsideBox,
    #[error("empty edge set")]
    EmptyEdgeSet,
    #[error("empty color sequence")]
    EmptySequence,
    #[error("malformed color sequence {0:?}")]
    BadColorToken(String),
    #[error("color sequence must be polychromatic")]
    Monochromatic,
    #[error("color sequences have different lengths")]
    LengthMismatch,
    #[error("separation constant must be at least 5, got {0}")]
    SeparationTooSmall(u32),
    #[error("radii violate the separation regime 8*l*n0(k) <= 8n <= N")]
    RegimeViolation,
    #[error("instance too large for exhaustive search (outer radius {0})")]
    InstanceTooLarge(u32),
    #[error("disjoint-path search exceeded its budget")]
    SearchBudget,
    #[error("landing intervals overlap or do not match the sequence length")]
    BadLanding,
    #[error("arms intersect")]
    ArmsIntersect,
    #[error("arm uses an edge of the wrong color")]
    WrongColor,
    #[error("arms are not in the prescribed counterclockwise order")]
    WrongOrder,
    #[error("arm does not connect the two boundaries")]
    ArmNotConnecting,
    #[error("degenerate curve or rectangle")]
    Degenerate,
    #[error("zero trials requested")]
    ZeroTrials,
    #[error("estimate is zero at outer radius {0}; more trials needed")]
    ZeroEstimate(u32),
    #[error("not enough points for a fit")]
    TooFewPoints,
}
