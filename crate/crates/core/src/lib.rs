//! Surfaces and curves with stationary points exactly where you ask for
//! them.
//!
//! Given a finite point set, the constructions here build closed-form C⁰ to
//! C² fields whose gradient vanishes at every prescribed point, optionally
//! hitting prescribed values there too, and in the strictest variants
//! vanishing nowhere else. Several families are provided because the three
//! goals trade off against each other:
//!
//! * [`bump`]: sums of compactly supported radial terms; any scattered
//!   point set, exact values, and a provable no-extra-flats guarantee in 1D
//!   under a spacing condition.
//! * [`quartic1d`]: degree-4 knot splines, including a one-parameter C²
//!   family with selectable global shape.
//! * [`quartic2d`]: tensor-product degree-4 patches on grids (C⁰), plus a
//!   rank certificate showing the family admits no C¹ member.
//! * [`trig1d`] / [`trig2d`]: cosine-blend splines and their
//!   product-of-cosines tensor extension (C¹, with C² value generators);
//!   cells can carry interior saddles, which [`trig2d`] predicts exactly.
//! * [`superpose`]: scattered 2D point sets via grid completion repeated in
//!   rotated coordinate frames; summing the frames cancels the vertex
//!   stationary points any single grid forces.
//! * [`verify`]: the independent side: finite differences, a
//!   stationary-point scanner with classification, continuity jump reports,
//!   and per-problem verdicts.
//! * [`io`]: JSON spec/config documents and CSV export shared with the
//!   command-line front end.

pub mod bump;
pub mod error;
pub mod geometry;
pub mod io;
pub mod quartic1d;
pub mod quartic2d;
pub mod superpose;
pub mod trig1d;
pub mod trig2d;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{
    Diagnostic, GridKnots2D, Heightfield, Knots1D, Metadata, Mode, PointSet, Region,
    StationarySpec, SurfaceModel,
};
pub use io::{build_model, parse_model_config, parse_spec_json, ModelConfig};
pub use verify::{scan_stationary, verify_problem, ScanConfig, ScanReport};
