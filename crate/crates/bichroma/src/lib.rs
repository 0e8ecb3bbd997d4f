//! Minimum properly colored spanning trees and plane approximations.
//!
//! Given points in the plane, each carrying a color, this crate computes
//! spanning trees whose edges all join differently colored points:
//!
//! * [`minbst`] finds the exact minimum-length such tree. It is generally
//!   *not* crossing-free, but its self-intersections are heavily
//!   constrained; [`crossing`] measures and checks that structure.
//! * [`plane`] and [`quadtree`] construct crossing-free properly colored
//!   spanning trees whose length is within an `O(log n)` factor of the
//!   minimum, via merge rules on a randomly shifted quadtree, along with the
//!   grid-crossing profiles that certify the approximation bound shift by
//!   shift and a derandomized variant that tries every distinct shift.
//!
//! All combinatorial decisions (orientation, crossing, hull membership) use
//! exact adaptive-precision predicates, so results are reproducible and
//! independent of input order.

mod error;

pub mod crossing;
pub mod geom;
pub mod minbst;
pub mod plane;
pub mod quadtree;

pub use error::{Error, Result};
