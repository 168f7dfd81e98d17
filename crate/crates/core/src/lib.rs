//! Self-perimeters and self-volumes of convex bodies.
//!
//! A convex body `B` with the origin in its interior is the unit ball of a
//! (possibly asymmetric) norm. Measuring the boundary of `B` in that norm gives
//! its self-perimeter; the recursive slicing construction extends this to a
//! self-volume in any dimension. This crate computes both for polygons, smooth
//! planar profiles and polytopes, minimizes them over the reference point, and
//! solves the planar inverse problem for the self-surface measure perturbatively.

pub mod alexandrov;
pub mod barycentric;
pub mod body;
pub mod center;
pub mod conjecture;
pub mod error;
pub mod fourier;
pub mod hull;
pub mod io;
pub mod linalg;
pub mod nelder_mead;
pub mod perimeter;
pub mod polygon;
pub mod polytope;
pub mod profile;
pub mod selfvolume;
pub mod shapes;

pub use barycentric::BarycentricPoint;
pub use body::ConvexBody;
pub use error::{GeometryError, Result};
pub use fourier::FourierSeries;
pub use perimeter::{Method, Perimeter2Result, Variant};
pub use polygon::{Orientation, Point2, Polygon2};
pub use polytope::PolytopeN;
pub use profile::RadiusProfile;
pub use selfvolume::SelfVolumeResult;
