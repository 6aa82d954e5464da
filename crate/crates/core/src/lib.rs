//! Generalized hyperbolic triangles and the variational machinery built on them.
//!
//! - [`trig`]: uniform cosine/sine laws for all ten triangle types, Gram
//!   matrices and the derivative cosine law.
//! - [`appendix`]: the per-type law tables, kept as an independent evaluation path.
//! - [`coords`]: realizability domains and the u / w / a coordinate changes.
//! - [`complex`]: triangulated and cellular surfaces, edge cycles, quadrilaterals.
//! - [`penner`]: decorated ideal triangulations and the edge-invariant map.
//! - [`packing`]: generalized circle packings, curvature, solver and flow.
//! - [`pattern`]: generalized circle patterns with the K_h curvature family.

pub mod appendix;
pub mod complex;
pub mod coords;
pub mod error;
pub mod flow;
pub mod newton;
pub mod packing;
pub mod pattern;
pub mod penner;
pub mod quad;
pub mod rng;
pub mod trig;
pub mod verify;

pub use error::{Error, Result};
pub use trig::{GeneralizedTriangle, TriangleType, VertexType};
