//! Cones, dual cones, fans and their subdivisions.

mod cone;
mod fan;
mod polyhedral;

pub use cone::Cone;
pub use fan::{fans_equal, Fan, RefinementFailure, Resolution, Subdivision};

use thiserror::Error;

use crate::lattice::LatticeVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone {0} is not strictly convex")]
    NotStrictlyConvex(Cone),
    #[error("cones {0} and {1} do not meet in a common face")]
    Incompatible(Cone, Cone),
    #[error("cone {0} is not simplicial")]
    NotSimplicial(Cone),
    #[error("ray {0} lies outside the support of the fan")]
    OutsideSupport(LatticeVector),
    #[error("the zero vector does not span a ray")]
    ZeroRay,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
