//! Rotational constant-mean-curvature spheres of `H^n × R` and `S^n × R`.
//!
//! The spheres are built from the explicit radial function `φ_ε` of
//! [`basis`]; [`profile`] turns it into the meridian, area and volume, and
//! the remaining modules check nesting, stability and the isoperimetric
//! comparison along the family.

// Negated comparisons are how parameter checks reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod error;
pub mod isoperimetric;
pub mod nesting;
pub mod numerics;
pub mod profile;
pub mod spaceform;
pub mod stability;

pub use error::{CmcError, Result};
pub use numerics::{Bracket, Tolerance};
pub use profile::{CmcSphere, SphereParams};
pub use spaceform::{Curvature, SpaceForm};
