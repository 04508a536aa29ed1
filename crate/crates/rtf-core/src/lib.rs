//! Exact local orbital integrals for GL2 over function fields F_q((t)).
//!
//! The crate evaluates orbital integrals on the Hermitian space and on
//! quaternion unit groups with exact arithmetic, and checks matching
//! identities between them.

pub mod base_arith;
pub mod error;
pub mod fl_suite;
pub mod orbit_geometry;
pub mod orbital_engine;
pub mod quad_ext;

pub use error::{Result, RtfError};
