//! Matrix models: GL2(E), the Hermitian space S, the quaternion groups
//! G_eps, the half-plane metric, and the Cartan decomposition of GL2(F).

pub mod halfplane;
pub mod herm;
pub mod mat;
pub mod quat;
pub mod snf;

pub use halfplane::{hyperbolic_distance, imag_exp2, minf_sides, mobius, torus_fixed_point};
pub use herm::HermMat;
pub use mat::{BaseRing, Mat2, Ring};
pub use quat::QuatElem;
pub use snf::{cartan_c, smith_normal_form, Snf};

/// Regularity classification.
///
/// For S in the split model [[a, b1], [b2, d]] the singular sets are C
/// (b2 = 0), Cw (d = 0), wC (a = 0) and wCw (b1 = 0). Torus elements
/// (b = 0) are wCw-type; `Degenerate` means invariant 1 (det = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SingularClass {
    Regular,
    C,
    Cw,
    WC,
    WCw,
    Degenerate,
}

#[cfg(test)]
mod tests;
