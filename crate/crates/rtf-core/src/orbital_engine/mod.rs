//! Orbital integrals on S, on G_eps and in the split case, evaluated
//! exactly by shell-and-unit enumeration or by valuation patterns.

pub mod g_side;
pub mod profile;
pub mod s_side;
pub mod split;
pub mod testfn;
pub mod value;

pub use g_side::{eval_orbital_g, eval_orbital_g_at_x};
pub use profile::{orbital_profile, Profile};
pub use s_side::{eval_orbital_s, eval_orbital_s_at};
pub use split::{eval_orbital_split, SplitPhi, SplitSide};
pub use testfn::{AnyTestFn, TestFnG, TestFnS};
pub use value::{derivative_at_zero, OrbitalValue};

use crate::base_arith::scalar::XiPoly;

/// How an orbital integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Strategy {
    /// Closed valuation patterns (falls back to brute force where none applies).
    Fast,
    /// Element-wise enumeration of unit classes in every shell.
    Brute,
}

/// Value of omega^{-1} = Omega^{-1}|_F on t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OmegaConvention {
    /// omega^{-1}(t) = xi^e (omega is the restriction of Omega).
    Restriction,
    /// omega trivial.
    Trivial,
}

#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    pub strategy: Strategy,
    pub omega: OmegaConvention,
    /// Extra shells scanned on each side of the support window.
    pub guard: i64,
    /// Added to the unit-class depth of the test function.
    pub depth_margin: i64,
    /// Maximal number of enumerated cells per evaluation.
    pub budget: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            strategy: Strategy::Fast,
            omega: OmegaConvention::Restriction,
            guard: 2,
            depth_margin: 0,
            budget: 20_000_000,
        }
    }
}

impl EngineConfig {
    pub fn brute() -> Self {
        EngineConfig {
            strategy: Strategy::Brute,
            ..Self::default()
        }
    }

    /// Exponent of xi in omega^{-1}(z) for v(z) = beta.
    pub(crate) fn omega_exp(&self, e: i64, beta: i64) -> i64 {
        match self.omega {
            OmegaConvention::Restriction => e * beta,
            OmegaConvention::Trivial => 0,
        }
    }
}

pub(crate) fn xi_weight(q: u32, k: i64) -> XiPoly {
    XiPoly::xi_pow(q, k)
}
