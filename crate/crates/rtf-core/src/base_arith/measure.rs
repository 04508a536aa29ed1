//! Haar-measure bookkeeping as exact half-integer powers of q.
//!
//! With psi of conductor c, the self-dual measure gives
//! Vol(O_F) = Vol(O_F^x) = q^{c/2}. For E the character psi o tr is used.

use num_traits::One;

use super::scalar::{XiPoly, Q};

/// Shape of E/F relevant to volumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ExtShape {
    Split,
    Unramified,
    Ramified,
}

impl ExtShape {
    /// Ramification index e.
    pub fn e(self) -> i64 {
        match self {
            ExtShape::Ramified => 2,
            _ => 1,
        }
    }
    /// Residue degree f (log q_E = f log q).
    pub fn f(self) -> u32 {
        match self {
            ExtShape::Unramified => 2,
            _ => 1,
        }
    }
}

/// Volumes for fixed (q, c(psi), E/F).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureContext {
    pub q: u32,
    pub c_psi: i64,
    pub shape: ExtShape,
}

impl MeasureContext {
    pub fn new(q: u32, c_psi: i64, shape: ExtShape) -> Self {
        MeasureContext { q, c_psi, shape }
    }

    /// Conductor of psi o tr on E, in the valuation of E.
    pub fn c_psi_e(&self) -> i64 {
        match self.shape {
            ExtShape::Ramified => 2 * self.c_psi - 1,
            _ => self.c_psi,
        }
    }

    /// Exponent a with Vol(O_F^x) = q^{a/2}.
    pub fn half_exp_units_f(&self) -> i64 {
        self.c_psi
    }

    /// Exponent a with Vol(O_E^x) = q^{a/2}.
    pub fn half_exp_units_e(&self) -> i64 {
        match self.shape {
            // O_E^x = O_F^x x O_F^x
            ExtShape::Split => 2 * self.c_psi,
            s => s.f() as i64 * self.c_psi_e(),
        }
    }

    pub fn vol_units_f(&self) -> XiPoly {
        XiPoly::q_half_pow(self.q, self.half_exp_units_f())
    }

    pub fn vol_units_e(&self) -> XiPoly {
        XiPoly::q_half_pow(self.q, self.half_exp_units_e())
    }

    /// Residue field size of E.
    pub fn q_e(&self) -> u32 {
        self.q.pow(self.shape.f())
    }

    /// Vol^x(1 + p_F^n) for n >= 1, Vol(O_F^x) for n = 0.
    pub fn vol_one_units_f(&self, n: i64) -> XiPoly {
        self.vol_units_f().scale(index_inv(self.q, n))
    }

    /// Vol^x(1 + p_E^n) for nonsplit E.
    pub fn vol_one_units_e(&self, n: i64) -> XiPoly {
        self.vol_units_e().scale(index_inv(self.q_e(), n))
    }

    /// Vol(E^x / F^x) with the quotient measure.
    pub fn vol_e_mod_f(&self) -> XiPoly {
        let ratio = XiPoly::q_half_pow(self.q, self.half_exp_units_e() - self.half_exp_units_f());
        match self.shape {
            ExtShape::Ramified => ratio.scale(Q::from_integer(2)),
            _ => ratio,
        }
    }
}

/// 1 / [O^x : 1 + p^n] for a residue field of size q.
pub fn index_inv(q: u32, n: i64) -> Q {
    if n <= 0 {
        return Q::one();
    }
    let idx = (q as i128 - 1) * (q as i128).pow(n as u32 - 1);
    Q::new(1, idx)
}
