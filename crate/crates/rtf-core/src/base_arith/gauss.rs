//! Gauss sums tau_n(chi, psi) = int_{O^x} chi(t^n x) psi(t^n x) d^x x.

use std::sync::Arc;

use super::characters::{AdditiveCharacter, AtUniformizer, MultiplicativeCharacter};
use super::cyclo::{CycloValue, Q};
use super::fq::FqField;
use super::laurent::{shell_count, shell_representatives};
use super::scalar::XiPoly;
use crate::error::{Result, RtfError};

/// value * sqrt(q)^{sqrt_q} * xi^{xi_power}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussSum {
    pub value: CycloValue,
    pub sqrt_q: bool,
    pub xi_power: i64,
}

impl GaussSum {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// |tau|^2 as a rational (the xi factor is unitary and dropped).
    pub fn abs2(&self, q: u32) -> CycloValue {
        let a = self.value.abs2();
        if self.sqrt_q {
            a.scale(Q::from_integer(q as i128))
        } else {
            a
        }
    }

    /// The value when it is rational (times the formal factors).
    pub fn as_scalar(&self, q: u32) -> Option<XiPoly> {
        let r = self.value.as_rational()?;
        let half = if self.sqrt_q { 1 } else { 0 };
        Some(
            XiPoly::q_half_pow(q, half)
                .scale(r)
                .shift_xi(self.xi_power, 0),
        )
    }
}

impl std::fmt::Display for GaussSum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.value)?;
        if self.sqrt_q {
            write!(f, "*sqrt(q)")?;
        }
        if self.xi_power != 0 {
            write!(f, "*xi^{}", self.xi_power)?;
        }
        Ok(())
    }
}

fn check_fields(chi: &MultiplicativeCharacter, psi: &AdditiveCharacter) -> Result<Arc<FqField>> {
    if !Arc::ptr_eq(chi.field(), psi.field()) && chi.field() != psi.field() {
        return Err(RtfError::FieldMismatch);
    }
    Ok(chi.field().clone())
}

/// Enumeration depth making chi(t^n x) psi(t^n x) invariant under 1 + p^N.
pub fn gauss_depth(chi: &MultiplicativeCharacter, psi: &AdditiveCharacter, n: i64) -> i64 {
    chi.conductor().max(psi.conductor() - n).max(1)
}

/// Vol(O^x) = q^{c/2} split into a rational part and a surd flag.
fn unit_volume(q: u32, c_psi: i64) -> (Q, bool) {
    let whole = c_psi.div_euclid(2);
    let base = Q::from_integer(q as i128);
    let r = if whole >= 0 {
        base.pow(whole as i32)
    } else {
        base.recip().pow((-whole) as i32)
    };
    (r, c_psi.rem_euclid(2) == 1)
}

/// Sum of chi psi over representatives of O^x/(1+p^depth), then scaled.
fn sum_at_depth(
    chi: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
    n: i64,
    depth: i64,
) -> Result<GaussSum> {
    let f = check_fields(chi, psi)?;
    let m = f.p() * (f.q() - 1);
    let mut counts = vec![0i128; m as usize];
    for x in shell_representatives(&f, 0, depth)? {
        let r = chi.eval_unit_root(&x)? + psi.eval_root(&x.shift(n))?;
        counts[r.rem_euclid(m as i64) as usize] += 1;
    }
    let mut v = CycloValue::zero(m);
    for (e, &c) in counts.iter().enumerate() {
        if c != 0 {
            v = v.add(&CycloValue::root(m, e as i64).scale(Q::from_integer(c)));
        }
    }
    let (vol, sqrt_q) = unit_volume(f.q(), psi.conductor());
    let cells = Q::from_integer(shell_count(f.q(), depth) as i128);
    let mut value = v.scale(vol / cells);
    let mut xi_power = 0;
    match chi.at_uniformizer() {
        AtUniformizer::Root(a) => value = value.mul(&CycloValue::root(m, a * n)),
        AtUniformizer::Formal => xi_power = n,
    }
    if value.is_zero() {
        xi_power = 0;
    }
    Ok(GaussSum {
        value,
        sqrt_q,
        xi_power,
    })
}

/// Exact tau_n(chi, psi).
///
/// Writes x = head + tail with head mod p^H, H = max(c(chi), 1). The tail
/// sum factors coordinatewise: each coordinate contributes q, except the one
/// hitting the t^{c(psi)-1} coefficient, which contributes 0.
pub fn gauss_sum(
    chi: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
    n: i64,
) -> Result<GaussSum> {
    let f = check_fields(chi, psi)?;
    let h = chi.conductor().max(1);
    let m = f.p() * (f.q() - 1);
    let (_, sqrt_q) = unit_volume(f.q(), psi.conductor());
    if psi.conductor() - 1 - n >= h {
        return Ok(GaussSum {
            value: CycloValue::zero(m),
            sqrt_q,
            xi_power: 0,
        });
    }
    // beyond depth h the tail adds q^{N-h} terms per head and as many cells
    sum_at_depth(chi, psi, n, h)
}

/// Direct enumeration at an explicit depth (oracle for tests).
pub fn gauss_sum_bruteforce(
    chi: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
    n: i64,
    depth: i64,
) -> Result<GaussSum> {
    if depth < gauss_depth(chi, psi, n) {
        return Err(RtfError::Config("depth below the invariance depth".into()));
    }
    sum_at_depth(chi, psi, n, depth)
}
