//! The non-archimedean upper half plane E - F with its hyperbolic distance
//! d(z1, z2) = |z1 - z2|^2 / (|z1|_i |z2|_i), |z|_i = inf_{a in F} |z - a|.
//!
//! Absolute values on E extend those of F: |y| = q^{-v_F(Nm y)/2}. All
//! quantities are carried as exponents, so d = q^{-n} is reported as n.

use std::sync::Arc;

use super::mat::Mat2;
use super::quat::{regular_rep, QuatElem};
use crate::base_arith::fq::FqField;
use crate::base_arith::laurent::LocalElem;
use crate::error::{Result, RtfError};
use crate::quad_ext::{ExtElem, Flavor, QuadExt};

/// Exponent h with |z|_i = q^{-h/2}.
///
/// With z = c0 + c1 theta the infimum is attained at a = c0: in the
/// unramified flavor 1, theta is an O_F-basis of O_E with independent
/// residues, and in the ramified flavor the two parts have valuations of
/// different parity.
pub fn imag_exp2(e: &QuadExt, z: &ExtElem) -> Result<i64> {
    check_nonsplit(e)?;
    let (_, c1) = e.coords(z);
    if c1.is_zero() {
        return Err(RtfError::PointOnBoundary);
    }
    e.v_norm(&e.mul(&e.embed(&c1), &e.theta()))
}

/// Brute-force |z|_i: maximize v_F(Nm(z - a)) over a in t^{-m} O / t^m.
///
/// Elements a with |a| > |z| give |z - a| = |a| and never realize the
/// infimum, so the grid is exhaustive once it covers c0 and |z|.
pub fn imag_exp2_grid(e: &QuadExt, z: &ExtElem, m: i64) -> Result<i64> {
    check_nonsplit(e)?;
    let f = e.base();
    let width = (2 * m) as u32;
    let total = (f.q() as u64)
        .checked_pow(width)
        .filter(|&n| n <= 2_000_000);
    let total = total.ok_or_else(|| RtfError::BudgetExceeded("half-plane grid".into()))?;
    let mut best: Option<i64> = None;
    for idx in 0..total {
        let a = grid_elem(f, idx, m, width);
        let diff = e.sub(z, &e.embed(&a));
        let v = e.v_norm(&diff)?;
        best = Some(best.map_or(v, |b| b.max(v)));
    }
    best.ok_or(RtfError::GridEmpty)
}

fn grid_elem(f: &Arc<FqField>, mut idx: u64, m: i64, width: u32) -> LocalElem {
    let q = f.q() as u64;
    let mut coeffs = Vec::with_capacity(width as usize);
    for _ in 0..width {
        coeffs.push((idx % q) as u32);
        idx /= q;
    }
    LocalElem::from_parts(f.clone(), -m, coeffs, None)
}

/// n with d(z1, z2) = q^{-n}; None when z1 = z2 (distance 0).
pub fn hyperbolic_distance(e: &QuadExt, z1: &ExtElem, z2: &ExtElem) -> Result<Option<i64>> {
    let h1 = imag_exp2(e, z1)?;
    let h2 = imag_exp2(e, z2)?;
    let diff = e.sub(z1, z2);
    let (d0, d1) = e.coords(&diff);
    if d0.is_zero() && d1.is_zero() {
        return Ok(None);
    }
    let s = h1 + h2;
    debug_assert_eq!(s % 2, 0);
    Ok(Some(e.v_norm(&diff)? - s / 2))
}

/// g z = (a z + b) / (c z + d) for g in GL2(F).
pub fn mobius(e: &QuadExt, g: &Mat2<LocalElem>, z: &ExtElem) -> Result<ExtElem> {
    let num = e.add(&e.mul(&e.embed(&g.a), z), &e.embed(&g.b));
    let den = e.add(&e.mul(&e.embed(&g.c), z), &e.embed(&g.d));
    e.div(&num, &den)
}

/// The fixed point 1/theta of the torus M(E^x) in GL2(F).
pub fn torus_fixed_point(e: &QuadExt) -> Result<ExtElem> {
    check_nonsplit(e)?;
    e.inv(&e.theta())
}

/// Both sides of d(z0, delta z0) = |inv'(delta)| as exponents
/// (n with d = q^{-n}, and v(inv')).
pub fn minf_sides(e: &QuadExt, delta: &Mat2<LocalElem>) -> Result<(Option<i64>, i64)> {
    let z0 = torus_fixed_point(e)?;
    let gz = mobius(e, delta, &z0)?;
    let lhs = hyperbolic_distance(e, &z0, &gz)?;
    let rhs = QuatElem::from_gl2f(e, delta)?.inv_prime(e)?.v()?;
    Ok((lhs, rhs))
}

/// Checks that the torus really fixes z0 (M(y) z0 = z0).
pub fn fixes_z0(e: &QuadExt, y: &ExtElem, prec: i64) -> Result<bool> {
    let z0 = torus_fixed_point(e)?;
    let w = mobius(e, &regular_rep(e, y)?, &z0)?;
    let (d0, d1) = e.coords(&e.sub(&w, &z0));
    let zero = LocalElem::zero(e.base());
    Ok(d0.eq_mod(&zero, prec) && d1.eq_mod(&zero, prec))
}

fn check_nonsplit(e: &QuadExt) -> Result<()> {
    if e.flavor() == Flavor::Split {
        return Err(RtfError::Config("the half plane needs a field E".into()));
    }
    Ok(())
}
