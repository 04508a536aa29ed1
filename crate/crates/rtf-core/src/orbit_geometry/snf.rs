//! Smith normal form over O_F: g = k1 diag(t^e1, t^e2) k2 with k1, k2 in
//! GL2(O_F) and e1 <= e2.

use super::mat::{BaseRing, Mat2};
use crate::base_arith::laurent::LocalElem;
use crate::error::{Result, RtfError};

/// Elementary-divisor decomposition of an invertible matrix.
#[derive(Debug, Clone)]
pub struct Snf {
    pub k1: Mat2<LocalElem>,
    pub e1: i64,
    pub e2: i64,
    pub k2: Mat2<LocalElem>,
}

impl Snf {
    /// Cartan coordinate c = e2 - e1 (g lies in K t^{e1} diag(t^c, 1) K).
    pub fn c(&self) -> i64 {
        self.e2 - self.e1
    }

    pub fn diag(&self, r: &BaseRing) -> Mat2<LocalElem> {
        Mat2::diag(
            r,
            LocalElem::monomial(&r.0, 1, self.e1),
            LocalElem::monomial(&r.0, 1, self.e2),
        )
    }
}

/// Row/column reduction with unit pivoting.
pub fn smith_normal_form(r: &BaseRing, g: &Mat2<LocalElem>) -> Result<Snf> {
    if g.det(r).is_zero() {
        return Err(RtfError::SingularElement("matrix is not invertible".into()));
    }
    let f = &r.0;
    let one = LocalElem::one(f);
    let zero = LocalElem::zero(f);
    let swap = Mat2::new(zero.clone(), one.clone(), one.clone(), zero.clone());
    let id = Mat2::identity(r);
    let vals: Vec<i64> = g
        .entries()
        .iter()
        .map(|x| {
            if x.is_zero() {
                i64::MAX
            } else {
                x.v().unwrap_or(i64::MAX)
            }
        })
        .collect();
    let best = (0..4).min_by_key(|&i| vals[i]).unwrap();
    // move the pivot to (0, 0)
    let left = if best >= 2 { swap.clone() } else { id.clone() };
    let right = if best % 2 == 1 { swap } else { id };
    let h = left.mul(r, g).mul(r, &right);
    let p = h.a.clone();
    let pinv = p.inv()?;
    let lrow = Mat2::new(one.clone(), zero.clone(), h.c.mul(&pinv).neg(), one.clone());
    let rcol = Mat2::new(one.clone(), h.b.mul(&pinv).neg(), zero.clone(), one.clone());
    let dg = lrow.mul(r, &h).mul(r, &rcol);
    let e1 = p.v()?;
    let e2 = dg.d.v()?;
    let units = Mat2::diag(r, p.unit_part()?, dg.d.unit_part()?);
    // g = left^{-1} lrow^{-1} units diag rcol^{-1} right^{-1}
    let k1 = left.mul(r, &lrow.inverse(r)?).mul(r, &units);
    let k2 = rcol.inverse(r)?.mul(r, &right);
    Ok(Snf { k1, e1, e2, k2 })
}

/// c directly from valuations: v(det) - 2 min v(g_ij).
pub fn cartan_c(r: &BaseRing, g: &Mat2<LocalElem>) -> Result<i64> {
    let m = g
        .min_val(r)?
        .ok_or_else(|| RtfError::SingularElement("zero matrix".into()))?;
    Ok(g.det(r).v()? - 2 * m)
}
