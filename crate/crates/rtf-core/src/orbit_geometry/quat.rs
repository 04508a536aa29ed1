//! The quaternion algebra (E, eps / F) = E + E j with j y = conj(y) j and
//! j^2 = eps, and its identification with M2(F) when eps is a norm.

use std::fmt;

use super::mat::{BaseRing, Mat2};
use super::SingularClass;
use crate::base_arith::laurent::LocalElem;
use crate::error::{Result, RtfError};
use crate::quad_ext::{ExtElem, Flavor, QuadExt};

/// a + b j.
#[derive(Clone, PartialEq, Eq)]
pub struct QuatElem {
    pub a: ExtElem,
    pub b: ExtElem,
    pub eps: LocalElem,
}

impl QuatElem {
    pub fn new(a: ExtElem, b: ExtElem, eps: LocalElem) -> Self {
        QuatElem { a, b, eps }
    }

    pub fn one(e: &QuadExt, eps: &LocalElem) -> Self {
        QuatElem::new(e.one(), e.zero(), eps.clone())
    }

    /// The torus element t (b = 0).
    pub fn torus(e: &QuadExt, t: &ExtElem, eps: &LocalElem) -> Self {
        QuatElem::new(t.clone(), e.zero(), eps.clone())
    }

    /// delta(x) = 1 + b j with eps Nm(b) = x, b from the norm-preimage
    /// certificate at the given depth. None when x / eps is not a norm.
    pub fn delta(e: &QuadExt, eps: &LocalElem, x: &LocalElem, depth: i64) -> Result<Option<Self>> {
        let y = x.div(eps)?;
        Ok(e.norm_preimage(&y, depth)?
            .map(|b| QuatElem::new(e.one(), b, eps.clone())))
    }

    /// 1 + b j for a given b.
    pub fn delta_from_b(e: &QuadExt, eps: &LocalElem, b: &ExtElem) -> Self {
        QuatElem::new(e.one(), b.clone(), eps.clone())
    }

    /// Nm(a) - eps Nm(b).
    pub fn det(&self, e: &QuadExt) -> LocalElem {
        e.norm(&self.a).sub(&self.eps.mul(&e.norm(&self.b)))
    }

    /// inv_T = eps Nm(b) / Nm(a).
    pub fn inv(&self, e: &QuadExt) -> Result<LocalElem> {
        self.check_regular(e)?;
        self.eps.mul(&e.norm(&self.b)).div(&e.norm(&self.a))
    }

    /// inv'_T = inv / (1 - inv) = eps Nm(b) / det.
    pub fn inv_prime(&self, e: &QuadExt) -> Result<LocalElem> {
        self.check_regular(e)?;
        self.eps.mul(&e.norm(&self.b)).div(&self.det(e))
    }

    fn check_regular(&self, e: &QuadExt) -> Result<()> {
        match self.singular_class(e) {
            SingularClass::Regular => Ok(()),
            c => Err(RtfError::SingularElement(format!("{c:?}"))),
        }
    }

    /// Regular iff a b != 0 (and the element is invertible).
    pub fn singular_class(&self, e: &QuadExt) -> SingularClass {
        let zero = |y: &ExtElem| match y {
            ExtElem::Field(x) => x.is_zero(),
            ExtElem::Pair(x, z) => x.is_zero() || z.is_zero(),
        };
        if zero(&self.b) {
            SingularClass::WCw
        } else if zero(&self.a) {
            SingularClass::WC
        } else if self.det(e).is_zero() {
            SingularClass::Degenerate
        } else {
            SingularClass::Regular
        }
    }

    /// (a1 + b1 j)(a2 + b2 j) = (a1 a2 + eps b1 conj(b2)) + (a1 b2 + b1 conj(a2)) j.
    pub fn mul(&self, e: &QuadExt, o: &Self) -> Self {
        let eps = e.embed(&self.eps);
        let a = e.add(
            &e.mul(&self.a, &o.a),
            &e.mul(&eps, &e.mul(&self.b, &e.conj(&o.b))),
        );
        let b = e.add(&e.mul(&self.a, &o.b), &e.mul(&self.b, &e.conj(&o.a)));
        QuatElem::new(a, b, self.eps.clone())
    }

    /// (conj(a) - b j) / det.
    pub fn inverse(&self, e: &QuadExt) -> Result<Self> {
        let di = e.embed(&self.det(e).inv()?);
        Ok(QuatElem::new(
            e.mul(&di, &e.conj(&self.a)),
            e.neg(&e.mul(&di, &self.b)),
            self.eps.clone(),
        ))
    }

    /// h1^{-1} (a + b j) h2 = a h2 / h1 + (b conj(h2) / h1) j.
    pub fn torus_action(&self, e: &QuadExt, h1: &ExtElem, h2: &ExtElem) -> Result<Self> {
        let h1i = e.inv(h1)?;
        let a = e.mul(&e.mul(&self.a, h2), &h1i);
        let b = e.mul(&e.mul(&self.b, &e.conj(h2)), &h1i);
        Ok(QuatElem::new(a, b, self.eps.clone()))
    }

    /// The image [[a, b eps], [conj(b), conj(a)]] in M2(E).
    pub fn to_mat_e(&self, e: &QuadExt) -> Mat2<ExtElem> {
        Mat2::new(
            self.a.clone(),
            e.mul(&self.b, &e.embed(&self.eps)),
            e.conj(&self.b),
            e.conj(&self.a),
        )
    }

    /// Entries a, b integral (membership in the maximal order).
    pub fn is_integral(&self, e: &QuadExt) -> Result<bool> {
        Ok(v_min(e, &self.a)? >= 0 && v_min(e, &self.b)? >= 0)
    }

    /// The identification E + E j = M2(F) for eps = 1 (unramified or ramified):
    /// a + b j -> M(a) + M(b) J with M(c0 + c1 theta) = [[c0, c1], [c1 A, c0 + c1 B]]
    /// (theta^2 = A + B theta) and J = [[1, 0], [B, -1]].
    /// For p odd this is a + b sqrt(u) -> [[a, b], [b u, a]], j -> diag(1, -1);
    /// for p = 2 it is a + b theta -> [[a, b], [b tau, a + b]].
    pub fn to_gl2f(&self, e: &QuadExt) -> Result<Mat2<LocalElem>> {
        if !self.eps.eq_known(&LocalElem::one(e.base())) {
            return Err(RtfError::Config("the matrix model needs eps = 1".into()));
        }
        let r = BaseRing(e.base().clone());
        let ma = regular_rep(e, &self.a)?;
        let mb = regular_rep(e, &self.b)?;
        Ok(ma.add(&r, &mb.mul(&r, &j_matrix(e)?)))
    }

    /// Inverse of `to_gl2f`.
    pub fn from_gl2f(e: &QuadExt, x: &Mat2<LocalElem>) -> Result<Self> {
        let r = BaseRing(e.base().clone());
        let th = regular_rep(e, &e.theta())?;
        let j = j_matrix(e)?;
        // M(theta) X - X M(theta) = M(b (theta - conj theta)) J
        let comm = th.mul(&r, x).add(&r, &x.mul(&r, &th).map(|y| y.neg()));
        let dth = regular_rep(e, &e.sub(&e.theta(), &e.conj(&e.theta())))?;
        let mb = comm.mul(&r, &j.inverse(&r)?).mul(&r, &dth.inverse(&r)?);
        let b = e.from_coords(&mb.a, &mb.b);
        let ma = x.add(&r, &mb.mul(&r, &j).map(|y| y.neg()));
        let a = e.from_coords(&ma.a, &ma.b);
        Ok(QuatElem::new(a, b, LocalElem::one(e.base())))
    }
}

fn v_min(e: &QuadExt, y: &ExtElem) -> Result<i64> {
    match y {
        ExtElem::Field(x) => Ok(if x.is_zero() { i64::MAX } else { x.v()? }),
        ExtElem::Pair(x, z) => {
            let vx = if x.is_zero() { i64::MAX } else { x.v()? };
            let vz = if z.is_zero() { i64::MAX } else { z.v()? };
            let _ = e;
            Ok(vx.min(vz))
        }
    }
}

/// M(y) for y = c0 + c1 theta.
pub fn regular_rep(e: &QuadExt, y: &ExtElem) -> Result<Mat2<LocalElem>> {
    if e.flavor() == Flavor::Split {
        return Err(RtfError::Config(
            "split flavor has no theta basis model".into(),
        ));
    }
    let (a, b) = theta_sq(e);
    let (c0, c1) = e.coords(y);
    Ok(Mat2::new(
        c0.clone(),
        c1.clone(),
        c1.mul(&a),
        c0.add(&c1.mul(&b)),
    ))
}

/// J = [[1, 0], [B, -1]].
pub fn j_matrix(e: &QuadExt) -> Result<Mat2<LocalElem>> {
    if e.flavor() == Flavor::Split {
        return Err(RtfError::Config(
            "split flavor has no theta basis model".into(),
        ));
    }
    let f = e.base();
    let (_, b) = theta_sq(e);
    Ok(Mat2::new(
        LocalElem::one(f),
        LocalElem::zero(f),
        b,
        LocalElem::from_int(f, -1),
    ))
}

/// (A, B) with theta^2 = A + B theta, as elements of F.
fn theta_sq(e: &QuadExt) -> (LocalElem, LocalElem) {
    let f = e.base();
    match e.flavor() {
        Flavor::Ramified { u } => (LocalElem::monomial(f, u, 1), LocalElem::zero(f)),
        _ => {
            let (a, b) = e.theta_square();
            (LocalElem::monomial(f, a, 0), LocalElem::monomial(f, b, 0))
        }
    }
}

impl fmt::Display for QuatElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({}) j", self.a, self.b)
    }
}

impl fmt::Debug for QuatElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuatElem({self}; eps={})", self.eps)
    }
}
