//! The Hermitian space S = {s in GL2(E) : conj(s)^T = s}.

use std::fmt;

use super::mat::Mat2;
use super::SingularClass;
use crate::base_arith::laurent::LocalElem;
use crate::error::{Result, RtfError};
use crate::quad_ext::{ExtElem, QuadExt};

/// [[a, b], [conj(b), d]] with a, d in F.
#[derive(Clone, PartialEq, Eq)]
pub struct HermMat {
    pub a: LocalElem,
    pub b: ExtElem,
    pub d: LocalElem,
}

impl HermMat {
    pub fn new(a: LocalElem, b: ExtElem, d: LocalElem) -> Self {
        HermMat { a, b, d }
    }

    /// gamma(x) = [[x, 1], [1, 1]].
    pub fn gamma(e: &QuadExt, x: &LocalElem) -> Self {
        let one = LocalElem::one(e.base());
        HermMat::new(x.clone(), e.one(), one)
    }

    /// w = [[0, 1], [1, 0]].
    pub fn w(e: &QuadExt) -> Self {
        let zero = LocalElem::zero(e.base());
        HermMat::new(zero.clone(), e.one(), zero)
    }

    pub fn to_mat(&self, e: &QuadExt) -> Mat2<ExtElem> {
        Mat2::new(
            e.embed(&self.a),
            self.b.clone(),
            e.conj(&self.b),
            e.embed(&self.d),
        )
    }

    /// Reads a Hermitian matrix back, checking the symmetry.
    pub fn from_mat(e: &QuadExt, m: &Mat2<ExtElem>) -> Result<Self> {
        let bad = || RtfError::SingularElement("matrix is not Hermitian".into());
        let a = e.to_f(&m.a).map_err(|_| bad())?;
        let d = e.to_f(&m.d).map_err(|_| bad())?;
        let diff = e.sub(&e.conj(&m.b), &m.c);
        let (d0, d1) = e.coords(&diff);
        if !d0.is_zero() || !d1.is_zero() {
            return Err(bad());
        }
        Ok(HermMat::new(a, m.b.clone(), d))
    }

    /// ad - Nm(b), an element of F.
    pub fn det(&self, e: &QuadExt) -> LocalElem {
        self.a.mul(&self.d).sub(&e.norm(&self.b))
    }

    /// inv_S = ad / (b conj(b)).
    pub fn inv(&self, e: &QuadExt) -> Result<LocalElem> {
        match self.singular_class(e) {
            SingularClass::Regular => self.a.mul(&self.d).div(&e.norm(&self.b)),
            c => Err(RtfError::SingularElement(format!("{c:?}"))),
        }
    }

    /// inv'_S = inv / (1 - inv).
    pub fn inv_prime(&self, e: &QuadExt) -> Result<LocalElem> {
        let x = self.inv(e)?;
        x.div(&LocalElem::one(e.base()).sub(&x))
    }

    /// g s conj(g)^T.
    pub fn act(&self, e: &QuadExt, g: &Mat2<ExtElem>) -> Result<Self> {
        let gbar_t = g.map(|y| e.conj(y)).transpose();
        let m = g.mul(e, &self.to_mat(e)).mul(e, &gbar_t);
        Self::from_mat(e, &m)
    }

    /// z diag(a, 1) s diag(conj(a), 1).
    pub fn torus_act(&self, e: &QuadExt, a: &ExtElem, z: &LocalElem) -> Self {
        HermMat::new(
            z.mul(&e.norm(a)).mul(&self.a),
            e.mul(&e.embed(z), &e.mul(a, &self.b)),
            z.mul(&self.d),
        )
    }

    /// s lies in the orbit G w = {g w conj(g)^T}, i.e. -det(s) is a norm.
    pub fn gw_membership(&self, e: &QuadExt) -> Result<bool> {
        e.norm_membership(&self.det(e).neg())
    }

    /// Regular, or which singular set s lies in.
    ///
    /// In the split model s = [[a, b1], [b2, d]] the four sets are
    /// C (b2 = 0), Cw (d = 0), wC (a = 0) and wCw (b1 = 0). A nonsplit
    /// b = 0 is reported as wCw (the torus-type class).
    pub fn singular_class(&self, e: &QuadExt) -> SingularClass {
        match &self.b {
            ExtElem::Pair(b1, b2) => {
                if b2.is_zero() {
                    return SingularClass::C;
                }
                if b1.is_zero() {
                    return SingularClass::WCw;
                }
            }
            ExtElem::Field(b) => {
                if b.is_zero() {
                    return SingularClass::WCw;
                }
            }
        }
        if self.d.is_zero() {
            return SingularClass::Cw;
        }
        if self.a.is_zero() {
            return SingularClass::WC;
        }
        if self.det(e).is_zero() {
            return SingularClass::Degenerate;
        }
        SingularClass::Regular
    }
}

impl fmt::Display for HermMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [conj, {}]]", self.a, self.b, self.d)
    }
}

impl fmt::Debug for HermMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermMat{self}")
    }
}
