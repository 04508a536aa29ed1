//! 2x2 matrices over F or E.

use std::fmt;
use std::sync::Arc;

use crate::base_arith::fq::FqField;
use crate::base_arith::laurent::LocalElem;
use crate::error::Result;
use crate::quad_ext::{ExtElem, QuadExt};

/// Arithmetic context for matrix entries.
pub trait Ring {
    type E: Clone + fmt::Display;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Result<Self::E>;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    /// Valuation in the ring's own normalization.
    fn val(&self, a: &Self::E) -> Result<i64>;
    fn is_zero(&self, a: &Self::E) -> bool;
}

/// F = F_q((t)) as a matrix coefficient ring.
#[derive(Debug, Clone)]
pub struct BaseRing(pub Arc<FqField>);

impl Ring for BaseRing {
    type E = LocalElem;
    fn add(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        a.add(b)
    }
    fn sub(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        a.sub(b)
    }
    fn mul(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        a.mul(b)
    }
    fn neg(&self, a: &LocalElem) -> LocalElem {
        a.neg()
    }
    fn inv(&self, a: &LocalElem) -> Result<LocalElem> {
        a.inv()
    }
    fn zero(&self) -> LocalElem {
        LocalElem::zero(&self.0)
    }
    fn one(&self) -> LocalElem {
        LocalElem::one(&self.0)
    }
    fn val(&self, a: &LocalElem) -> Result<i64> {
        a.v()
    }
    fn is_zero(&self, a: &LocalElem) -> bool {
        a.is_zero()
    }
}

impl Ring for QuadExt {
    type E = ExtElem;
    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        QuadExt::add(self, a, b)
    }
    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        QuadExt::sub(self, a, b)
    }
    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        QuadExt::mul(self, a, b)
    }
    fn neg(&self, a: &ExtElem) -> ExtElem {
        QuadExt::neg(self, a)
    }
    fn inv(&self, a: &ExtElem) -> Result<ExtElem> {
        QuadExt::inv(self, a)
    }
    fn zero(&self) -> ExtElem {
        QuadExt::zero(self)
    }
    fn one(&self) -> ExtElem {
        QuadExt::one(self)
    }
    fn val(&self, a: &ExtElem) -> Result<i64> {
        self.v_e(a)
    }
    fn is_zero(&self, a: &ExtElem) -> bool {
        match a {
            ExtElem::Field(x) => x.is_zero(),
            ExtElem::Pair(x, y) => x.is_zero() && y.is_zero(),
        }
    }
}

/// [[a, b], [c, d]].
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Clone> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(
            self.a.clone(),
            self.c.clone(),
            self.b.clone(),
            self.d.clone(),
        )
    }

    pub fn map<U: Clone>(&self, g: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2::new(g(&self.a), g(&self.b), g(&self.c), g(&self.d))
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn identity<R: Ring<E = T>>(r: &R) -> Self {
        Mat2::new(r.one(), r.zero(), r.zero(), r.one())
    }

    pub fn diag<R: Ring<E = T>>(r: &R, x: T, y: T) -> Self {
        Mat2::new(x, r.zero(), r.zero(), y)
    }

    pub fn det<R: Ring<E = T>>(&self, r: &R) -> T {
        r.sub(&r.mul(&self.a, &self.d), &r.mul(&self.b, &self.c))
    }

    pub fn mul<R: Ring<E = T>>(&self, r: &R, o: &Self) -> Self {
        let dot = |x: &T, y: &T, z: &T, w: &T| r.add(&r.mul(x, y), &r.mul(z, w));
        Mat2::new(
            dot(&self.a, &o.a, &self.b, &o.c),
            dot(&self.a, &o.b, &self.b, &o.d),
            dot(&self.c, &o.a, &self.d, &o.c),
            dot(&self.c, &o.b, &self.d, &o.d),
        )
    }

    pub fn add<R: Ring<E = T>>(&self, r: &R, o: &Self) -> Self {
        Mat2::new(
            r.add(&self.a, &o.a),
            r.add(&self.b, &o.b),
            r.add(&self.c, &o.c),
            r.add(&self.d, &o.d),
        )
    }

    pub fn scale<R: Ring<E = T>>(&self, r: &R, s: &T) -> Self {
        self.map(|x| r.mul(s, x))
    }

    pub fn inverse<R: Ring<E = T>>(&self, r: &R) -> Result<Self> {
        let di = r.inv(&self.det(r))?;
        Ok(Mat2::new(
            r.mul(&di, &self.d),
            r.neg(&r.mul(&di, &self.b)),
            r.neg(&r.mul(&di, &self.c)),
            r.mul(&di, &self.a),
        ))
    }

    /// Smallest entry valuation (None for the zero matrix).
    pub fn min_val<R: Ring<E = T>>(&self, r: &R) -> Result<Option<i64>> {
        let mut m: Option<i64> = None;
        for e in self.entries() {
            if r.is_zero(e) {
                continue;
            }
            let v = r.val(e)?;
            m = Some(m.map_or(v, |x| x.min(v)));
        }
        Ok(m)
    }

    /// Entries integral and determinant a unit.
    pub fn in_gl2_integral<R: Ring<E = T>>(&self, r: &R) -> Result<bool> {
        for e in self.entries() {
            if !r.is_zero(e) && r.val(e)? < 0 {
                return Ok(false);
            }
        }
        let det = self.det(r);
        Ok(!r.is_zero(&det) && r.val(&det)? == 0)
    }
}

impl Mat2<LocalElem> {
    /// Entrywise agreement modulo t^p.
    pub fn eq_mod(&self, o: &Self, p: i64) -> bool {
        self.a.eq_mod(&o.a, p)
            && self.b.eq_mod(&o.b, p)
            && self.c.eq_mod(&o.c, p)
            && self.d.eq_mod(&o.d, p)
    }

    pub fn from_ints(f: &Arc<FqField>, m: [i64; 4]) -> Self {
        let e = |n| LocalElem::from_int(f, n);
        Mat2::new(e(m[0]), e(m[1]), e(m[2]), e(m[3]))
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl<T: fmt::Display> fmt::Debug for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat2{self}")
    }
}

/// The Hermitian form w = [[0, 1], [1, 0]].
pub fn w_matrix<R: Ring>(r: &R) -> Mat2<R::E> {
    Mat2::new(r.zero(), r.one(), r.one(), r.zero())
}

/// w' = [[0, 1], [-1, 0]].
pub fn w_prime<R: Ring>(r: &R) -> Mat2<R::E> {
    Mat2::new(r.zero(), r.one(), r.neg(&r.one()), r.zero())
}
