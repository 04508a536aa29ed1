//! Laurent polynomials in T = q_E^{-s} with exact scalar coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::base_arith::scalar::{LogValue, XiPoly, Q};

/// sum_k c_k T^k; `grade` is the residue degree f with log q_E = f log q.
#[derive(Clone, PartialEq, Eq)]
pub struct OrbitalValue {
    q: u32,
    grade: u32,
    coeffs: BTreeMap<i64, XiPoly>,
}

impl OrbitalValue {
    pub fn zero(q: u32, grade: u32) -> Self {
        OrbitalValue {
            q,
            grade,
            coeffs: BTreeMap::new(),
        }
    }

    /// A T-free value.
    pub fn constant(c: XiPoly, grade: u32) -> Self {
        let mut v = Self::zero(c.q(), grade);
        v.add_term(0, &c);
        v
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn grade(&self) -> u32 {
        self.grade
    }

    pub fn add_term(&mut self, k: i64, c: &XiPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(|| XiPoly::zero(self.q));
        *e = e.add(c);
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.coeffs {
            r.add_term(*k, c);
        }
        r
    }

    pub fn scale(&self, s: Q) -> Self {
        self.mul_scalar(&XiPoly::constant(self.q, s))
    }

    pub fn mul_scalar(&self, s: &XiPoly) -> Self {
        let mut r = Self::zero(self.q, self.grade);
        for (k, c) in &self.coeffs {
            r.add_term(*k, &c.mul(s));
        }
        r
    }

    /// Coefficient of T^k.
    pub fn coeff(&self, k: i64) -> XiPoly {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| XiPoly::zero(self.q))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &XiPoly)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at s = 0 (T = 1).
    pub fn value_at_zero(&self) -> XiPoly {
        self.coeffs
            .values()
            .fold(XiPoly::zero(self.q), |a, c| a.add(c))
    }

    /// d/ds at s = 0: (sum_k k c_k) * (-log q_E).
    pub fn derivative_at_zero(&self) -> LogValue {
        let s = self.coeffs.iter().fold(XiPoly::zero(self.q), |a, (k, c)| {
            a.add(&c.scale(Q::from_integer(*k as i128)))
        });
        LogValue::new(s, self.grade)
    }
}

/// Free-function form of [`OrbitalValue::derivative_at_zero`].
pub fn derivative_at_zero(v: &OrbitalValue) -> LogValue {
    v.derivative_at_zero()
}

impl fmt::Display for OrbitalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let mono = c.as_monomial().is_some();
                match (*k, mono) {
                    (0, _) => format!("{c}"),
                    (k, true) => format!("{c} * T^{k}"),
                    (k, false) => format!("({c}) * T^{k}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for OrbitalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrbitalValue({self})")
    }
}
