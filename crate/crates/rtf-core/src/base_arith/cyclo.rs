//! Exact elements of Q(zeta_M), stored in the power basis reduced modulo
//! the cyclotomic polynomial Phi_M.
//!
//! Character values live in mu_p x mu_{q-1}; with M = p(q-1) the pair
//! (i mod p, j mod q-1) is the root zeta_M^{i(q-1) + j p}.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Q = Ratio<i128>;

/// Integer coefficients of Phi_n, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<i128> {
    // x^n - 1 divided by Phi_d for every proper divisor d of n
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn poly_div_exact(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = *b.last().unwrap();
    let mut out = vec![0i128; a.len() - db];
    for i in (0..out.len()).rev() {
        let c = r[i + db] / lead;
        out[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    out
}

/// Exact element of Q(zeta_M).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloValue {
    m: u32,
    /// Coefficients on 1, zeta, ..., zeta^{phi(M)-1}.
    coeffs: Vec<Q>,
}

impl CycloValue {
    pub fn zero(m: u32) -> Self {
        CycloValue {
            m,
            coeffs: Vec::new(),
        }
    }

    pub fn from_rational(m: u32, c: Q) -> Self {
        Self::from_dense(m, vec![c])
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, Q::one())
    }

    /// zeta_M^e.
    pub fn root(m: u32, e: i64) -> Self {
        let e = e.rem_euclid(m as i64) as usize;
        let mut c = vec![Q::zero(); e + 1];
        c[e] = Q::one();
        Self::from_dense(m, c)
    }

    /// Builds from power-basis coefficients of any length and reduces.
    pub fn from_dense(m: u32, mut c: Vec<Q>) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        // Phi_M is monic, so reduction stays over Q
        while c.len() > deg {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - deg;
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                c[shift + j] -= top * Q::from_integer(pj);
            }
        }
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        CycloValue { m, coeffs: c }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(Q::zero()),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn add(&self, o: &CycloValue) -> CycloValue {
        assert_eq!(self.m, o.m, "cyclotomic orders differ");
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = vec![Q::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.coeffs.iter().enumerate() {
            c[i] += x;
        }
        Self::from_dense(self.m, c)
    }

    pub fn neg(&self) -> CycloValue {
        CycloValue {
            m: self.m,
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, o: &CycloValue) -> CycloValue {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CycloValue) -> CycloValue {
        assert_eq!(self.m, o.m, "cyclotomic orders differ");
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.m);
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_dense(self.m, c)
    }

    pub fn scale(&self, r: Q) -> CycloValue {
        Self::from_dense(self.m, self.coeffs.iter().map(|x| x * r).collect())
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> CycloValue {
        let m = self.m as usize;
        let mut c = vec![Q::zero(); m];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[(m - i) % m] += x;
        }
        Self::from_dense(self.m, c)
    }

    /// |z|^2 = z * conj(z).
    pub fn abs2(&self) -> CycloValue {
        self.mul(&self.conj())
    }
}

/// Exponent of zeta_M for the pair (zeta_p^i, zeta_{q-1}^j), M = p(q-1).
pub fn root_index(p: u32, q: u32, i_p: i64, j_q1: i64) -> i64 {
    let m = (p * (q - 1)) as i64;
    (i_p * (q as i64 - 1) + j_q1 * p as i64).rem_euclid(m)
}

fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_q(c),
                _ if c.is_one() => format!("z{}^{}", self.m, i),
                _ if (-c).is_one() => format!("-z{}^{}", self.m, i),
                _ => format!("{}*z{}^{}", fmt_q(c), self.m, i),
            })
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.m, self)
    }
}

/// Sign helper for tests and reports.
pub fn is_positive_rational(v: &CycloValue) -> bool {
    v.as_rational().is_some_and(|r| r.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for m in [2, 3, 6, 8, 12, 20, 24] {
            let mut s = CycloValue::zero(m);
            for e in 0..m as i64 {
                s = s.add(&CycloValue::root(m, e));
            }
            assert!(s.is_zero(), "m={m}");
        }
    }

    #[test]
    fn roots_multiply_and_conjugate() {
        let m = 24;
        for a in 0..24 {
            for b in [1, 5, 23] {
                assert_eq!(
                    CycloValue::root(m, a).mul(&CycloValue::root(m, b)),
                    CycloValue::root(m, a + b)
                );
            }
            assert_eq!(CycloValue::root(m, a).abs2(), CycloValue::one(m));
        }
    }

    #[test]
    fn quadratic_gauss_sum_over_f5() {
        // sum of legendre(a) zeta_5^a has square -? and |.|^2 = 5
        let m = 5 * 4;
        let mut g = CycloValue::zero(m);
        for a in 1..5i64 {
            let leg = if [1, 4].contains(&a) { 1 } else { -1 };
            g = g.add(&CycloValue::root(m, root_index(5, 5, a, 0)).scale(Q::from_integer(leg)));
        }
        assert_eq!(g.abs2(), CycloValue::from_rational(m, Q::from_integer(5)));
        assert_eq!(g.mul(&g), CycloValue::from_rational(m, Q::from_integer(5)));
    }
}
