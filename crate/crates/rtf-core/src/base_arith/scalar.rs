//! The exact scalar ring Q(sqrt q)[xi^{+-1}, xi2^{+-1}].
//!
//! `xi` stands for the value of the unramified character Omega^{-1} at the
//! uniformizer of E; `xi2` is the second component in the split case.
//! Half-integer powers of q (Haar volumes) use the `sqrt_q` flag.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Roots;
use num_traits::{One, Zero};

pub use super::cyclo::Q;

/// A monomial xi^a xi2^b sqrt(q)^s with s in {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub xi: i64,
    pub xi2: i64,
    pub sqrt_q: u8,
}

impl Mono {
    pub const ONE: Mono = Mono {
        xi: 0,
        xi2: 0,
        sqrt_q: 0,
    };
}

/// Finite Q-linear combination of monomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct XiPoly {
    q: u32,
    terms: BTreeMap<Mono, Q>,
}

fn q_is_square(q: u32) -> Option<i128> {
    let r = (q as u64).sqrt();
    (r * r == q as u64).then_some(r as i128)
}

impl XiPoly {
    pub fn zero(q: u32) -> Self {
        XiPoly {
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(q: u32) -> Self {
        Self::constant(q, Q::one())
    }

    pub fn constant(q: u32, c: Q) -> Self {
        Self::term(q, Mono::ONE, c)
    }

    pub fn int(q: u32, n: i64) -> Self {
        Self::constant(q, Q::from_integer(n as i128))
    }

    /// c * m, normalized.
    pub fn term(q: u32, m: Mono, c: Q) -> Self {
        let mut p = Self::zero(q);
        p.add_term(m, c);
        p
    }

    pub fn xi_pow(q: u32, k: i64) -> Self {
        Self::term(q, Mono { xi: k, ..Mono::ONE }, Q::one())
    }

    pub fn xi2_pow(q: u32, k: i64) -> Self {
        Self::term(
            q,
            Mono {
                xi2: k,
                ..Mono::ONE
            },
            Q::one(),
        )
    }

    /// q^{a/2} for an integer a.
    pub fn q_half_pow(q: u32, a: i64) -> Self {
        let whole = a.div_euclid(2);
        let base = Q::from_integer(q as i128);
        let c = if whole >= 0 {
            base.pow(whole as i32)
        } else {
            base.recip().pow((-whole) as i32)
        };
        Self::term(
            q,
            Mono {
                sqrt_q: a.rem_euclid(2) as u8,
                ..Mono::ONE
            },
            c,
        )
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mut m: Mono, mut c: Q) {
        if m.sqrt_q == 1 {
            if let Some(r) = q_is_square(self.q) {
                m.sqrt_q = 0;
                c *= Q::from_integer(r);
            }
        }
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &XiPoly) -> XiPoly {
        assert_eq!(self.q, o.q, "value rings over different q");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, *c);
        }
        r
    }

    pub fn sub(&self, o: &XiPoly) -> XiPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> XiPoly {
        self.scale(-Q::one())
    }

    pub fn scale(&self, s: Q) -> XiPoly {
        let mut r = Self::zero(self.q);
        for (m, c) in &self.terms {
            r.add_term(*m, c * s);
        }
        r
    }

    pub fn mul(&self, o: &XiPoly) -> XiPoly {
        assert_eq!(self.q, o.q, "value rings over different q");
        let mut r = Self::zero(self.q);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let s = m1.sqrt_q + m2.sqrt_q;
                let mut c = c1 * c2;
                if s == 2 {
                    c *= Q::from_integer(self.q as i128);
                }
                let m = Mono {
                    xi: m1.xi + m2.xi,
                    xi2: m1.xi2 + m2.xi2,
                    sqrt_q: s % 2,
                };
                r.add_term(m, c);
            }
        }
        r
    }

    /// Multiplies by xi^a xi2^b.
    pub fn shift_xi(&self, a: i64, b: i64) -> XiPoly {
        let mut r = Self::zero(self.q);
        for (m, c) in &self.terms {
            r.add_term(
                Mono {
                    xi: m.xi + a,
                    xi2: m.xi2 + b,
                    sqrt_q: m.sqrt_q,
                },
                *c,
            );
        }
        r
    }

    /// Substitutes xi -> s * xi for a rational s != 0.
    pub fn substitute_xi(&self, s: Q) -> XiPoly {
        let mut r = Self::zero(self.q);
        for (m, c) in &self.terms {
            let f = if m.xi >= 0 {
                s.pow(m.xi as i32)
            } else {
                s.recip().pow((-m.xi) as i32)
            };
            r.add_term(*m, c * f);
        }
        r
    }

    /// The constant rational value, when the polynomial is one.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Mono::ONE).copied(),
            _ => None,
        }
    }

    /// Single-term view (monomial, coefficient).
    pub fn as_monomial(&self) -> Option<(Mono, Q)> {
        (self.terms.len() == 1).then(|| {
            let (m, c) = self.terms.iter().next().unwrap();
            (*m, *c)
        })
    }
}

pub(crate) fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_term(m: &Mono, c: &Q) -> String {
    let mut parts = Vec::new();
    if m.xi != 0 {
        parts.push(format!("xi^{}", m.xi));
    }
    if m.xi2 != 0 {
        parts.push(format!("xi2^{}", m.xi2));
    }
    if m.sqrt_q == 1 {
        parts.push("sqrtq".to_string());
    }
    if parts.is_empty() || !c.is_one() {
        parts.push(fmt_q(c));
    }
    parts.join(" * ")
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.terms.iter().map(|(m, c)| fmt_term(m, c)).collect();
        write!(f, "{}", s.join(" + "))
    }
}

impl fmt::Debug for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XiPoly[q={}]({})", self.q, self)
    }
}

/// coeff * (-log q^grade): a value carrying one symbolic log q factor.
#[derive(Clone)]
pub struct LogValue {
    pub coeff: XiPoly,
    pub grade: u32,
}

impl LogValue {
    pub fn new(coeff: XiPoly, grade: u32) -> Self {
        LogValue { coeff, grade }
    }

    /// The same value expressed with -log q^grade.
    pub fn regrade(&self, grade: u32) -> LogValue {
        LogValue {
            coeff: self.coeff.scale(Q::new(self.grade as i128, grade as i128)),
            grade,
        }
    }

    /// Coefficient of -log q.
    pub fn in_log_q(&self) -> XiPoly {
        self.coeff.scale(Q::from_integer(self.grade as i128))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

impl PartialEq for LogValue {
    fn eq(&self, o: &Self) -> bool {
        self.in_log_q() == o.in_log_q()
    }
}
impl Eq for LogValue {}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "0");
        }
        let log = format!("(-logq^{})", self.grade);
        match self.coeff.as_monomial() {
            Some((m, c)) => write!(f, "{} * {}", fmt_term_log(&m, &c), log),
            None => write!(f, "({}) * {}", self.coeff, log),
        }
    }
}

/// Like a term, but always shows the coefficient (e.g. "xi^1 * 2").
fn fmt_term_log(m: &Mono, c: &Q) -> String {
    let mut parts = Vec::new();
    if m.xi != 0 {
        parts.push(format!("xi^{}", m.xi));
    }
    if m.xi2 != 0 {
        parts.push(format!("xi2^{}", m.xi2));
    }
    if m.sqrt_q == 1 {
        parts.push("sqrtq".to_string());
    }
    parts.push(fmt_q(c));
    parts.join(" * ")
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogValue({self})")
    }
}
