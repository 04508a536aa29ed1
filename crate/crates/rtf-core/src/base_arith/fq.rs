//! Finite fields F_q with q = p^k small enough for table arithmetic.
//!
//! Elements are encoded as integers in `0..q` whose base-p digits are the
//! coefficients of a polynomial in the generator X modulo a primitive
//! modulus. The generator X has order q-1, so multiplication is done
//! through exp/log tables.

use crate::error::{Result, RtfError};

/// Default upper bound on q for exhaustive residue enumeration.
pub const DEFAULT_Q_BOUND: u32 = 64;

/// Hard limit for table construction.
pub const MAX_Q: u32 = 1 << 12;

/// A finite field of order q = p^k with a fixed primitive generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    p: u32,
    k: u32,
    q: u32,
    /// Low coefficients of the monic primitive modulus, X^k = -sum m_i X^i.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    add: Option<Vec<u32>>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, k) with q = p^k, or returns None.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    if !is_prime(p) {
        return None;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn digits(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut d = vec![0; k as usize];
    for x in d.iter_mut() {
        *x = code % p;
        code /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

impl FqField {
    /// Builds F_{p^k} with the first primitive modulus in lexicographic order.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        Self::with_bound(p, k, MAX_Q)
    }

    /// Builds F_q from its order.
    pub fn from_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| RtfError::Config(format!("q={q} is not a prime power")))?;
        Self::new(p, k)
    }

    /// Builds F_{p^k}, refusing orders above `bound`.
    pub fn with_bound(p: u32, k: u32, bound: u32) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(RtfError::Config(format!("invalid field p={p}, k={k}")));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= bound.min(MAX_Q))
            .ok_or(RtfError::BudgetExceeded("field order above bound".into()))?;
        for cand in 0..q {
            let low = digits(cand, p, k);
            if low[0] == 0 {
                continue;
            }
            if let Some(exp) = Self::power_table(p, k, q, &low) {
                let mut log = vec![0u32; q as usize];
                for (i, &c) in exp.iter().enumerate() {
                    log[c as usize] = i as u32;
                }
                let mut f = FqField {
                    p,
                    k,
                    q,
                    modulus: low,
                    exp,
                    log,
                    trace: Vec::new(),
                    add: None,
                };
                if q <= 256 {
                    let mut add = vec![0u32; (q * q) as usize];
                    for a in 0..q {
                        for b in 0..q {
                            add[(a * q + b) as usize] = f.add_slow(a, b);
                        }
                    }
                    f.add = Some(add);
                }
                f.trace = (0..q).map(|a| f.trace_slow(a)).collect();
                return Ok(f);
            }
        }
        Err(RtfError::Config(format!(
            "no primitive modulus for p={p}, k={k}"
        )))
    }

    /// Powers of X modulo the candidate; None unless X has order q-1.
    fn power_table(p: u32, k: u32, q: u32, low: &[u32]) -> Option<Vec<u32>> {
        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut cur = vec![0u32; k as usize];
        cur[0] = 1;
        for i in 0..n {
            let code = undigits(&cur, p);
            if i > 0 && code == 1 {
                return None;
            }
            exp.push(code);
            let top = cur[k as usize - 1];
            for j in (1..k as usize).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for j in 0..k as usize {
                cur[j] = (cur[j] + (p - top) * low[j]) % p;
            }
        }
        (undigits(&cur, p) == 1).then_some(exp)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        undigits(&s, self.p)
    }

    fn trace_slow(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.k {
            acc = self.add_slow(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Low coefficients of the primitive modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The fixed generator of F_q^x.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    pub fn zero(&self) -> u32 {
        0
    }
    pub fn one(&self) -> u32 {
        1
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = digits(a, self.p, self.k)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        undigits(&d, self.p)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// g^j for the fixed generator g, any integer j.
    pub fn gen_pow(&self, j: i64) -> u32 {
        let n = (self.q - 1) as i64;
        self.exp[j.rem_euclid(n) as usize]
    }

    /// Discrete logarithm to the fixed generator; None for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Absolute trace to F_p, as an integer in 0..p.
    pub fn trace(&self, a: u32) -> u32 {
        self.trace[a as usize]
    }

    /// Quadratic character on F_q^x (p odd): +1 on squares, -1 otherwise.
    pub fn legendre(&self, a: u32) -> i32 {
        match self.log(a) {
            None => 0,
            Some(l) if self.p == 2 || l % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    /// A square root when one exists.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        let Some(l) = self.log(a) else { return Some(0) };
        let n = self.q - 1;
        if self.p == 2 {
            // squaring is bijective; its inverse on logs is halving mod odd n
            let inv2 = n.div_ceil(2);
            return Some(self.exp[((l as u64 * inv2 as u64) % n as u64) as usize]);
        }
        (l % 2 == 0).then(|| self.exp[(l / 2) as usize])
    }

    /// Iterates all elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Iterates nonzero elements as g^0, g^1, ...
    pub fn units(&self) -> impl Iterator<Item = u32> + '_ {
        self.exp.iter().copied()
    }

    /// Renders an element as "0" or "g^j" (or an integer over a prime field).
    pub fn render(&self, a: u32) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        match self.log(a) {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(j) => format!("g^{j}"),
        }
    }

    /// Parses "g^j", "g", or an integer literal (read in the prime field).
    pub fn parse(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('g') {
            let j: i64 = match rest.strip_prefix('^') {
                Some(e) => e
                    .trim()
                    .parse()
                    .map_err(|_| RtfError::Parse(format!("bad exponent in {s:?}")))?,
                None if rest.is_empty() => 1,
                None => return Err(RtfError::Parse(format!("bad residue literal {s:?}"))),
            };
            return Ok(self.gen_pow(j));
        }
        let n: i64 = s
            .parse()
            .map_err(|_| RtfError::Parse(format!("bad residue literal {s:?}")))?;
        Ok(self.from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn generator_has_full_order() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81] {
            let f = FqField::from_order(q).unwrap();
            let g = f.generator();
            let mut x = g;
            let mut ord = 1;
            while x != 1 {
                x = f.mul(x, g);
                ord += 1;
            }
            assert_eq!(ord, q - 1, "q={q}");
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [4, 8, 9] {
            let f = FqField::from_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    for c in [0, 1, q - 1] {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn trace_is_additive_and_frobenius_stable() {
        let f = FqField::from_order(27).unwrap();
        for a in f.elements() {
            assert_eq!(f.trace(a), f.trace(f.pow(a, 3)));
            for b in [1, 5, 13] {
                assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % 3);
            }
        }
        // trace is onto F_p
        let hit: std::collections::BTreeSet<u32> = f.elements().map(|a| f.trace(a)).collect();
        assert_eq!(hit.len(), 3);
    }

    #[test]
    fn sqrt_and_legendre() {
        for q in [3, 5, 9, 8] {
            let f = FqField::from_order(q).unwrap();
            for a in f.units() {
                match f.sqrt(a) {
                    Some(r) => assert_eq!(f.mul(r, r), a),
                    None => assert_eq!(f.legendre(a), -1),
                }
            }
        }
    }

    #[test]
    fn parse_render_roundtrip() {
        let f = FqField::from_order(9).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.render(a)).unwrap(), a);
        }
        assert_eq!(f.parse("2").unwrap(), f.neg(1));
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            FqField::with_bound(2, 7, 64),
            Err(RtfError::BudgetExceeded(_))
        ));
    }
}
