//! Truncated Laurent series over a finite field: the elements of F_q((t)).
//!
//! An element is `t^val * (c_0 + c_1 t + ...)` known modulo `t^prec`.
//! `prec = None` marks an exact element (a Laurent polynomial). Exact zero
//! and zero-up-to-precision are different states.

use std::cmp::{max, min};
use std::fmt;
use std::sync::Arc;

use super::fq::FqField;
use crate::error::{Result, RtfError};

/// Relative precision used when inverting an exact non-monomial element.
pub const DEFAULT_REL_PREC: i64 = 40;

/// Default enumeration budget for representative lists.
pub const DEFAULT_BUDGET: u64 = 4_000_000;

/// Valuation of an element with precision tracking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Certain(i64),
    /// Zero modulo t^n; the true valuation is at least n.
    AtLeast(i64),
    /// Exact zero.
    Infinite,
}

impl Valuation {
    pub fn certain(self) -> Result<i64> {
        match self {
            Valuation::Certain(v) => Ok(v),
            _ => Err(RtfError::UncertainValuation),
        }
    }
}

/// Element of F_q((t)) with tracked valuation and absolute precision.
#[derive(Clone)]
pub struct LocalElem {
    field: Arc<FqField>,
    val: i64,
    coeffs: Vec<u32>,
    prec: Option<i64>,
}

fn same_field(a: &Arc<FqField>, b: &Arc<FqField>) -> bool {
    Arc::ptr_eq(a, b) || (a.p() == b.p() && a.k() == b.k() && a.modulus() == b.modulus())
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(min(x, y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LocalElem {
    /// Normalizing constructor: truncates at `prec` and strips zero ends.
    pub fn from_parts(
        field: Arc<FqField>,
        val: i64,
        mut coeffs: Vec<u32>,
        prec: Option<i64>,
    ) -> Self {
        if let Some(p) = prec {
            let keep = max(0, p - val) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|&c| c != 0);
        match lead {
            None => LocalElem {
                field,
                val: prec.unwrap_or(0),
                coeffs: Vec::new(),
                prec,
            },
            Some(i) => {
                let last = coeffs.iter().rposition(|&c| c != 0).unwrap();
                coeffs.truncate(last + 1);
                coeffs.drain(..i);
                LocalElem {
                    field,
                    val: val + i as i64,
                    coeffs,
                    prec,
                }
            }
        }
    }

    pub fn zero(field: &Arc<FqField>) -> Self {
        LocalElem {
            field: field.clone(),
            val: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    /// Zero modulo t^prec.
    pub fn zero_mod(field: &Arc<FqField>, prec: i64) -> Self {
        LocalElem {
            field: field.clone(),
            val: prec,
            coeffs: Vec::new(),
            prec: Some(prec),
        }
    }

    pub fn one(field: &Arc<FqField>) -> Self {
        Self::monomial(field, 1, 0)
    }

    /// c * t^k for a residue element c.
    pub fn monomial(field: &Arc<FqField>, c: u32, k: i64) -> Self {
        Self::from_parts(field.clone(), k, vec![c], None)
    }

    /// The uniformizer t.
    pub fn uniformizer(field: &Arc<FqField>) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn from_int(field: &Arc<FqField>, n: i64) -> Self {
        Self::monomial(field, field.from_int(n), 0)
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Raw coefficient list starting at the valuation index.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn valuation(&self) -> Valuation {
        if !self.coeffs.is_empty() {
            Valuation::Certain(self.val)
        } else if let Some(p) = self.prec {
            Valuation::AtLeast(p)
        } else {
            Valuation::Infinite
        }
    }

    /// Certain valuation, or an error.
    pub fn v(&self) -> Result<i64> {
        self.valuation().certain()
    }

    /// Lower bound for the valuation (the precision for zero-up-to-precision).
    fn v_floor(&self) -> Option<i64> {
        match self.valuation() {
            Valuation::Certain(v) | Valuation::AtLeast(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// True when the element is zero as far as its precision is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of t^i; None when i is at or beyond the precision.
    pub fn coeff(&self, i: i64) -> Option<u32> {
        if self.prec.is_some_and(|p| i >= p) {
            return None;
        }
        if i < self.val {
            return Some(0);
        }
        Some(
            self.coeffs
                .get((i - self.val) as usize)
                .copied()
                .unwrap_or(0),
        )
    }

    /// Coefficient of t^i, failing with PrecisionUnderflow when unknown.
    pub fn coeff_certain(&self, i: i64) -> Result<u32> {
        self.coeff(i).ok_or(RtfError::PrecisionUnderflow)
    }

    /// Leading coefficient when the valuation is certain.
    pub fn leading(&self) -> Result<u32> {
        self.coeffs
            .first()
            .copied()
            .ok_or(RtfError::UncertainValuation)
    }

    /// x * t^{-v(x)}, a unit.
    pub fn unit_part(&self) -> Result<LocalElem> {
        let v = self.v()?;
        Ok(self.shift(-v))
    }

    /// x * t^k.
    pub fn shift(&self, k: i64) -> LocalElem {
        LocalElem {
            field: self.field.clone(),
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// Forgets coefficients at index >= p.
    pub fn truncate(&self, p: i64) -> LocalElem {
        Self::from_parts(
            self.field.clone(),
            self.val,
            self.coeffs.clone(),
            min_prec(self.prec, Some(p)),
        )
    }

    /// Sum of the terms of index < p, as an exact element.
    pub fn exact_part(&self, p: i64) -> LocalElem {
        let t = self.truncate(p);
        Self::from_parts(t.field, t.val, t.coeffs, None)
    }

    fn check(&self, other: &LocalElem) {
        assert!(
            same_field(&self.field, &other.field),
            "{}",
            RtfError::FieldMismatch
        );
    }

    pub fn same_field(&self, other: &LocalElem) -> bool {
        same_field(&self.field, &other.field)
    }

    pub fn add(&self, other: &LocalElem) -> LocalElem {
        self.check(other);
        let prec = min_prec(self.prec, other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return match prec {
                Some(p) => Self::zero_mod(&self.field, p),
                None => Self::zero(&self.field),
            };
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.val,
            (_, true) => self.val,
            _ => min(self.val, other.val),
        };
        let mut hi = max(
            self.val + self.coeffs.len() as i64,
            other.val + other.coeffs.len() as i64,
        );
        if let Some(p) = prec {
            hi = min(hi, p);
        }
        let len = max(0, hi - lo) as usize;
        let mut out = vec![0u32; len];
        let f = &self.field;
        for src in [self, other] {
            for (i, &c) in src.coeffs.iter().enumerate() {
                let idx = src.val + i as i64 - lo;
                if idx >= 0 && (idx as usize) < len {
                    out[idx as usize] = f.add(out[idx as usize], c);
                }
            }
        }
        Self::from_parts(self.field.clone(), lo, out, prec)
    }

    pub fn neg(&self) -> LocalElem {
        let f = &self.field;
        LocalElem {
            field: self.field.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &LocalElem) -> LocalElem {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by a residue element.
    pub fn scale(&self, c: u32) -> LocalElem {
        let f = &self.field;
        Self::from_parts(
            self.field.clone(),
            self.val,
            self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
            self.prec,
        )
    }

    pub fn mul(&self, other: &LocalElem) -> LocalElem {
        self.check(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.field);
        }
        // both have finite valuation floors here
        let (va, vb) = (self.v_floor().unwrap(), other.v_floor().unwrap());
        let prec = min_prec(self.prec.map(|p| p + vb), other.prec.map(|p| p + va));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero_mod(&self.field, prec.unwrap());
        }
        let val = self.val + other.val;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            len = min(len, max(0, p - val) as usize);
        }
        let f = &self.field;
        let mut out = vec![0u32; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len || a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Self::from_parts(self.field.clone(), val, out, prec)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<LocalElem> {
        let v = match self.valuation() {
            Valuation::Certain(v) => v,
            _ => return Err(RtfError::InversionOfZero),
        };
        let rel = match self.prec {
            Some(p) => p - v,
            None if self.coeffs.len() == 1 => {
                let c = self.field.inv(self.coeffs[0]).unwrap();
                return Ok(Self::monomial(&self.field, c, -v));
            }
            None => DEFAULT_REL_PREC,
        };
        Ok(self.inv_series(rel))
    }

    /// Inverse computed to relative precision `rel` (ignores exactness).
    pub fn inv_rel(&self, rel: i64) -> Result<LocalElem> {
        if self.coeffs.is_empty() {
            return Err(RtfError::InversionOfZero);
        }
        let rel = match self.prec {
            Some(p) => min(rel, p - self.val),
            None => rel,
        };
        Ok(self.inv_series(rel))
    }

    fn inv_series(&self, rel: i64) -> LocalElem {
        let f = &self.field;
        let n = rel as usize;
        let a = &self.coeffs;
        let a0inv = f.inv(a[0]).unwrap();
        let mut b = vec![0u32; n];
        b[0] = a0inv;
        for k in 1..n {
            let mut s = 0u32;
            for i in 1..=min(k, a.len() - 1) {
                s = f.add(s, f.mul(a[i], b[k - i]));
            }
            b[k] = f.neg(f.mul(s, a0inv));
        }
        Self::from_parts(self.field.clone(), -self.val, b, Some(-self.val + rel))
    }

    pub fn div(&self, other: &LocalElem) -> Result<LocalElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<LocalElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Applies a residue-field map coefficientwise (e.g. Frobenius).
    pub fn map_coeffs(&self, g: impl Fn(u32) -> u32) -> LocalElem {
        Self::from_parts(
            self.field.clone(),
            self.val,
            self.coeffs.iter().map(|&c| g(c)).collect(),
            self.prec,
        )
    }

    /// Equality on the common known range.
    pub fn eq_mod(&self, other: &LocalElem, p: i64) -> bool {
        let d = self.sub(other);
        match d.valuation() {
            Valuation::Infinite => true,
            Valuation::AtLeast(n) => n >= p,
            Valuation::Certain(v) => v >= p,
        }
    }

    /// Equality where both are known: the difference is zero up to precision.
    pub fn eq_known(&self, other: &LocalElem) -> bool {
        self.sub(other).is_zero()
    }

    /// |x| = q^{-v(x)} as the exponent -v.
    pub fn abs_exponent(&self) -> Result<i64> {
        Ok(-self.v()?)
    }

    /// Parses "c*t^k" sums with residue literals "g^j" or integers, and an
    /// optional trailing "O(t^P)".
    pub fn parse(field: &Arc<FqField>, s: &str) -> Result<LocalElem> {
        let mut acc = Self::zero(field);
        let mut prec = None;
        for (neg, term) in split_terms(s)? {
            let term = term.trim();
            if let Some(inner) = term.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
                let k = parse_t_power(inner)?;
                prec = Some(min(prec.unwrap_or(k), k));
                continue;
            }
            let (c, k) = match term.find('t') {
                None => (field.parse(term)?, 0),
                Some(_) => match term.rsplit_once('*') {
                    Some((c, tp)) => (field.parse(c)?, parse_t_power(tp)?),
                    None => (1, parse_t_power(term)?),
                },
            };
            let c = if neg { field.neg(c) } else { c };
            acc = acc.add(&Self::monomial(field, c, k));
        }
        Ok(match prec {
            Some(p) => acc.truncate(p),
            None => acc,
        })
    }
}

fn parse_t_power(s: &str) -> Result<i64> {
    let s = s.trim();
    let rest = s
        .strip_prefix('t')
        .ok_or_else(|| RtfError::Parse(format!("expected t-power, got {s:?}")))?;
    match rest.trim().strip_prefix('^') {
        Some(e) => {
            let e = e.trim().trim_start_matches('(').trim_end_matches(')');
            e.parse()
                .map_err(|_| RtfError::Parse(format!("bad exponent in {s:?}")))
        }
        None if rest.trim().is_empty() => Ok(1),
        None => Err(RtfError::Parse(format!("bad t-power {s:?}"))),
    }
}

/// Splits on top-level '+'/'-' that are not exponent signs.
fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RtfError::Parse("empty literal".into()));
    }
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev = '+';
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (ch == '+' || ch == '-') && depth == 0 && prev != '^' {
            if !cur.trim().is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
            } else if !out.is_empty() || !cur.trim().is_empty() {
                return Err(RtfError::Parse(format!("dangling sign in {s:?}")));
            }
            cur.clear();
            neg = ch == '-';
        } else if !ch.is_whitespace() {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    if cur.trim().is_empty() {
        return Err(RtfError::Parse(format!("dangling sign in {s:?}")));
    }
    out.push((neg, cur));
    Ok(out)
}

impl PartialEq for LocalElem {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field)
            && self.val == other.val
            && self.coeffs == other.coeffs
            && self.prec == other.prec
    }
}
impl Eq for LocalElem {}

impl fmt::Display for LocalElem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let k = self.val + i as i64;
            let cs = f.render(c);
            terms.push(match (k, cs.as_str()) {
                (0, _) => cs,
                (1, "1") => "t".to_string(),
                (1, _) => format!("{cs}*t"),
                (_, "1") => format!("t^{k}"),
                _ => format!("{cs}*t^{k}"),
            });
        }
        if let Some(p) = self.prec {
            terms.push(format!("O(t^{p})"));
        }
        if terms.is_empty() {
            return write!(fm, "0");
        }
        write!(fm, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for LocalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalElem[q={}]({})", self.field.q(), self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<&LocalElem> for &LocalElem {
            type Output = LocalElem;
            fn $m(self, rhs: &LocalElem) -> LocalElem {
                LocalElem::$m(self, rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for &LocalElem {
    type Output = LocalElem;
    fn neg(self) -> LocalElem {
        LocalElem::neg(self)
    }
}

/// Binary operation selector for [`laurent_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Div,
}

/// Checked arithmetic entry point; `Inv` ignores `b`.
pub fn laurent_arith(a: &LocalElem, b: &LocalElem, op: ArithOp) -> Result<LocalElem> {
    if !a.same_field(b) {
        return Err(RtfError::FieldMismatch);
    }
    match op {
        ArithOp::Add => Ok(a.add(b)),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Inv => a.inv(),
        ArithOp::Div => a.div(b),
    }
}

/// All residue polynomials u_0 + ... + u_{N-1} t^{N-1} with u_0 != 0.
fn unit_digit_lists(q: u32, depth: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as u64 - 1) * (q as u64).pow(depth as u32 - 1);
    (0..total).map(move |mut idx| {
        let mut d = vec![0u32; depth];
        d[0] = (idx % (q as u64 - 1)) as u32 + 1;
        idx /= q as u64 - 1;
        for x in d.iter_mut().skip(1) {
            *x = (idx % q as u64) as u32;
            idx /= q as u64;
        }
        d
    })
}

/// Number of classes in t^n O^x / (1 + p^N).
pub fn shell_count(q: u32, depth: i64) -> u64 {
    (q as u64 - 1) * (q as u64).pow(depth as u32 - 1)
}

/// Representatives of t^n O^x / (1 + p^N), exact Laurent polynomials.
pub fn shell_representatives(field: &Arc<FqField>, n: i64, depth: i64) -> Result<Vec<LocalElem>> {
    shell_representatives_budget(field, n, depth, DEFAULT_BUDGET)
}

pub fn shell_representatives_budget(
    field: &Arc<FqField>,
    n: i64,
    depth: i64,
    budget: u64,
) -> Result<Vec<LocalElem>> {
    if depth < 1 {
        return Err(RtfError::Config(format!("depth must be >= 1, got {depth}")));
    }
    let q = field.q();
    let count =
        (q as u64 - 1).saturating_mul((q as u64).checked_pow(depth as u32 - 1).unwrap_or(u64::MAX));
    if count > budget {
        return Err(RtfError::BudgetExceeded(format!(
            "{count} shell representatives"
        )));
    }
    Ok(unit_digit_lists(q, depth as usize)
        .map(|d| LocalElem::from_parts(field.clone(), n, d, None))
        .collect())
}

/// Representatives of O / p^N (all residue polynomials of length N).
pub fn residue_representatives(field: &Arc<FqField>, depth: i64) -> Result<Vec<LocalElem>> {
    let q = field.q() as u64;
    let count = q.checked_pow(depth.max(0) as u32).unwrap_or(u64::MAX);
    if count > DEFAULT_BUDGET {
        return Err(RtfError::BudgetExceeded(format!(
            "{count} residue representatives"
        )));
    }
    Ok((0..count)
        .map(|mut idx| {
            let mut d = vec![0u32; depth as usize];
            for x in d.iter_mut() {
                *x = (idx % q) as u32;
                idx /= q;
            }
            LocalElem::from_parts(field.clone(), 0, d, None)
        })
        .collect())
}
