//! Separable quadratic extensions E/F of F = F_q((t)).
//!
//! * unramified: E = F_{q^2}((t)), conjugation is coefficientwise Frobenius;
//! * ramified (p odd): E = F_q((s)) with s^2 = u t, conjugation s -> -s;
//! * split: E = F + F with the swap.
//!
//! A basis element theta of E over F is fixed: sqrt(u) with u a non-square
//! residue (p odd, unramified), the root of X^2 + X + tau (p = 2,
//! unramified), or s (ramified).

use std::fmt;
use std::sync::Arc;

use crate::base_arith::fq::FqField;
use crate::base_arith::laurent::{shell_representatives, LocalElem};
use crate::base_arith::measure::ExtShape;
use crate::error::{Result, RtfError};

/// Which quadratic extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Flavor {
    Split,
    Unramified,
    /// s^2 = u t for the residue unit u.
    Ramified {
        u: u32,
    },
}

impl Flavor {
    pub fn shape(self) -> ExtShape {
        match self {
            Flavor::Split => ExtShape::Split,
            Flavor::Unramified => ExtShape::Unramified,
            Flavor::Ramified { .. } => ExtShape::Ramified,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Split => write!(f, "split"),
            Flavor::Unramified => write!(f, "unramified"),
            Flavor::Ramified { u } => write!(f, "ramified(u={u})"),
        }
    }
}

/// Element of E.
#[derive(Clone, PartialEq, Eq)]
pub enum ExtElem {
    /// Unramified (over F_{q^2}) or ramified (series in s).
    Field(LocalElem),
    /// Split: a pair of elements of F.
    Pair(LocalElem, LocalElem),
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtElem::Field(x) => write!(f, "{x}"),
            ExtElem::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem({self})")
    }
}

/// E/F together with the residue-field data it needs.
#[derive(Debug, Clone)]
pub struct QuadExt {
    flavor: Flavor,
    base: Arc<FqField>,
    /// F_{q^2} for the unramified flavor, F_q otherwise.
    ext: Arc<FqField>,
    /// F_q code -> F_{q^2} code.
    embed: Vec<u32>,
    /// F_{q^2} code -> F_q code (or u32::MAX when not in F_q).
    restrict: Vec<u32>,
    /// x -> x^q on F_{q^2}.
    frob: Vec<u32>,
    /// F_{q^2} code -> (c0, c1) with x = c0 + c1 theta.
    coords: Vec<(u32, u32)>,
    theta: u32,
    /// theta^2 = theta_a + theta_b * theta over F_q.
    theta_sq: (u32, u32),
    /// An element of trace 1 in F_{q^2}.
    trace_one: u32,
    /// Non-square unit (p odd) or Artin-Schreier tau (p = 2).
    datum: u32,
}

impl QuadExt {
    pub fn new(base: &Arc<FqField>, flavor: Flavor) -> Result<Self> {
        let q = base.q();
        let ident: Vec<u32> = (0..q).collect();
        let mut ext = QuadExt {
            flavor,
            base: base.clone(),
            ext: base.clone(),
            embed: ident.clone(),
            restrict: ident.clone(),
            frob: ident,
            coords: Vec::new(),
            theta: 0,
            theta_sq: (0, 0),
            trace_one: 0,
            datum: 0,
        };
        ext.datum = Self::pick_datum(base);
        match flavor {
            Flavor::Split => {}
            Flavor::Ramified { u } => {
                if base.p() == 2 {
                    return Err(RtfError::Config("ramified flavor needs p odd".into()));
                }
                if u == 0 || u >= q {
                    return Err(RtfError::Config(
                        "ramified flavor needs a residue unit u".into(),
                    ));
                }
            }
            Flavor::Unramified => ext.build_unramified()?,
        }
        Ok(ext)
    }

    /// u = g (a non-square) for p odd; the first tau with X^2+X+tau irreducible for p = 2.
    fn pick_datum(base: &FqField) -> u32 {
        if base.p() != 2 {
            return base.generator();
        }
        (1..base.q())
            .find(|&tau| {
                base.elements()
                    .all(|x| base.add(base.add(base.mul(x, x), x), tau) != 0)
            })
            .expect("an irreducible Artin-Schreier polynomial exists")
    }

    fn build_unramified(&mut self) -> Result<()> {
        let base = self.base.clone();
        let (p, k, q) = (base.p(), base.k(), base.q());
        let big = Arc::new(FqField::new(p, 2 * k)?);
        // image of the generator of F_q: a root of its modulus in the subgroup of order q-1
        let modulus = base.modulus();
        let eval = |x: u32| -> u32 {
            // x^k + sum m_i x^i with prime-field coefficients (codes agree on F_p)
            let mut acc = big.pow(x, k as u64);
            for (i, &m) in modulus.iter().enumerate() {
                acc = big.add(acc, big.mul(m, big.pow(x, i as u64)));
            }
            acc
        };
        let step = (q + 1) as i64;
        let h = (1..q as i64)
            .map(|j| big.gen_pow(step * j))
            .find(|&h| eval(h) == 0)
            .ok_or_else(|| RtfError::Config("embedding of the residue field failed".into()))?;
        let mut embed = vec![0u32; q as usize];
        for i in 0..(q - 1) {
            embed[base.gen_pow(i as i64) as usize] = big.pow(h, i as u64);
        }
        let mut restrict = vec![u32::MAX; big.q() as usize];
        for (a, &b) in embed.iter().enumerate() {
            restrict[b as usize] = a as u32;
        }
        let frob: Vec<u32> = big.elements().map(|x| big.pow(x, q as u64)).collect();
        // theta
        let theta = if p == 2 {
            let tau = embed[self.datum as usize];
            big.elements()
                .find(|&y| big.add(big.add(big.mul(y, y), y), tau) == 0)
                .ok_or_else(|| RtfError::Config("no Artin-Schreier root".into()))?
        } else {
            big.sqrt(embed[self.datum as usize])
                .ok_or_else(|| RtfError::Config("no square root of u".into()))?
        };
        let mut coords = vec![(0u32, 0u32); big.q() as usize];
        for c0 in 0..q {
            for c1 in 0..q {
                let x = big.add(embed[c0 as usize], big.mul(embed[c1 as usize], theta));
                coords[x as usize] = (c0, c1);
            }
        }
        let tsq = coords[big.mul(theta, theta) as usize];
        let trace_one = if p == 2 {
            theta
        } else {
            big.inv(big.from_int(2)).unwrap()
        };
        debug_assert_eq!(big.add(trace_one, frob[trace_one as usize]), 1);
        self.ext = big;
        self.embed = embed;
        self.restrict = restrict;
        self.frob = frob;
        self.coords = coords;
        self.theta = theta;
        self.theta_sq = tsq;
        self.trace_one = trace_one;
        Ok(())
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn shape(&self) -> ExtShape {
        self.flavor.shape()
    }

    pub fn base(&self) -> &Arc<FqField> {
        &self.base
    }

    /// Residue field of E (F_{q^2} when unramified).
    pub fn residue_field(&self) -> &Arc<FqField> {
        &self.ext
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    /// Ramification index.
    pub fn e(&self) -> i64 {
        self.shape().e()
    }

    /// The non-square unit u (p odd) or tau (p = 2) behind theta.
    pub fn datum(&self) -> u32 {
        self.datum
    }

    /// theta^2 = a + b theta.
    pub fn theta_square(&self) -> (u32, u32) {
        self.theta_sq
    }

    /// F -> E.
    pub fn embed(&self, x: &LocalElem) -> ExtElem {
        match self.flavor {
            Flavor::Split => ExtElem::Pair(x.clone(), x.clone()),
            Flavor::Unramified => ExtElem::Field(relabel(x, &self.ext, |c| self.embed[c as usize])),
            Flavor::Ramified { u } => {
                let f = &self.base;
                let uinv = f.inv(u).unwrap();
                let mut acc = match x.prec() {
                    Some(p) => LocalElem::zero_mod(f, 2 * p),
                    None => LocalElem::zero(f),
                };
                if let Ok(v) = x.v() {
                    for (i, &c) in x.coeffs().iter().enumerate() {
                        let kk = v + i as i64;
                        let cc = f.mul(c, f.pow(uinv, kk.rem_euclid(f.q() as i64 - 1) as u64));
                        acc = acc.add(&LocalElem::monomial(f, cc, 2 * kk));
                    }
                }
                ExtElem::Field(acc)
            }
        }
    }

    /// E -> F for elements fixed by conjugation.
    pub fn to_f(&self, y: &ExtElem) -> Result<LocalElem> {
        match (self.flavor, y) {
            (Flavor::Split, ExtElem::Pair(a, b)) => {
                if !a.eq_known(b) {
                    return Err(RtfError::Config("pair is not diagonal".into()));
                }
                Ok(if a.prec().is_some() || b.prec().is_none() {
                    a.clone()
                } else {
                    b.clone()
                })
            }
            (Flavor::Unramified, ExtElem::Field(x)) => {
                if x.coeffs()
                    .iter()
                    .any(|&c| self.restrict[c as usize] == u32::MAX)
                {
                    return Err(RtfError::Config("element is not in F".into()));
                }
                Ok(relabel(x, &self.base, |c| self.restrict[c as usize]))
            }
            (Flavor::Ramified { u }, ExtElem::Field(x)) => {
                let f = &self.base;
                let mut acc = match x.prec() {
                    Some(p) => LocalElem::zero_mod(f, (p + 1).div_euclid(2)),
                    None => LocalElem::zero(f),
                };
                if let Ok(v) = x.v() {
                    for (i, &c) in x.coeffs().iter().enumerate() {
                        let idx = v + i as i64;
                        if c == 0 {
                            continue;
                        }
                        if idx.rem_euclid(2) == 1 {
                            return Err(RtfError::Config("element is not in F".into()));
                        }
                        let kk = idx / 2;
                        let cc = f.mul(c, f.pow(u, kk.rem_euclid(f.q() as i64 - 1) as u64));
                        acc = acc.add(&LocalElem::monomial(f, cc, kk));
                    }
                }
                Ok(acc)
            }
            _ => Err(RtfError::Config(
                "element shape does not match the flavor".into(),
            )),
        }
    }

    pub fn conj(&self, y: &ExtElem) -> ExtElem {
        match y {
            ExtElem::Pair(a, b) => ExtElem::Pair(b.clone(), a.clone()),
            ExtElem::Field(x) => match self.flavor {
                Flavor::Unramified => ExtElem::Field(x.map_coeffs(|c| self.frob[c as usize])),
                _ => {
                    let f = &self.base;
                    let v = x.v().unwrap_or(0);
                    let coeffs: Vec<u32> = x
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| {
                            if (v + i as i64).rem_euclid(2) == 1 {
                                f.neg(c)
                            } else {
                                c
                            }
                        })
                        .collect();
                    ExtElem::Field(LocalElem::from_parts(f.clone(), v, coeffs, x.prec()))
                }
            },
        }
    }

    pub fn norm(&self, y: &ExtElem) -> LocalElem {
        self.to_f(&self.mul(y, &self.conj(y)))
            .expect("norm lies in F")
    }

    pub fn trace(&self, y: &ExtElem) -> LocalElem {
        self.to_f(&self.add(y, &self.conj(y)))
            .expect("trace lies in F")
    }

    /// (tr, nm).
    pub fn trace_norm(&self, y: &ExtElem) -> (LocalElem, LocalElem) {
        (self.trace(y), self.norm(y))
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        zip(a, b, LocalElem::add)
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        zip(a, b, LocalElem::sub)
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        zip(a, b, LocalElem::mul)
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        map1(a, LocalElem::neg)
    }

    pub fn inv(&self, a: &ExtElem) -> Result<ExtElem> {
        Ok(match a {
            ExtElem::Field(x) => ExtElem::Field(x.inv()?),
            ExtElem::Pair(x, y) => ExtElem::Pair(x.inv()?, y.inv()?),
        })
    }

    pub fn div(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &ExtElem, e: i64) -> Result<ExtElem> {
        Ok(match a {
            ExtElem::Field(x) => ExtElem::Field(x.pow(e)?),
            ExtElem::Pair(x, y) => ExtElem::Pair(x.pow(e)?, y.pow(e)?),
        })
    }

    pub fn zero(&self) -> ExtElem {
        self.embed(&LocalElem::zero(&self.base))
    }

    pub fn one(&self) -> ExtElem {
        self.embed(&LocalElem::one(&self.base))
    }

    /// The uniformizer of E (t or s); the split case uses (t, 1).
    pub fn uniformizer(&self) -> ExtElem {
        match self.flavor {
            Flavor::Split => ExtElem::Pair(
                LocalElem::uniformizer(&self.base),
                LocalElem::one(&self.base),
            ),
            Flavor::Unramified => ExtElem::Field(LocalElem::uniformizer(&self.ext)),
            Flavor::Ramified { .. } => ExtElem::Field(LocalElem::uniformizer(&self.base)),
        }
    }

    /// theta as an element of E (s in the ramified flavor).
    pub fn theta(&self) -> ExtElem {
        match self.flavor {
            Flavor::Split => ExtElem::Pair(LocalElem::one(&self.base), LocalElem::zero(&self.base)),
            Flavor::Unramified => ExtElem::Field(LocalElem::monomial(&self.ext, self.theta, 0)),
            Flavor::Ramified { .. } => ExtElem::Field(LocalElem::uniformizer(&self.base)),
        }
    }

    /// y = c0 + c1 theta with c0, c1 in F.
    pub fn coords(&self, y: &ExtElem) -> (LocalElem, LocalElem) {
        match (self.flavor, y) {
            (Flavor::Split, ExtElem::Pair(a, b)) => (b.clone(), a.sub(b)),
            (Flavor::Unramified, ExtElem::Field(x)) => {
                let c0 = relabel(x, &self.base, |c| self.coords[c as usize].0);
                let c1 = relabel(x, &self.base, |c| self.coords[c as usize].1);
                (c0, c1)
            }
            (Flavor::Ramified { .. }, ExtElem::Field(_)) => {
                let th = self.theta();
                let tr = self.trace(y);
                let two_inv = self.base.inv(self.base.from_int(2)).unwrap();
                let c0 = tr.scale(two_inv);
                let diff = self.sub(y, &self.embed(&c0));
                let c1 = self
                    .to_f(&self.div(&diff, &th).expect("theta is invertible"))
                    .expect("coordinate in F");
                (c0, c1)
            }
            _ => panic!("element shape does not match the flavor"),
        }
    }

    /// c0 + c1 theta.
    pub fn from_coords(&self, c0: &LocalElem, c1: &LocalElem) -> ExtElem {
        self.add(&self.embed(c0), &self.mul(&self.embed(c1), &self.theta()))
    }

    /// Valuation in E's own normalization (split: valuation of the norm).
    pub fn v_e(&self, y: &ExtElem) -> Result<i64> {
        match y {
            ExtElem::Field(x) => x.v(),
            ExtElem::Pair(a, b) => Ok(a.v()? + b.v()?),
        }
    }

    /// v_F(Nm y).
    pub fn v_norm(&self, y: &ExtElem) -> Result<i64> {
        Ok(match self.flavor {
            Flavor::Unramified => 2 * self.v_e(y)?,
            _ => self.v_e(y)?,
        })
    }

    /// Precision of an element in E's valuation (None when exact).
    pub fn prec(&self, y: &ExtElem) -> Option<i64> {
        match y {
            ExtElem::Field(x) => x.prec(),
            ExtElem::Pair(a, b) => match (a.prec(), b.prec()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            },
        }
    }

    /// Representatives of {v_E = n} modulo 1 + p_E^N (split: both components).
    pub fn shell_reps(&self, n: i64, depth: i64) -> Result<Vec<ExtElem>> {
        match self.flavor {
            Flavor::Split => Err(RtfError::Config(
                "split shells are indexed by a pair of valuations".into(),
            )),
            Flavor::Unramified => Ok(shell_representatives(&self.ext, n, depth)?
                .into_iter()
                .map(ExtElem::Field)
                .collect()),
            Flavor::Ramified { .. } => Ok(shell_representatives(&self.base, n, depth)?
                .into_iter()
                .map(ExtElem::Field)
                .collect()),
        }
    }

    /// Quadratic character eta of F^x attached to E.
    pub fn eta(&self, x: &LocalElem) -> Result<i32> {
        let v = x.v()?;
        Ok(match self.flavor {
            Flavor::Split => 1,
            Flavor::Unramified => {
                if v.rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                }
            }
            Flavor::Ramified { u } => {
                let f = &self.base;
                let mu = f.neg(u);
                let w0 = x.leading()?;
                let r = f.mul(
                    w0,
                    f.pow(f.inv(mu).unwrap(), v.rem_euclid(f.q() as i64 - 1) as u64),
                );
                f.legendre(r)
            }
        })
    }

    /// An exact y with Nm(y) = x mod (1 + p_F^depth), or None if x is not a norm.
    pub fn norm_preimage(&self, x: &LocalElem, depth: i64) -> Result<Option<ExtElem>> {
        let v = x.v()?;
        if self.eta(x)? != 1 {
            return Ok(None);
        }
        let w = x.unit_part()?;
        let y = match self.flavor {
            Flavor::Split => ExtElem::Pair(x.clone(), LocalElem::one(&self.base)),
            Flavor::Unramified => {
                let z = self.unit_norm_preimage(&w, depth)?;
                self.mul(
                    &ExtElem::Field(LocalElem::monomial(&self.ext, 1, v / 2)),
                    &z,
                )
            }
            Flavor::Ramified { u } => {
                let f = &self.base;
                let mu_inv = f.inv(f.neg(u)).unwrap();
                let w2 = w.scale(f.pow(mu_inv, v.rem_euclid(f.q() as i64 - 1) as u64));
                let z = sqrt_unit(&w2, depth)?;
                let sv = ExtElem::Field(LocalElem::monomial(f, 1, v));
                self.mul(&sv, &self.embed(&z))
            }
        };
        Ok(Some(y))
    }

    /// Hensel lift of a norm preimage for an F-unit, unramified flavor.
    fn unit_norm_preimage(&self, w: &LocalElem, depth: i64) -> Result<ExtElem> {
        let big = &self.ext;
        let q = self.q() as u64;
        let w0 = self.embed[w.leading()? as usize];
        let l = big.log(w0).unwrap() as u64;
        debug_assert_eq!(l % (q + 1), 0);
        let y0 = big.gen_pow((l / (q + 1)) as i64);
        let mut y = ExtElem::Field(LocalElem::monomial(big, y0, 0));
        let target = w.exact_part(depth);
        for i in 1..depth {
            let nm = self.norm(&y);
            let err = target.div(&nm)?.sub(&LocalElem::one(&self.base));
            let d = err.coeff(i).unwrap_or(0);
            if d == 0 {
                continue;
            }
            let delta = big.mul(self.embed[d as usize], self.trace_one);
            let corr = LocalElem::one(big).add(&LocalElem::monomial(big, delta, i));
            y = self.mul(&y, &ExtElem::Field(corr));
        }
        Ok(y)
    }

    /// Whether x is a norm, certified by an explicit preimage when it is.
    pub fn norm_membership(&self, x: &LocalElem) -> Result<bool> {
        const CERT_DEPTH: i64 = 4;
        match self.norm_preimage(x, CERT_DEPTH)? {
            None => Ok(false),
            Some(y) => {
                let ratio = self.norm(&y).div(x)?.sub(&LocalElem::one(&self.base));
                if !ratio.eq_mod(&LocalElem::zero(&self.base), CERT_DEPTH) {
                    return Err(RtfError::Config("norm certificate failed".into()));
                }
                Ok(true)
            }
        }
    }

    /// Random exact element of valuation v with a unit part of `len` terms.
    /// In the split flavor the second component is a unit.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R, v: i64, len: usize) -> ExtElem {
        match self.flavor {
            Flavor::Split => ExtElem::Pair(
                random_elem(&self.base, rng, v, len),
                random_elem(&self.base, rng, 0, len),
            ),
            Flavor::Unramified => ExtElem::Field(random_elem(&self.ext, rng, v, len)),
            Flavor::Ramified { .. } => ExtElem::Field(random_elem(&self.base, rng, v, len)),
        }
    }
}

/// Random exact element t^v (c_0 + ... + c_{len-1} t^{len-1}) with c_0 != 0.
pub fn random_elem<R: rand::Rng + ?Sized>(
    field: &Arc<FqField>,
    rng: &mut R,
    v: i64,
    len: usize,
) -> LocalElem {
    use rand::RngExt;
    let mut c: Vec<u32> = (0..len.max(1))
        .map(|_| rng.random_range(0..field.q()))
        .collect();
    c[0] = rng.random_range(1..field.q());
    LocalElem::from_parts(field.clone(), v, c, None)
}

/// Square root of a unit in F (p odd), accurate modulo t^depth.
pub fn sqrt_unit(w: &LocalElem, depth: i64) -> Result<LocalElem> {
    let f = w.field();
    let r0 = f
        .sqrt(w.leading()?)
        .ok_or_else(|| RtfError::Config("unit part is not a square".into()))?;
    let mut r = LocalElem::monomial(f, r0, 0);
    let half = f
        .inv(f.from_int(2))
        .ok_or_else(|| RtfError::Config("sqrt_unit needs p odd".into()))?;
    let target = w.exact_part(depth);
    // Newton: r <- (r + w/r)/2, doubling precision each step
    let mut prec = 1;
    while prec < depth {
        prec = (2 * prec).min(depth);
        let rinv = r.inv_rel(prec)?;
        r = r.add(&target.mul(&rinv)).scale(half).exact_part(prec);
    }
    Ok(r)
}

fn relabel(x: &LocalElem, field: &Arc<FqField>, g: impl Fn(u32) -> u32) -> LocalElem {
    match x.v() {
        Ok(v) => LocalElem::from_parts(
            field.clone(),
            v,
            x.coeffs().iter().map(|&c| g(c)).collect(),
            x.prec(),
        ),
        Err(_) => match x.prec() {
            Some(p) => LocalElem::zero_mod(field, p),
            None => LocalElem::zero(field),
        },
    }
}

fn zip(a: &ExtElem, b: &ExtElem, op: impl Fn(&LocalElem, &LocalElem) -> LocalElem) -> ExtElem {
    match (a, b) {
        (ExtElem::Field(x), ExtElem::Field(y)) => ExtElem::Field(op(x, y)),
        (ExtElem::Pair(x1, x2), ExtElem::Pair(y1, y2)) => ExtElem::Pair(op(x1, y1), op(x2, y2)),
        _ => panic!("mixed element shapes"),
    }
}

fn map1(a: &ExtElem, op: impl Fn(&LocalElem) -> LocalElem) -> ExtElem {
    match a {
        ExtElem::Field(x) => ExtElem::Field(op(x)),
        ExtElem::Pair(x, y) => ExtElem::Pair(op(x), op(y)),
    }
}

#[cfg(test)]
mod tests;
